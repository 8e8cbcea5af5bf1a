import type {
  AnswerResponse,
  ApiErrorBody,
  ContentItem,
  ContentPack,
  GateChallenge,
  GateToken,
  PromptResponse,
  SessionMetrics,
  Violation,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(body.message ?? `HTTP ${status}`);
  }

  get code(): string {
    return this.body.code;
  }
}

type FetchLike = typeof fetch;

/** Thin typed wrapper over the tutoring service; holds the gate token. */
export class ApiClient {
  gateToken: string | null = null;

  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.gateToken) headers["X-Gate-Token"] = this.gateToken;
    const resp = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = resp.status === 204 ? null : await resp.json();
    if (!resp.ok) throw new ApiError(resp.status, payload as ApiErrorBody);
    return payload as T;
  }

  newGateChallenge(): Promise<GateChallenge> {
    return this.request("POST", "/gate");
  }

  async verifyGate(challengeId: string, answer: number): Promise<GateToken> {
    const token = await this.request<GateToken>("POST", "/gate/verify", {
      challenge_id: challengeId,
      answer,
    });
    this.gateToken = token.token;
    return token;
  }

  getContent(): Promise<ContentPack> {
    return this.request("GET", "/content");
  }

  getValidation(): Promise<{ violations: Violation[] }> {
    return this.request("GET", "/content/validation");
  }

  addItem(item: ContentItem): Promise<ContentItem> {
    return this.request("POST", "/content/items", item);
  }

  editItem(itemId: string, fields: Partial<ContentItem>): Promise<ContentItem> {
    return this.request("PUT", `/content/items/${encodeURIComponent(itemId)}`, fields);
  }

  deleteItem(itemId: string): Promise<void> {
    return this.request("DELETE", `/content/items/${encodeURIComponent(itemId)}`);
  }

  async startSession(seed?: number): Promise<string> {
    const body = seed === undefined ? {} : { seed };
    const resp = await this.request<{ session_id: string }>("POST", "/sessions", body);
    return resp.session_id;
  }

  nextPrompt(sessionId: string): Promise<PromptResponse> {
    return this.request("GET", `/sessions/${sessionId}/prompt`);
  }

  submitAnswer(sessionId: string, selectedIndex: number): Promise<AnswerResponse> {
    return this.request("POST", `/sessions/${sessionId}/answer`, {
      selected_index: selectedIndex,
    });
  }

  heartbeat(sessionId: string): Promise<void> {
    return this.request("POST", `/sessions/${sessionId}/heartbeat`);
  }

  getMetrics(sessionId: string): Promise<SessionMetrics> {
    return this.request("GET", `/sessions/${sessionId}/metrics`);
  }

  mediaUrl(ref: string): string {
    return `${this.baseUrl}/media/${ref}`;
  }
}
