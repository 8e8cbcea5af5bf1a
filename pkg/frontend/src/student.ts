import type { ApiClient } from "./client.js";
import { ApiError } from "./client.js";
import type { App } from "./app.js";
import { answerReceived, promptReceived } from "./viewState.js";
import type { PromptResponse } from "./types.js";

const CUE_ASSETS: Record<string, string> = {
  praise: "assets/praise.mp3",
  somber: "assets/somber.mp3",
};

const DIALOG_MS = 1500;

export function playCue(cueId: string | undefined): void {
  const src = cueId && CUE_ASSETS[cueId];
  if (!src) return;
  try {
    void new Audio(src).play().catch(() => undefined);
  } catch {
    // Missing or blocked audio never interrupts the flow.
  }
}

export function starRow(count: number): string {
  return "★".repeat(count) + "☆".repeat(Math.max(0, 5 - count));
}

export class StudentScreen {
  private prompt: PromptResponse | null = null;
  private busy = false;

  constructor(
    private readonly app: App,
    private readonly api: ApiClient,
  ) {}

  async loadPrompt(): Promise<void> {
    const sessionId = this.app.state.sessionId;
    if (!sessionId) return;
    try {
      this.prompt = await this.api.nextPrompt(sessionId);
      this.app.update(promptReceived(this.app.state, this.prompt));
    } catch (err) {
      if (err instanceof ApiError && err.code === "prompt-outstanding") return;
      this.app.showRetryBanner(() => this.loadPrompt());
    }
  }

  render(root: HTMLElement): void {
    const p = this.prompt;
    root.innerHTML = "";
    const header = document.createElement("div");
    header.className = "star-row";
    header.textContent = starRow(this.app.state.tokenDisplay);
    root.appendChild(header);

    if (!p) {
      void this.loadPrompt().then(() => this.app.rerender());
      return;
    }

    if (p.item.media_ref) {
      const img = document.createElement("img");
      img.className = "prompt-image";
      img.src = this.api.mediaUrl(p.item.media_ref);
      img.alt = "";
      root.appendChild(img);
    }

    const question = document.createElement("h1");
    question.className = "prompt-text";
    question.textContent = p.item.prompt_text;
    root.appendChild(question);

    const choiceBox = document.createElement("div");
    choiceBox.className = "choices";
    p.item.choices.forEach((choice, index) => {
      const button = document.createElement("button");
      button.className = "big-button choice";
      button.textContent = choice;
      button.onclick = () => void this.answer(index);
      choiceBox.appendChild(button);
    });
    root.appendChild(choiceBox);

    const dialog = this.app.state.activeDialog;
    if (dialog !== "none") {
      const overlay = document.createElement("div");
      overlay.className = `dialog ${dialog}`;
      overlay.textContent =
        dialog === "praise"
          ? "Great job!"
          : `The answer is: ${this.app.state.dialogText ?? ""}`;
      root.appendChild(overlay);
    }
  }

  private async answer(index: number): Promise<void> {
    const sessionId = this.app.state.sessionId;
    if (!sessionId || this.busy) return; // one in-flight answer at a time
    this.busy = true;
    try {
      const result = await this.api.submitAnswer(sessionId, index);
      this.prompt = null;
      this.app.update(answerReceived(this.app.state, result));
      if (result.outcome === "reward") {
        playCue(result.praise_cue);
        return;
      }
      playCue(result.outcome === "correct" ? result.praise_cue : result.somber_cue);
      // Dialog shows briefly, then the next prompt (the follow-up, after a
      // miss) comes immediately.
      setTimeout(() => {
        void this.loadPrompt().then(() => this.app.rerender());
      }, DIALOG_MS);
    } catch {
      this.app.showRetryBanner(() => this.answer(index));
    } finally {
      this.busy = false;
    }
  }
}
