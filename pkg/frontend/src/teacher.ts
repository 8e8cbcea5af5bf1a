import type { ApiClient } from "./client.js";
import { ApiError } from "./client.js";
import type { App } from "./app.js";
import type { ContentItem, GateChallenge, Violation } from "./types.js";
import { editItem, gatePassed, gateRejected, navigate } from "./viewState.js";

const DRAFT_KEY = "aba-tutor-item-draft";

export class TeacherScreens {
  private challenge: GateChallenge | null = null;
  private gateError: string | null = null;

  constructor(
    private readonly app: App,
    private readonly api: ApiClient,
  ) {}

  // -- gate --------------------------------------------------------------

  renderGate(root: HTMLElement): void {
    root.innerHTML = "";
    const title = document.createElement("h1");
    title.textContent = "Teachers only";
    root.appendChild(title);

    if (!this.challenge) {
      void this.api.newGateChallenge().then((c) => {
        this.challenge = c;
        this.app.rerender();
      });
      return;
    }

    const question = document.createElement("p");
    question.className = "gate-question";
    question.textContent = `${this.challenge.operand_a} × ${this.challenge.operand_b} = ?`;
    root.appendChild(question);

    const input = document.createElement("input");
    input.type = "number";
    input.className = "gate-input";
    root.appendChild(input);

    const submit = document.createElement("button");
    submit.className = "big-button";
    submit.textContent = "Enter";
    submit.onclick = () => void this.verify(Number(input.value));
    root.appendChild(submit);

    if (this.gateError) {
      const err = document.createElement("p");
      err.className = "error";
      err.textContent = this.gateError;
      root.appendChild(err);
    }
  }

  private async verify(answer: number): Promise<void> {
    if (!this.challenge) return;
    const challengeId = this.challenge.challenge_id;
    this.challenge = null; // single-use either way; fetch a fresh one next render
    try {
      const token = await this.api.verifyGate(challengeId, answer);
      this.gateError = null;
      this.app.update(gatePassed(this.app.state, token.token));
    } catch (err) {
      this.gateError = err instanceof ApiError ? "Try again." : "Network error.";
      this.app.rerender();
    }
  }

  // -- list --------------------------------------------------------------

  renderList(root: HTMLElement): void {
    root.innerHTML = "";
    const title = document.createElement("h1");
    title.textContent = "Tutoring questions";
    root.appendChild(title);

    const warnings = document.createElement("div");
    warnings.className = "validation";
    root.appendChild(warnings);

    const list = document.createElement("ul");
    list.className = "item-list";
    root.appendChild(list);

    void this.refreshList(list, warnings);

    const add = document.createElement("button");
    add.className = "fab";
    add.textContent = "+";
    add.onclick = () => this.app.update(editItem(this.app.state, null));
    root.appendChild(add);
  }

  private async refreshList(list: HTMLElement, warnings: HTMLElement): Promise<void> {
    try {
      const [pack, validation] = await Promise.all([
        this.api.getContent(),
        this.api.getValidation(),
      ]);
      this.renderWarnings(warnings, validation.violations);
      list.innerHTML = "";
      for (const item of pack.items) {
        const row = document.createElement("li");
        const open = document.createElement("button");
        open.className = "big-button item-row";
        open.textContent = `${item.prompt_text} — ${item.choices[item.correct_index]}`;
        open.onclick = () => this.app.update(editItem(this.app.state, item.item_id));
        row.appendChild(open);
        list.appendChild(row);
      }
    } catch (err) {
      this.handleTeacherError(err);
    }
  }

  private renderWarnings(target: HTMLElement, violations: Violation[]): void {
    target.innerHTML = "";
    for (const v of violations.filter((x) => x.rule === "min-two-per-classification")) {
      const warning = document.createElement("p");
      warning.className = "warning";
      warning.textContent = `"${v.subject_id}" needs at least two questions before students can practice it.`;
      target.appendChild(warning);
    }
  }

  // -- edit --------------------------------------------------------------

  renderEdit(root: HTMLElement): void {
    root.innerHTML = "";
    const title = document.createElement("h1");
    title.textContent = this.app.state.editingItemId ? "Edit question" : "New question";
    root.appendChild(title);

    const form = document.createElement("form");
    form.className = "edit-form";
    const draft = this.loadDraft();
    form.innerHTML = `
      <label>Question <input name="prompt_text" required value="${draft?.prompt_text ?? ""}"></label>
      <label>Classification <input name="classification_id" required value="${draft?.classification_id ?? ""}"></label>
      <label>Subject
        <select name="subject">
          <option value="reading">reading</option>
          <option value="math">math</option>
        </select>
      </label>
      <label>Choices (one per line) <textarea name="choices" required>${(draft?.choices ?? []).join("\n")}</textarea></label>
      <label>Correct choice number <input name="correct_index" type="number" value="${draft?.correct_index ?? 0}"></label>
      <label>Image file <input name="media_ref" value="${draft?.media_ref ?? ""}"></label>
      <button class="big-button" type="submit">Save</button>
    `;
    form.onsubmit = (event) => {
      event.preventDefault();
      void this.save(new FormData(form));
    };
    form.oninput = () => this.saveDraft(new FormData(form));
    root.appendChild(form);
  }

  private formToItem(data: FormData): ContentItem {
    return {
      item_id: this.app.state.editingItemId ?? `item-${Date.now()}`,
      prompt_text: String(data.get("prompt_text") ?? ""),
      classification_id: String(data.get("classification_id") ?? ""),
      subject: String(data.get("subject") ?? "reading"),
      choices: String(data.get("choices") ?? "")
        .split("\n")
        .map((s) => s.trim())
        .filter(Boolean),
      correct_index: Number(data.get("correct_index") ?? 0),
      media_ref: String(data.get("media_ref") ?? "") || null,
    };
  }

  private async save(data: FormData): Promise<void> {
    const item = this.formToItem(data);
    try {
      if (this.app.state.editingItemId) {
        const { item_id: _ignored, ...fields } = item;
        await this.api.editItem(this.app.state.editingItemId, fields);
      } else {
        await this.api.addItem(item);
      }
      this.clearDraft();
      this.app.update(navigate(this.app.state, "teacher-list"));
    } catch (err) {
      this.handleTeacherError(err);
    }
  }

  private handleTeacherError(err: unknown): void {
    if (err instanceof ApiError && (err.status === 401 || err.status === 403)) {
      // Token expired mid-edit: back to the gate, the local draft survives.
      this.app.update(gateRejected(this.app.state));
      return;
    }
    this.app.showRetryBanner(() => this.app.rerender());
  }

  private saveDraft(data: FormData): void {
    try {
      localStorage.setItem(DRAFT_KEY, JSON.stringify(this.formToItem(data)));
    } catch {
      // Storage unavailable; drafts are best-effort.
    }
  }

  private loadDraft(): ContentItem | null {
    try {
      const raw = localStorage.getItem(DRAFT_KEY);
      return raw ? (JSON.parse(raw) as ContentItem) : null;
    } catch {
      return null;
    }
  }

  private clearDraft(): void {
    try {
      localStorage.removeItem(DRAFT_KEY);
    } catch {
      // ignore
    }
  }
}
