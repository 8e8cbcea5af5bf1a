import type { AnswerResponse, PromptResponse } from "./types.js";

export type Route =
  | "home"
  | "teacher-gate"
  | "teacher-list"
  | "teacher-edit"
  | "student"
  | "reward";

export type Dialog = "none" | "praise" | "corrective";

const GATED_ROUTES: Route[] = ["teacher-list", "teacher-edit"];

export interface ViewState {
  route: Route;
  sessionId: string | null;
  gateToken: string | null;
  /** Stars shown; always the last token_display/tokens the server sent. */
  tokenDisplay: number;
  activeDialog: Dialog;
  dialogText: string | null;
  rewardCapS: number | null;
  editingItemId: string | null;
}

export function initialViewState(): ViewState {
  return {
    route: "home",
    sessionId: null,
    gateToken: null,
    tokenDisplay: 0,
    activeDialog: "none",
    dialogText: null,
    rewardCapS: null,
    editingItemId: null,
  };
}

/** Pure transition functions: the UI is a fold over server responses. */

export function navigate(state: ViewState, route: Route): ViewState {
  if (GATED_ROUTES.includes(route) && !state.gateToken) {
    return { ...state, route: "teacher-gate" };
  }
  return { ...state, route };
}

export function gatePassed(state: ViewState, token: string): ViewState {
  return { ...state, gateToken: token, route: "teacher-list" };
}

export function gateRejected(state: ViewState): ViewState {
  // 401/403 from any teacher call lands back on the gate screen.
  return { ...state, gateToken: null, route: "teacher-gate" };
}

export function sessionStarted(state: ViewState, sessionId: string): ViewState {
  return { ...state, sessionId, route: "student", tokenDisplay: 0, activeDialog: "none" };
}

export function promptReceived(state: ViewState, prompt: PromptResponse): ViewState {
  return {
    ...state,
    tokenDisplay: prompt.token_display,
    activeDialog: "none",
    dialogText: null,
  };
}

export function answerReceived(state: ViewState, answer: AnswerResponse): ViewState {
  switch (answer.outcome) {
    case "correct":
      return {
        ...state,
        tokenDisplay: answer.tokens ?? state.tokenDisplay,
        activeDialog: "praise",
        dialogText: null,
      };
    case "incorrect":
      return {
        ...state,
        activeDialog: "corrective",
        dialogText: answer.correct_answer_text ?? null,
      };
    case "reward":
      return {
        ...state,
        tokenDisplay: answer.tokens ?? 0,
        activeDialog: "none",
        dialogText: null,
        route: "reward",
        rewardCapS: answer.reward?.duration_cap_s ?? null,
      };
  }
}

export function rewardFinished(state: ViewState): ViewState {
  // Countdown reached zero: back to the student flow with zero stars.
  return { ...state, route: "student", rewardCapS: null, tokenDisplay: 0 };
}

export function editItem(state: ViewState, itemId: string | null): ViewState {
  if (!state.gateToken) return { ...state, route: "teacher-gate" };
  return { ...state, route: "teacher-edit", editingItemId: itemId };
}
