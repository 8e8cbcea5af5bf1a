// JSON shapes of the tutoring service protocol.

export interface GateChallenge {
  challenge_id: string;
  operand_a: number;
  operand_b: number;
  operation: string;
  expires_at: number;
}

export interface GateToken {
  token: string;
  issued_at: number;
  expires_at: number;
}

export interface PromptItem {
  item_id: string;
  prompt_text: string;
  media_ref: string | null;
  choices: string[];
  classification_id: string;
  subject: string;
}

export interface PromptResponse {
  item: PromptItem;
  token_display: number;
  is_followup: boolean;
}

export interface RewardEvent {
  cycle_index: number;
  granted_at: number;
  duration_cap_s: number;
  trials_in_cycle: number;
}

export interface AnswerResponse {
  outcome: "correct" | "incorrect" | "reward";
  tokens?: number;
  praise_cue?: string;
  somber_cue?: string;
  correct_answer_text?: string;
  followup_scheduled?: boolean;
  reward?: RewardEvent;
}

export interface SessionMetrics {
  engagement_hours: number;
  accuracy_rate_overall: number | null;
  accuracy_rate_per_cycle: number[];
  generalization_rate: number | null;
}

export interface ContentItem {
  item_id: string;
  prompt_text: string;
  choices: string[];
  correct_index: number;
  classification_id: string;
  subject: string;
  media_ref: string | null;
}

export interface Classification {
  classification_id: string;
  name: string;
  subject: string;
}

export interface ContentPack {
  pack_id: string;
  version: number;
  classifications: Classification[];
  items: ContentItem[];
}

export interface Violation {
  rule: string;
  subject_id: string;
  message: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  [key: string]: unknown;
}
