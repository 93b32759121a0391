// Payload shapes of the session HTTP API.

export type QuestionKind = "message_loss" | "dummy_token" | "select";

export interface Candidate {
  tokens: string[];
  lcs_len: number;
  display: string;
  // Candidate token positions that belong to the LCS with the target.
  overlap: number[];
}

export interface QuestionPayload {
  seq: number;
  kind: QuestionKind;
  target: string[];
  target_display: string;
  target_log_index: number | null;
  origin: string;
  samples: string[];
  candidates: Candidate[];
}

export interface QuestionResponse {
  pending: boolean;
  state: string;
  question?: QuestionPayload;
}

export interface Progress {
  phase: string;
  done: number;
  total: number;
}

export interface CountersSnapshot {
  n_message_loss: number;
  n_select: number;
  n_dummy_token: number;
  n_total: number;
}

export interface SessionStatus {
  id: string;
  state: string;
  progress: Progress;
  counters: CountersSnapshot;
  error: string | null;
}

export interface AnswerBody {
  seq: number;
  kind: QuestionKind;
  loss?: boolean;
  tokens?: string[] | null;
  index?: number | null;
}

export interface AnswerAck {
  status: "accepted" | "ignored";
  state: string;
}

export interface ClusterView {
  template: string[];
  members: number[];
  display?: string;
  samples?: string[];
}

export interface SessionResult {
  clustering: { n_logs: number; clusters: ClusterView[] };
  report?: {
    ga_before: number;
    ga_after: number;
    ma_before: number;
    ma_after: number;
    [key: string]: unknown;
  };
  counters?: CountersSnapshot;
}

export interface CreateSessionBody {
  corpus:
    | { generate: { k: number; logs_per_cluster: number; param_slots: number; seed: number } }
    | { logs_path: string; truth_path?: string };
  base?: { knobs?: Record<string, number>; import_path?: string };
  repeat: number | "until-stable";
}
