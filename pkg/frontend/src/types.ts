/** Wire types for the annotation service HTTP API. */

export const SCHEMA_VERSION = 1;

export interface Candidate {
  tag: string;
  probability: number;
}

export interface TaggedToken {
  surface: string;
  candidates: Candidate[];
}

export interface TagResponse {
  schema_version: number;
  beta: number;
  tokens: TaggedToken[];
}

export interface DocumentSummary {
  id: string;
  tokens: number;
}

export interface DocumentView {
  schema_version: number;
  id: string;
  beta: number;
  tokens: TaggedToken[];
}

export interface AnnotationRecord {
  document_id: string;
  token_index: number;
  chosen_tag: string;
  annotator: string;
  timestamp_ms: number;
}

export interface AnnotationResponse {
  schema_version: number;
  id: string;
  created: boolean;
}

/** One candidate as the UI presents it: wire data plus its rank. */
export interface CandidateView extends Candidate {
  rank: number;
}

export type DecisionStatus = "pending" | "synced" | "failed";

/** Per-token view model derived from one /api/tag (or document) response. */
export interface TokenView {
  index: number;
  surface: string;
  /** Always in rank order (descending probability). */
  candidates: CandidateView[];
  /** More than one candidate: the model is unsure, the annotator should look. */
  flagged: boolean;
  /** The annotator's decision, if any. */
  decided?: string;
  /** True when the decided tag is not among the candidates. */
  override?: boolean;
  status?: DecisionStatus;
}
