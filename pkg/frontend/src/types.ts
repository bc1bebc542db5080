/** Wire types for the service's /v1 HTTP interface. */

export type ActionKind =
  | "search_hotels"
  | "search_flights"
  | "open_faq"
  | "human_agent"
  | "covid_info"
  | "clarify"
  | "greeting"
  | "unintelligible";

export type StageName = "vtt" | "translation" | "ner" | "intent" | "route";

export type StageStatus = "ok" | "degraded" | "failed";

export type Variant = "composite" | "learned";

export interface ActionDecision {
  kind: ActionKind;
  destination: string | null;
  origin: string | null;
  faq_intent: string | null;
  missing_slot: "destination" | "origin" | null;
}

export interface StageRecord {
  stage: StageName;
  input_snapshot: string;
  output_snapshot: string;
  status: StageStatus;
  duration_ms: number;
}

export interface PipelineTrace {
  utterance_id: string;
  records: StageRecord[];
  decision: ActionDecision;
}

export interface InterpretRequest {
  text: string;
  lang?: string;
  user_id?: string;
  variant_override?: Variant;
  replay_ref?: string;
}

export interface InterpretResponse {
  action: ActionDecision;
  variant: Variant;
  variant_source: "override" | "assignment" | "default";
  trace: PipelineTrace;
}

export interface HealthResponse {
  status: string;
}

export interface MetricsResponse {
  requests_total: number;
  by_variant: Record<string, number>;
  by_action: Record<string, number>;
}
