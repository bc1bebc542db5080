/** Canned wire objects shared by the console tests. */

import type {
  ActionDecision,
  InterpretResponse,
  StageRecord,
  Variant,
} from "../src/types.js";

export function fullTraceRecords(text: string): StageRecord[] {
  const stages: StageRecord["stage"][] = ["vtt", "translation", "ner", "intent", "route"];
  return stages.map((stage) => ({
    stage,
    input_snapshot: text,
    output_snapshot: stage === "route" ? "decision" : text,
    status: "ok",
    duration_ms: 0.1,
  }));
}

export function action(partial: Partial<ActionDecision> & { kind: ActionDecision["kind"] }): ActionDecision {
  return {
    destination: null,
    origin: null,
    faq_intent: null,
    missing_slot: null,
    ...partial,
  };
}

export function response(
  text: string,
  decision: ActionDecision,
  variant: Variant = "composite",
): InterpretResponse {
  return {
    action: decision,
    variant,
    variant_source: "default",
    trace: {
      utterance_id: `req-${text.length}`,
      records: fullTraceRecords(text),
      decision,
    },
  };
}
