/** Orchestrates submissions: validation, service calls, history updates.
 *
 * History is append-only and is never touched when a request fails, so a
 * dead service cannot corrupt what the user already sees.
 */

import { ServiceClient, ServiceError } from "./api.js";
import { SessionHistory, composeFollowUpText } from "./session.js";
import type { InterpretRequest, Variant } from "./types.js";

export type SubmitOutcome =
  | { kind: "ok"; index: number }
  | { kind: "invalid"; message: string }
  | { kind: "unreachable"; message: string };

export class ConsoleController {
  readonly history = new SessionHistory();
  lastError: string | null = null;

  constructor(private readonly client: ServiceClient) {}

  async submit(
    text: string,
    lang: string,
    variantOverride?: Variant,
    followUpOf?: number,
  ): Promise<SubmitOutcome> {
    if (!text.trim()) {
      return { kind: "invalid", message: "enter an utterance first" };
    }
    const request: InterpretRequest = { text, lang };
    if (variantOverride) {
      request.variant_override = variantOverride;
    }
    try {
      const response = await this.client.interpret(request);
      this.lastError = null;
      const index = this.history.append({ request, response, followUpOf });
      return { kind: "ok", index };
    } catch (error) {
      const message =
        error instanceof ServiceError ? error.message : `unexpected error: ${String(error)}`;
      this.lastError = message;
      return { kind: "unreachable", message };
    }
  }

  async answerClarification(index: number, answer: string): Promise<SubmitOutcome> {
    if (!this.history.canFollowUp(index)) {
      return { kind: "invalid", message: "that entry takes no answer" };
    }
    if (!answer.trim()) {
      return { kind: "invalid", message: "enter a value first" };
    }
    const entry = this.history.entryAt(index);
    const missing = entry.response.action.missing_slot ?? "destination";
    const merged = composeFollowUpText(entry.request.text, missing, answer);
    return this.submit(
      merged,
      entry.request.lang ?? "en",
      entry.request.variant_override,
      index,
    );
  }
}
