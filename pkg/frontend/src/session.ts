/** Append-only session history with clarification follow-up links. */

import type { InterpretRequest, InterpretResponse } from "./types.js";

export interface SessionEntry {
  request: InterpretRequest;
  response: InterpretResponse;
  /** Index of the earlier Clarify entry this one answers, if any. */
  followUpOf?: number;
}

export class SessionHistory {
  private readonly items: SessionEntry[] = [];

  get entries(): readonly SessionEntry[] {
    return this.items;
  }

  get length(): number {
    return this.items.length;
  }

  entryAt(index: number): SessionEntry {
    const entry = this.items[index];
    if (entry === undefined) {
      throw new RangeError(`no session entry at index ${index}`);
    }
    return entry;
  }

  /** Follow-ups may only answer an earlier entry that asked to clarify. */
  canFollowUp(index: number): boolean {
    if (index < 0 || index >= this.items.length) {
      return false;
    }
    return this.entryAt(index).response.action.kind === "clarify";
  }

  append(entry: SessionEntry): number {
    if (entry.followUpOf !== undefined && !this.canFollowUp(entry.followUpOf)) {
      throw new RangeError(`entry ${entry.followUpOf} is not answerable`);
    }
    this.items.push(entry);
    return this.items.length - 1;
  }
}

/**
 * Compose the merged utterance that answers a clarification prompt: the
 * original text plus a clarifying phrase for the missing slot, e.g.
 * "book a flight" answered with "paris" becomes "book a flight to paris".
 */
export function composeFollowUpText(
  originalText: string,
  missingSlot: "destination" | "origin",
  answer: string,
): string {
  const preposition = missingSlot === "origin" ? "from" : "to";
  return `${originalText.trim()} ${preposition} ${answer.trim()}`;
}
