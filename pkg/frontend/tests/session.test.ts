import { describe, expect, it } from "vitest";

import { SessionHistory, composeFollowUpText } from "../src/session.js";
import { action, response } from "./fixtures.js";

describe("SessionHistory", () => {
  it("is append-only and preserves order", () => {
    const history = new SessionHistory();
    const first = history.append({
      request: { text: "hello" },
      response: response("hello", action({ kind: "greeting" })),
    });
    const second = history.append({
      request: { text: "credit" },
      response: response("credit", action({ kind: "open_faq", faq_intent: "payments" })),
    });
    expect(first).toBe(0);
    expect(second).toBe(1);
    expect(history.entries.map((e) => e.request.text)).toEqual(["hello", "credit"]);
  });

  it("allows follow-ups only on clarify entries", () => {
    const history = new SessionHistory();
    history.append({
      request: { text: "book a flight" },
      response: response(
        "book a flight",
        action({ kind: "clarify", missing_slot: "destination" }),
      ),
    });
    history.append({
      request: { text: "hello" },
      response: response("hello", action({ kind: "greeting" })),
    });
    expect(history.canFollowUp(0)).toBe(true);
    expect(history.canFollowUp(1)).toBe(false);
    expect(history.canFollowUp(7)).toBe(false);
  });

  it("rejects follow-up links to non-clarify entries", () => {
    const history = new SessionHistory();
    history.append({
      request: { text: "hello" },
      response: response("hello", action({ kind: "greeting" })),
    });
    expect(() =>
      history.append({
        request: { text: "to paris" },
        response: response("to paris", action({ kind: "unintelligible" })),
        followUpOf: 0,
      }),
    ).toThrow(RangeError);
  });
});

describe("composeFollowUpText", () => {
  it("appends a destination phrase", () => {
    expect(composeFollowUpText("book a flight", "destination", "paris")).toBe(
      "book a flight to paris",
    );
  });

  it("appends an origin phrase", () => {
    expect(composeFollowUpText("fly to paris", "origin", "london")).toBe(
      "fly to paris from london",
    );
  });

  it("trims both parts", () => {
    expect(composeFollowUpText("  book a hotel ", "destination", " amsterdam ")).toBe(
      "book a hotel to amsterdam",
    );
  });
});
