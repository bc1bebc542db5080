/**
 * Opt-in end-to-end check against a running service:
 *
 *   CONSOLE_SERVICE_URL=http://127.0.0.1:8080 npx vitest run tests/live.e2e.test.ts
 *
 * Skipped when the env var is unset so the default suite has no server
 * dependency.
 */

import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { ConsoleController } from "../src/controller.js";

const baseUrl = process.env["CONSOLE_SERVICE_URL"];

describe.skipIf(!baseUrl)("live service round trip", () => {
  it("clarification answer routes to a flight search", async () => {
    const controller = new ConsoleController(new ServiceClient(baseUrl!));
    const first = await controller.submit("book a flight", "en");
    expect(first.kind).toBe("ok");
    expect(controller.history.entryAt(0).response.action.kind).toBe("clarify");
    expect(controller.history.entryAt(0).response.trace.records).toHaveLength(5);

    const followUp = await controller.answerClarification(0, "paris");
    expect(followUp.kind).toBe("ok");
    const entry = controller.history.entryAt(1);
    expect(entry.followUpOf).toBe(0);
    expect(entry.response.action.kind).toBe("search_flights");
    expect(entry.response.action.destination).toBe("paris-fr");
  });

  it("renders five stage panels for a full trace", async () => {
    const controller = new ConsoleController(new ServiceClient(baseUrl!));
    await controller.submit("I need to book a hotel in Paris", "en");
    const { renderEntry } = await import("../src/render.js");
    const node = renderEntry(controller.history.entryAt(0), 0);
    expect(node.querySelectorAll(".stage-panel")).toHaveLength(5);
  });
});
