/** DOM rendering: one panel per stage record, an action card per entry. */

import type { SessionEntry } from "./session.js";
import type { ActionDecision, StageRecord } from "./types.js";

const ACTION_TITLES: Record<string, string> = {
  search_hotels: "Search hotels",
  search_flights: "Search flights",
  open_faq: "Open FAQ",
  human_agent: "Hand off to human agent",
  covid_info: "Show COVID-19 information",
  clarify: "Needs clarification",
  greeting: "Greeting",
  unintelligible: "Unintelligible",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderStagePanel(record: StageRecord, variant: string): HTMLElement {
  const panel = el("article", `stage-panel status-${record.status}`);
  panel.dataset.stage = record.stage;
  const header = el("header");
  header.append(el("h4", "stage-name", record.stage));
  if (record.stage === "intent") {
    header.append(el("span", "backend-label", variant));
  }
  header.append(el("span", `status-pill status-${record.status}`, record.status));
  panel.append(header);
  const io = el("div", "stage-io");
  io.append(el("pre", "stage-input", record.input_snapshot));
  io.append(el("pre", "stage-output", record.output_snapshot));
  panel.append(io);
  panel.append(el("footer", "stage-duration", `${record.duration_ms.toFixed(2)} ms`));
  return panel;
}

function describeSlots(action: ActionDecision): string[] {
  const slots: string[] = [];
  if (action.destination) {
    slots.push(`destination: ${action.destination}`);
  }
  if (action.origin) {
    slots.push(`origin: ${action.origin}`);
  }
  if (action.faq_intent) {
    slots.push(`intent: ${action.faq_intent}`);
  }
  if (action.missing_slot) {
    slots.push(`missing: ${action.missing_slot}`);
  }
  return slots;
}

function renderActionCard(entry: SessionEntry, index: number): HTMLElement {
  const action = entry.response.action;
  const card = el("div", `action-card kind-${action.kind}`);
  card.append(el("h3", "action-title", ACTION_TITLES[action.kind] ?? action.kind));
  const slots = describeSlots(action);
  if (slots.length) {
    const list = el("ul", "action-slots");
    for (const slot of slots) {
      list.append(el("li", undefined, slot));
    }
    card.append(list);
  }
  if (action.kind === "clarify") {
    card.append(renderClarifyForm(index, action.missing_slot ?? "destination"));
  }
  return card;
}

function renderClarifyForm(index: number, slot: string): HTMLElement {
  const form = el("form", "clarify-form");
  form.dataset.entryIndex = String(index);
  const input = el("input", "clarify-input");
  input.type = "text";
  input.placeholder = `enter a ${slot}`;
  const button = el("button", "clarify-submit", "answer");
  button.type = "submit";
  form.append(input, button);
  return form;
}

export function renderEntry(entry: SessionEntry, index: number): HTMLElement {
  const section = el("section", "entry");
  section.dataset.index = String(index);
  const header = el("header", "entry-header");
  header.append(el("span", "entry-text", `“${entry.request.text}”`));
  header.append(el("span", "entry-variant", entry.response.variant));
  if (entry.followUpOf !== undefined) {
    header.append(el("span", "entry-follow-up", `answers #${entry.followUpOf + 1}`));
  }
  section.append(header);
  const stages = el("div", "stages");
  for (const record of entry.response.trace.records) {
    stages.append(renderStagePanel(record, entry.response.variant));
  }
  section.append(stages);
  section.append(renderActionCard(entry, index));
  return section;
}

export function renderHistory(
  container: HTMLElement,
  entries: readonly SessionEntry[],
): void {
  container.replaceChildren();
  entries.forEach((entry, index) => {
    container.prepend(renderEntry(entry, index));
  });
}

export function renderBanner(container: HTMLElement, message: string | null): void {
  container.replaceChildren();
  if (message !== null) {
    container.append(el("div", "error-banner", message));
  }
}
