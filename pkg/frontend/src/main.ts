/** Page bootstrap: wire the form, the variant toggle, and history view. */

import { ServiceClient } from "./api.js";
import { ConsoleController } from "./controller.js";
import { renderBanner, renderHistory } from "./render.js";
import type { Variant } from "./types.js";

function mustFind<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

export function bootstrap(): void {
  const baseUrlInput = mustFind<HTMLInputElement>("base-url");
  const textInput = mustFind<HTMLInputElement>("utterance");
  const langSelect = mustFind<HTMLSelectElement>("lang");
  const variantSelect = mustFind<HTMLSelectElement>("variant");
  const form = mustFind<HTMLFormElement>("utterance-form");
  const historyContainer = mustFind<HTMLElement>("history");
  const bannerContainer = mustFind<HTMLElement>("banner");

  let controller = new ConsoleController(new ServiceClient(baseUrlInput.value));
  baseUrlInput.addEventListener("change", () => {
    // New endpoint, fresh session: traces from different configs do not mix.
    controller = new ConsoleController(new ServiceClient(baseUrlInput.value));
    refresh();
  });

  function refresh(): void {
    renderHistory(historyContainer, controller.history.entries);
    renderBanner(bannerContainer, controller.lastError);
  }

  function selectedVariant(): Variant | undefined {
    const value = variantSelect.value;
    return value === "composite" || value === "learned" ? value : undefined;
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void controller
      .submit(textInput.value, langSelect.value, selectedVariant())
      .then((outcome) => {
        if (outcome.kind === "ok") {
          textInput.value = "";
        }
        if (outcome.kind === "invalid") {
          textInput.focus();
          return;
        }
        refresh();
      });
  });

  historyContainer.addEventListener("submit", (event) => {
    const target = event.target as HTMLElement;
    if (!target.classList.contains("clarify-form")) {
      return;
    }
    event.preventDefault();
    const index = Number(target.dataset["entryIndex"]);
    const input = target.querySelector<HTMLInputElement>(".clarify-input");
    const answer = input?.value ?? "";
    if (!answer.trim()) {
      input?.focus();
      return;
    }
    void controller.answerClarification(index, answer).then(() => refresh());
  });

  refresh();
}

bootstrap();
