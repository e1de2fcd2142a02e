/** Question panel over the retrieval endpoint: answer text + clickable sources. */

import { ApiClient } from "./api.js";

export interface QueryPanel {
  element: HTMLElement;
  /** Submit programmatically (the form's submit handler calls this too). */
  ask(question: string): Promise<void>;
  setStateFilter(code: string | null): void;
}

export function createQueryPanel(api: ApiClient, k = 8): QueryPanel {
  const element = document.createElement("section");
  element.className = "query-panel";

  const form = document.createElement("form");
  const input = document.createElement("input");
  input.type = "text";
  input.name = "question";
  input.placeholder = "Ask about what was on the air...";
  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = "Search";
  const chip = document.createElement("span");
  chip.className = "filter-chip";
  chip.hidden = true;
  form.append(input, button, chip);

  const answer = document.createElement("div");
  answer.className = "answer";
  const sources = document.createElement("ul");
  sources.className = "sources";
  const errorBox = document.createElement("div");
  errorBox.className = "query-error";
  errorBox.hidden = true;
  element.append(form, errorBox, answer, sources);

  let stateFilter: string | null = null;
  let lastQuestion = "";

  function renderError(message: string): void {
    errorBox.hidden = false;
    errorBox.textContent = "";
    const text = document.createElement("span");
    text.textContent = `${message} `;
    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void ask(lastQuestion));
    errorBox.append(text, retry);
  }

  async function ask(question: string): Promise<void> {
    if (!question.trim()) return;
    lastQuestion = question;
    errorBox.hidden = true;
    let payload;
    try {
      payload = await api.query(
        question,
        k,
        stateFilter ? { state: stateFilter } : undefined,
      );
    } catch (err) {
      renderError(`query failed: ${err instanceof Error ? err.message : String(err)}`);
      return;
    }
    answer.textContent = payload.answer;
    sources.textContent = "";
    for (const source of payload.sources) {
      const item = document.createElement("li");
      const link = document.createElement("a");
      link.className = "source";
      link.href = `#chunk-${source.id}`;
      link.dataset.id = source.id;
      link.dataset.state = source.metadata.state ?? "";
      link.textContent = `${source.metadata.call_sign ?? "?"} · ${
        source.metadata.date ?? "?"
      } ${source.metadata.time ?? ""} (${source.metadata.state ?? "?"})`;
      item.appendChild(link);
      sources.appendChild(item);
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void ask(input.value);
  });

  return {
    element,
    ask,
    setStateFilter(code: string | null) {
      stateFilter = code;
      chip.hidden = code === null;
      chip.textContent = code ? `state=${code}` : "";
    },
  };
}
