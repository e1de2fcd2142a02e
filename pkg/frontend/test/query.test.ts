import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { createQueryPanel } from "../src/query.js";
import { QUERY_RESULT, defaultRoutes, scriptedFetch } from "./fixtures.js";

describe("query panel", () => {
  beforeEach(() => {
    document.body.replaceChildren();
  });

  it("renders the answer and clickable sources with station and date", async () => {
    const scripted = scriptedFetch(defaultRoutes());
    const panel = createQueryPanel(new ApiClient("/api/v1", scripted.fetch));
    document.body.appendChild(panel.element);

    await panel.ask("Were there discrepancies in the vote count?");

    expect(panel.element.querySelector(".answer")!.textContent).toBe(
      QUERY_RESULT.answer,
    );
    const links = panel.element.querySelectorAll<HTMLAnchorElement>("a.source");
    expect(links).toHaveLength(2);
    expect(links[0].textContent).toContain("WDUN");
    expect(links[0].textContent).toContain("2024-07-01");
    expect(links[0].getAttribute("href")).toBe("#chunk-GA_WDUN_2024_07_01_08_00");
  });

  it("sends the state filter chip with the request body", async () => {
    const scripted = scriptedFetch(defaultRoutes());
    const panel = createQueryPanel(new ApiClient("/api/v1", scripted.fetch));
    panel.setStateFilter("GA");

    await panel.ask("anything");

    const call = scripted.calls.find((c) => c.url.endsWith("/query"))!;
    expect(JSON.parse(String(call.init!.body))).toEqual({
      question: "anything",
      k: 8,
      filter: { state: "GA" },
    });
    expect(panel.element.querySelector<HTMLElement>(".filter-chip")!.hidden).toBe(false);
  });

  it("offers a retry affordance after a transport failure, and retry works", async () => {
    const scripted = scriptedFetch(defaultRoutes());
    const panel = createQueryPanel(new ApiClient("/api/v1", scripted.fetch));
    document.body.appendChild(panel.element);

    scripted.setRoutes(null); // outage
    await panel.ask("did anything happen?");
    const errorBox = panel.element.querySelector<HTMLElement>(".query-error")!;
    expect(errorBox.hidden).toBe(false);
    const retry = errorBox.querySelector<HTMLButtonElement>("button.retry")!;
    expect(retry).not.toBeNull();

    scripted.setRoutes(defaultRoutes()); // service is back
    retry.click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(panel.element.querySelector(".answer")!.textContent).toBe(
      QUERY_RESULT.answer,
    );
    expect(errorBox.hidden).toBe(true);
  });

  it("submitting the form asks the typed question", async () => {
    const scripted = scriptedFetch(defaultRoutes());
    const panel = createQueryPanel(new ApiClient("/api/v1", scripted.fetch));
    document.body.appendChild(panel.element);
    const input = panel.element.querySelector<HTMLInputElement>("input[name=question]")!;
    input.value = "what aired this morning?";
    panel.element.querySelector("form")!.dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await new Promise((resolve) => setTimeout(resolve, 0));
    const call = scripted.calls.find((c) => c.url.endsWith("/query"))!;
    expect(JSON.parse(String(call.init!.body)).question).toBe(
      "what aired this morning?",
    );
  });
});
