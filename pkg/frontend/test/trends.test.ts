import { beforeEach, describe, expect, it } from "vitest";

import { renderCountChart, renderTrendChart } from "../src/trends.js";
import { NATIONAL_TRENDS } from "./fixtures.js";

describe("trend chart", () => {
  let container: HTMLElement;

  beforeEach(() => {
    container = document.createElement("div");
    document.body.replaceChildren(container);
  });

  it("point values bit-match the payload's smoothed scores", () => {
    renderTrendChart(container, NATIONAL_TRENDS, ["Harris", "Trump"]);
    const points = container.querySelectorAll<SVGCircleElement>(".point-score");
    expect(points).toHaveLength(NATIONAL_TRENDS.points.length);
    const got = new Map(
      [...points].map((p) => [
        `${p.dataset.series}|${p.dataset.day}`,
        p.dataset.value,
      ]),
    );
    for (const payload of NATIONAL_TRENDS.points) {
      expect(got.get(`${payload.entity}|${payload.day}`)).toBe(
        String(payload.smoothed),
      );
    }
  });

  it("draws one polyline per selected entity", () => {
    renderTrendChart(container, NATIONAL_TRENDS, ["Harris"]);
    const lines = container.querySelectorAll("polyline");
    expect(lines).toHaveLength(1);
    expect(lines[0].getAttribute("data-series")).toBe("Harris");
  });

  it("records the smoothing window on the chart", () => {
    renderTrendChart(container, NATIONAL_TRENDS, ["Harris"]);
    expect(container.querySelector("svg")!.getAttribute("data-window")).toBe(
      String(NATIONAL_TRENDS.window),
    );
  });

  it("shows an empty state for an empty series", () => {
    renderTrendChart(container, { window: 3, points: [] }, ["Harris"]);
    expect(container.querySelector(".empty-state")).not.toBeNull();
    expect(container.querySelector("svg")).toBeNull();
  });
});

describe("count chart", () => {
  let container: HTMLElement;

  beforeEach(() => {
    container = document.createElement("div");
    document.body.replaceChildren(container);
  });

  it("count values bit-match the payload", () => {
    renderCountChart(container, NATIONAL_TRENDS, "Harris", {
      pos: true,
      neu: true,
      neg: true,
    });
    const points = [...container.querySelectorAll<SVGCircleElement>(".point-count")];
    const harris = NATIONAL_TRENDS.points.filter((p) => p.entity === "Harris");
    expect(points).toHaveLength(3 * harris.length);
    for (const payload of harris) {
      for (const cls of ["pos", "neu", "neg"] as const) {
        const match = points.find(
          (p) => p.dataset.series === cls && p.dataset.day === payload.day,
        )!;
        expect(match.dataset.value).toBe(String(payload[cls]));
      }
    }
  });

  it("toggles hide individual count lines", () => {
    renderCountChart(container, NATIONAL_TRENDS, "Harris", {
      pos: true,
      neu: false,
      neg: false,
    });
    const lines = container.querySelectorAll("polyline");
    expect(lines).toHaveLength(1);
    expect(lines[0].getAttribute("data-series")).toBe("pos");
  });

  it("keeps payload order by day", () => {
    renderCountChart(container, NATIONAL_TRENDS, "Harris", {
      pos: true,
      neu: false,
      neg: false,
    });
    const days = [...container.querySelectorAll<SVGCircleElement>(".point-count")].map(
      (p) => p.dataset.day,
    );
    expect(days).toEqual(["2024-07-01", "2024-07-02"]);
  });
});
