/**
 * SVG line charts for sentiment trends.
 *
 * Pixel coordinates are derived for layout, but every value a reader can
 * extract (point markers, labels, data attributes) is the API payload value
 * stringified verbatim.
 */

import type { TrendPoint, TrendsPayload } from "./types.js";

const WIDTH = 640;
const HEIGHT = 220;
const PAD = 28;

export const SERIES_COLORS: Record<string, string> = {
  Harris: "#2a66c8",
  Biden: "#6a8fd8",
  Trump: "#c23b2e",
  pos: "#2e8b57",
  neu: "#888888",
  neg: "#b0413e",
};

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS("http://www.w3.org/2000/svg", tag);
}

interface Series {
  name: string;
  points: { day: string; value: number }[];
}

function drawSeries(svg: SVGSVGElement, series: Series[], kind: string): void {
  const days = [...new Set(series.flatMap((s) => s.points.map((p) => p.day)))].sort();
  const values = series.flatMap((s) => s.points.map((p) => p.value));
  if (days.length === 0) return;
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const spanY = hi - lo || 1;
  const x = (day: string) =>
    PAD + (days.indexOf(day) / Math.max(1, days.length - 1)) * (WIDTH - 2 * PAD);
  const y = (v: number) => HEIGHT - PAD - ((v - lo) / spanY) * (HEIGHT - 2 * PAD);

  for (const s of series) {
    const color = SERIES_COLORS[s.name] ?? "#444";
    const path = svgEl("polyline");
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", color);
    path.setAttribute("stroke-width", "2");
    path.setAttribute("data-series", s.name);
    path.setAttribute(
      "points",
      s.points.map((p) => `${x(p.day)},${y(p.value)}`).join(" "),
    );
    svg.appendChild(path);
    for (const p of s.points) {
      const dot = svgEl("circle");
      dot.setAttribute("cx", String(x(p.day)));
      dot.setAttribute("cy", String(y(p.value)));
      dot.setAttribute("r", "3");
      dot.setAttribute("fill", color);
      dot.setAttribute("class", `point point-${kind}`);
      dot.setAttribute("data-series", s.name);
      dot.setAttribute("data-day", p.day);
      dot.setAttribute("data-value", String(p.value));
      const title = svgEl("title");
      title.textContent = `${s.name} ${p.day}: ${String(p.value)}`;
      dot.appendChild(title);
      svg.appendChild(dot);
    }
  }
}

function emptyState(container: HTMLElement, message: string): void {
  const div = document.createElement("div");
  div.className = "empty-state";
  div.textContent = message;
  container.appendChild(div);
}

/** Smoothed-score lines, one per selected entity. */
export function renderTrendChart(
  container: HTMLElement,
  payload: TrendsPayload,
  entities: string[],
): void {
  container.textContent = "";
  container.classList.add("trend-chart");
  const byEntity = new Map<string, TrendPoint[]>();
  for (const p of payload.points) {
    if (!entities.includes(p.entity)) continue;
    const list = byEntity.get(p.entity) ?? [];
    list.push(p);
    byEntity.set(p.entity, list);
  }
  if (byEntity.size === 0) {
    emptyState(container, "no sentiment data in this range");
    return;
  }
  const svg = svgEl("svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("data-window", String(payload.window));
  drawSeries(
    svg,
    [...byEntity.entries()].map(([name, pts]) => ({
      name,
      points: pts
        .slice()
        .sort((a, b) => (a.day < b.day ? -1 : 1))
        .map((p) => ({ day: p.day, value: p.smoothed })),
    })),
    "score",
  );
  container.appendChild(svg);
}

export interface CountToggles {
  pos: boolean;
  neu: boolean;
  neg: boolean;
}

/** Daily sentiment-count lines with pos/neu/neg visibility toggles. */
export function renderCountChart(
  container: HTMLElement,
  payload: TrendsPayload,
  entity: string,
  toggles: CountToggles,
): void {
  container.textContent = "";
  container.classList.add("count-chart");
  const points = payload.points
    .filter((p) => p.entity === entity)
    .sort((a, b) => (a.day < b.day ? -1 : 1));
  if (points.length === 0) {
    emptyState(container, "no mention counts in this range");
    return;
  }
  const svg = svgEl("svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  const series: Series[] = [];
  for (const cls of ["pos", "neu", "neg"] as const) {
    if (!toggles[cls]) continue;
    series.push({
      name: cls,
      points: points.map((p) => ({ day: p.day, value: p[cls] })),
    });
  }
  if (series.length === 0) {
    emptyState(container, "all count lines hidden");
    return;
  }
  drawSeries(svg, series, "count");
  container.appendChild(svg);
}
