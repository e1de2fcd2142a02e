/**
 * US tile-grid map with the sentiment/narrative layers.
 *
 * Shading, bubble sizing, and tile placement are presentation; every number
 * shown (lead labels, counts, scores) is the API's value rendered verbatim
 * via String(...), never recomputed.
 */

import { GRID_COLS, STATE_TILES } from "./tiles.js";
import type { ViewState } from "./state.js";
import type {
  LeadsPayload,
  NarrativePayload,
  StationsPayload,
  TrendPoint,
  TrendsPayload,
} from "./types.js";

export interface MapData {
  leads: LeadsPayload;
  narrative: NarrativePayload;
  stations: StationsPayload;
  stateTrends: TrendsPayload;
}

export interface MapOptions {
  /** Party letter -> candidate name, mirroring the API's configuration. */
  partyCandidates: Record<string, string>;
}

export const DEFAULT_MAP_OPTIONS: MapOptions = {
  partyCandidates: { D: "Harris", R: "Trump" },
};

function leadClass(label: string): string {
  if (label.startsWith("D+")) return "lead-d";
  if (label.startsWith("R+")) return "lead-r";
  if (label === "Tie") return "lead-tie";
  return "lead-none";
}

/** Latest point in range per (state, entity); selection only, no arithmetic. */
function latestByStateEntity(points: TrendPoint[]): Map<string, TrendPoint> {
  const latest = new Map<string, TrendPoint>();
  for (const p of points) {
    const key = `${p.scope}|${p.entity}`;
    const existing = latest.get(key);
    if (!existing || p.day > existing.day) latest.set(key, p);
  }
  return latest;
}

export function renderMap(
  container: HTMLElement,
  view: ViewState,
  data: MapData,
  options: MapOptions = DEFAULT_MAP_OPTIONS,
): void {
  container.textContent = "";
  container.classList.add("tile-map");
  container.dataset.layer = view.layer;

  const leadByState = new Map(data.leads.leads.map((l) => [l.state, l.label]));
  const stationsByState = new Map<string, string[]>();
  for (const station of data.stations.stations) {
    if (!station.state) continue;
    const list = stationsByState.get(station.state) ?? [];
    list.push(station.call_sign);
    stationsByState.set(station.state, list);
  }
  const latest = latestByStateEntity(
    data.stateTrends.points.filter((p) => p.scope !== "national"),
  );
  const entities = [...new Set(data.stateTrends.points.map((p) => p.entity))].sort();

  for (const [code, tile] of Object.entries(STATE_TILES)) {
    const cell = document.createElement("div");
    cell.className = "state-tile";
    cell.dataset.state = code;
    cell.style.gridColumn = String(tile.col + 1);
    cell.style.gridRow = String(tile.row + 1);
    if (view.selectedState === code) cell.classList.add("selected");

    const name = document.createElement("span");
    name.className = "state-code";
    name.textContent = code;
    cell.appendChild(name);

    if (view.layer === "party" || view.layer === "candidate") {
      const label = leadByState.get(code);
      cell.classList.add(label ? leadClass(label) : "lead-none");
      if (label) {
        cell.dataset.label = label;
        const tag = document.createElement("span");
        tag.className = "lead-label";
        tag.textContent =
          view.layer === "candidate" ? leaderName(label, options) : label;
        cell.appendChild(tag);
      }
    } else if (view.layer === "party-absolute" || view.layer === "candidate-absolute") {
      const rows = entities
        .map((entity) => latest.get(`${code}|${entity}`))
        .filter((p): p is TrendPoint => p !== undefined);
      for (const point of rows) {
        const line = document.createElement("span");
        line.className = "absolute-counts";
        line.dataset.entity = point.entity;
        line.dataset.pos = String(point.pos);
        line.dataset.neu = String(point.neu);
        line.dataset.neg = String(point.neg);
        line.textContent = `${point.entity} +${String(point.pos)} o${String(
          point.neu,
        )} -${String(point.neg)}`;
        cell.appendChild(line);
      }
      if (rows.length > 0) cell.classList.add("has-counts");
    } else if (view.layer === "narrative") {
      const stances = data.narrative.states[code];
      if (stances) {
        const total = Object.values(stances).reduce((a, b) => a + b, 0);
        const bubble = document.createElement("span");
        bubble.className = "bubble";
        // bubble diameter is presentation; the displayed counts are verbatim
        bubble.style.width = bubble.style.height = `${Math.min(
          40,
          8 + 4 * Math.sqrt(total),
        )}px`;
        bubble.title = Object.entries(stances)
          .sort()
          .map(([stance, count]) => `${stance}: ${String(count)}`)
          .join(", ");
        for (const [stance, count] of Object.entries(stances).sort()) {
          bubble.dataset[stance] = String(count);
        }
        cell.appendChild(bubble);
      }
    }

    const calls = stationsByState.get(code) ?? [];
    const markers = document.createElement("span");
    markers.className = "markers";
    for (const call of calls) {
      const dot = document.createElement("i");
      dot.className = "station-marker";
      dot.title = call;
      markers.appendChild(dot);
    }
    cell.appendChild(markers);
    container.appendChild(cell);
  }
  container.style.gridTemplateColumns = `repeat(${GRID_COLS}, 1fr)`;
}

/** Candidate-layer text: configured candidate name plus the verbatim label. */
function leaderName(label: string, options: MapOptions): string {
  const candidate = options.partyCandidates[label[0]];
  return candidate ? `${candidate} ${label}` : label;
}
