/**
 * Dashboard shell: layer radios, date range picker, overlay toggles, the tile
 * map, trend charts, and the query panel, all strictly read-only over the API.
 *
 * The station roster is fetched exactly once; layer changes re-render from
 * data already in hand, and date changes refetch only the date-scoped
 * endpoints. On a fetch failure the previous view stays on screen behind an
 * error banner.
 */

import { ApiClient, ApiError } from "./api.js";
import { DEFAULT_MAP_OPTIONS, MapData, MapOptions, renderMap } from "./map.js";
import {
  DateBounds,
  MAP_LAYERS,
  MapLayer,
  ViewState,
  initialViewState,
  setDateRange,
  setLayer,
} from "./state.js";
import { CountToggles, renderCountChart, renderTrendChart } from "./trends.js";
import { createQueryPanel } from "./query.js";
import type {
  LeadsPayload,
  NarrativePayload,
  StationsPayload,
  TrendsPayload,
} from "./types.js";

export interface AuxiliaryData {
  county?: string;
  coverage?: string;
  population?: string;
}

export interface DashboardOptions {
  windowDays?: 3 | 7;
  auxiliaryData?: AuxiliaryData;
  map?: MapOptions;
}

interface Snapshot {
  leads: LeadsPayload;
  narrative: NarrativePayload;
  stateTrends: TrendsPayload;
  nationalTrends: TrendsPayload;
}

export class Dashboard {
  readonly root: HTMLElement;
  view!: ViewState;
  bounds!: DateBounds;
  private stations!: StationsPayload;
  private snapshot: Snapshot | null = null;
  private windowDays: 3 | 7;
  private countToggles: CountToggles = { pos: true, neu: true, neg: true };
  private selectedEntities: string[] = [];

  private banner!: HTMLElement;
  private mapEl!: HTMLElement;
  private trendEl!: HTMLElement;
  private countEl!: HTMLElement;
  private fromInput!: HTMLInputElement;
  private toInput!: HTMLInputElement;

  constructor(
    root: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: DashboardOptions = {},
  ) {
    this.root = root;
    this.windowDays = options.windowDays ?? 3;
  }

  async init(): Promise<void> {
    this.stations = await this.api.stations(); // fetched exactly once
    const national = await this.api.trends({ scope: "national" });
    const days = national.points.map((p) => p.day).sort();
    this.bounds =
      days.length > 0
        ? { min: days[0], max: days[days.length - 1] }
        : { min: "2024-06-26", max: "2024-10-03" };
    this.view = initialViewState(this.bounds);
    this.selectedEntities = [...new Set(national.points.map((p) => p.entity))].sort();
    this.buildShell();
    await this.refresh();
  }

  private buildShell(): void {
    this.root.textContent = "";
    this.root.className = "dashboard";

    this.banner = document.createElement("div");
    this.banner.className = "error-banner";
    this.banner.hidden = true;
    this.root.appendChild(this.banner);

    const controls = document.createElement("div");
    controls.className = "controls";

    const layerGroup = document.createElement("fieldset");
    layerGroup.className = "layer-toggle";
    for (const layer of MAP_LAYERS) {
      const label = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "layer";
      radio.value = layer;
      radio.checked = layer === "party";
      radio.addEventListener("change", () => {
        void this.setLayer(layer);
      });
      label.append(radio, document.createTextNode(layer));
      layerGroup.appendChild(label);
    }
    controls.appendChild(layerGroup);

    const range = document.createElement("span");
    range.className = "date-picker";
    this.fromInput = document.createElement("input");
    this.toInput = document.createElement("input");
    for (const [input, value] of [
      [this.fromInput, this.view.from],
      [this.toInput, this.view.to],
    ] as const) {
      input.type = "date";
      input.min = this.bounds.min;
      input.max = this.bounds.max;
      input.value = value;
      input.addEventListener("change", () => {
        void this.setRange(this.fromInput.value, this.toInput.value);
      });
      range.appendChild(input);
    }
    controls.appendChild(range);

    const windowSelect = document.createElement("select");
    windowSelect.className = "window-select";
    for (const w of [3, 7] as const) {
      const opt = document.createElement("option");
      opt.value = String(w);
      opt.textContent = `${w}-day average`;
      opt.selected = w === this.windowDays;
      windowSelect.appendChild(opt);
    }
    windowSelect.addEventListener("change", () => {
      this.windowDays = Number(windowSelect.value) as 3 | 7;
      void this.refresh();
    });
    controls.appendChild(windowSelect);

    const aux = this.options.auxiliaryData ?? {};
    for (const name of ["county", "coverage", "population"] as const) {
      const label = document.createElement("label");
      label.className = `overlay-toggle overlay-${name}`;
      const box = document.createElement("input");
      box.type = "checkbox";
      box.disabled = !aux[name]; // no data configured -> toggle stays off
      box.addEventListener("change", () => {
        this.view = {
          ...this.view,
          toggles: { ...this.view.toggles, [name]: box.checked },
        };
        this.renderAll();
      });
      label.append(box, document.createTextNode(`show ${name}`));
      controls.appendChild(label);
    }
    this.root.appendChild(controls);

    this.mapEl = document.createElement("div");
    this.trendEl = document.createElement("div");
    this.countEl = document.createElement("div");
    this.root.append(this.mapEl, this.trendEl, this.countEl);

    const countToggleBar = document.createElement("div");
    countToggleBar.className = "count-toggles";
    for (const cls of ["pos", "neu", "neg"] as const) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = true;
      box.dataset.series = cls;
      box.addEventListener("change", () => {
        this.countToggles = { ...this.countToggles, [cls]: box.checked };
        this.renderAll();
      });
      label.append(box, document.createTextNode(cls));
      countToggleBar.appendChild(label);
    }
    this.root.appendChild(countToggleBar);

    const panel = createQueryPanel(this.api);
    this.root.appendChild(panel.element);
    this.mapEl.addEventListener("click", (event) => {
      const tile = (event.target as HTMLElement).closest<HTMLElement>(".state-tile");
      if (!tile) return;
      const code = tile.dataset.state ?? null;
      this.view = { ...this.view, selectedState: code };
      panel.setStateFilter(code);
      this.renderAll();
    });
  }

  async setLayer(layer: MapLayer): Promise<void> {
    this.view = setLayer(this.view, layer);
    this.renderAll(); // same snapshot, different projection: no fetches
  }

  async setRange(from: string, to: string): Promise<void> {
    this.view = setDateRange(this.view, this.bounds, from, to);
    this.fromInput.value = this.view.from;
    this.toInput.value = this.view.to;
    await this.refresh();
  }

  async refresh(): Promise<void> {
    const { from, to } = this.view;
    try {
      const [leads, narrative, stateTrends, nationalTrends] = await Promise.all([
        this.api.leads(from, to),
        this.api.narrative(undefined, from, to),
        this.api.trends({ scope: "state", from, to, window: this.windowDays }),
        this.api.trends({ scope: "national", from, to, window: this.windowDays }),
      ]);
      this.snapshot = { leads, narrative, stateTrends, nationalTrends };
      this.banner.hidden = true;
    } catch (err) {
      this.banner.hidden = false;
      this.banner.textContent =
        err instanceof ApiError
          ? `API unavailable: ${err.message} (showing last data)`
          : `unexpected failure: ${String(err)}`;
      return; // keep the previous snapshot on screen
    }
    this.renderAll();
  }

  private renderAll(): void {
    if (!this.snapshot) return;
    const data: MapData = {
      leads: this.snapshot.leads,
      narrative: this.snapshot.narrative,
      stations: this.stations,
      stateTrends: this.snapshot.stateTrends,
    };
    renderMap(this.mapEl, this.view, data, this.options.map ?? DEFAULT_MAP_OPTIONS);
    renderTrendChart(this.trendEl, this.snapshot.nationalTrends, this.selectedEntities);
    const entity = this.selectedEntities[0] ?? "";
    renderCountChart(this.countEl, this.snapshot.nationalTrends, entity, this.countToggles);
  }
}

export async function createDashboard(
  root: HTMLElement,
  api: ApiClient,
  options: DashboardOptions = {},
): Promise<Dashboard> {
  const dashboard = new Dashboard(root, api, options);
  await dashboard.init();
  return dashboard;
}
