/** Dashboard view state: one active map layer, a date range, overlay toggles. */

export const MAP_LAYERS = [
  "party",
  "candidate",
  "party-absolute",
  "candidate-absolute",
  "narrative",
] as const;

export type MapLayer = (typeof MAP_LAYERS)[number];

export interface DateBounds {
  min: string; // ISO dates
  max: string;
}

export interface ViewState {
  layer: MapLayer;
  from: string;
  to: string;
  toggles: { county: boolean; coverage: boolean; population: boolean };
  selectedState: string | null;
}

export function initialViewState(bounds: DateBounds): ViewState {
  return {
    layer: "party",
    from: bounds.min,
    to: bounds.max,
    toggles: { county: false, coverage: false, population: false },
    selectedState: null,
  };
}

export function setLayer(state: ViewState, layer: MapLayer): ViewState {
  return { ...state, layer };
}

/** Clamp a requested range to the data bounds and keep from <= to. */
export function setDateRange(
  state: ViewState,
  bounds: DateBounds,
  from: string,
  to: string,
): ViewState {
  const lo = from < bounds.min ? bounds.min : from > bounds.max ? bounds.max : from;
  const hiRaw = to < bounds.min ? bounds.min : to > bounds.max ? bounds.max : to;
  const hi = hiRaw < lo ? lo : hiRaw;
  return { ...state, from: lo, to: hi };
}

export function selectState(state: ViewState, code: string | null): ViewState {
  return { ...state, selectedState: code };
}
