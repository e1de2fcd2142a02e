/** Canned API payloads and a scriptable fetch for contract tests. */

import type {
  LeadsPayload,
  NarrativePayload,
  QueryPayload,
  StationsPayload,
  TrendsPayload,
} from "../src/types.js";

export const STATIONS: StationsPayload = {
  stations: [
    { call_sign: "WDUN", state: "GA", url: "http://x/wdun", format: "News/Talk", lat: 34.3, lon: -83.8 },
    { call_sign: "WHIO", state: "OH", url: "http://x/whio", format: "News/Talk", lat: null, lon: null },
    { call_sign: "KXEL", state: "IA", url: "http://x/kxel", format: "Talk", lat: null, lon: null },
  ],
};

export const LEADS: LeadsPayload = {
  leads: [
    { state: "PA", label: "R+2" },
    { state: "GA", label: "D+5" },
    { state: "WI", label: "Tie" },
  ],
};

export const EMPTY_NARRATIVE: NarrativePayload = { name: "election-2020", states: {} };

export const NARRATIVE: NarrativePayload = {
  name: "election-2020",
  states: {
    GA: { promote: 7, debunk: 2 },
    OH: { neutral: 3 },
  },
};

// deliberately awkward floats: the dashboard must render them verbatim
export const NATIONAL_TRENDS: TrendsPayload = {
  window: 3,
  points: [
    { entity: "Harris", scope: "national", day: "2024-07-01", pos: 2, neu: 1, neg: 0, score: 0.8333333333333334, smoothed: 0.8333333333333334 },
    { entity: "Harris", scope: "national", day: "2024-07-02", pos: 1, neu: 0, neg: 2, score: 0.3333333333333333, smoothed: 0.5833333333333334 },
    { entity: "Trump", scope: "national", day: "2024-07-01", pos: 1, neu: 2, neg: 1, score: 0.5, smoothed: 0.5 },
    { entity: "Trump", scope: "national", day: "2024-07-02", pos: 0, neu: 1, neg: 1, score: 0.25, smoothed: 0.375 },
  ],
};

export const STATE_TRENDS: TrendsPayload = {
  window: 3,
  points: [
    { entity: "Harris", scope: "GA", day: "2024-07-02", pos: 3, neu: 0, neg: 1, score: 0.875, smoothed: 0.875 },
    { entity: "Trump", scope: "GA", day: "2024-07-02", pos: 1, neu: 1, neg: 2, score: 0.375, smoothed: 0.375 },
  ],
};

export const QUERY_RESULT: QueryPayload = {
  answer: "County officials reviewed the vote count after a recount request.",
  sources: [
    {
      id: "GA_WDUN_2024_07_01_08_00",
      distance: 0.4321,
      similarity: 0.7839,
      metadata: { state: "GA", call_sign: "WDUN", date: "2024-07-01", time: "08:00" },
    },
    {
      id: "OH_WHIO_2024_07_02_08_00",
      distance: 0.6543,
      similarity: 0.6721,
      metadata: { state: "OH", call_sign: "WHIO", date: "2024-07-02", time: "08:00" },
    },
  ],
};

type RouteHandler = (url: string, init?: RequestInit) => unknown;
export type RouteTable = Record<string, unknown | RouteHandler>;

export interface ScriptedFetch {
  fetch: typeof fetch;
  calls: { url: string; init?: RequestInit }[];
  /** Swap the routing table mid-test (null simulates an outage). */
  setRoutes(routes: RouteTable | null): void;
}

/** Routes are matched by pathname; handlers get the full URL. */
export function scriptedFetch(initial: RouteTable): ScriptedFetch {
  let routes: RouteTable | null = initial;
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    calls.push({ url, init });
    if (routes === null) {
      throw new TypeError("network down");
    }
    const pathname = url.split("?")[0];
    if (!(pathname in routes)) {
      return new Response(JSON.stringify({ detail: "not found" }), { status: 404 });
    }
    const entry = routes[pathname];
    const payload =
      typeof entry === "function" ? (entry as RouteHandler)(url, init) : entry;
    return new Response(JSON.stringify(payload), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  };
  return {
    fetch: impl as typeof fetch,
    calls,
    setRoutes(next) {
      routes = next;
    },
  };
}

export function defaultRoutes(): RouteTable {
  return {
    "/api/v1/stations": STATIONS,
    "/api/v1/leads": LEADS,
    "/api/v1/narrative": NARRATIVE,
    "/api/v1/trends": (url: string) =>
      url.includes("scope=state") ? STATE_TRENDS : NATIONAL_TRENDS,
    "/api/v1/query": QUERY_RESULT,
    "/api/v1/health": { stages: { embedded: 4, failed: 0 } },
  };
}
