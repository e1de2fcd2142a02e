/**
 * Read-only client for the analytics API.
 *
 * Concurrent GETs for the same endpoint+params share one in-flight request,
 * and the station roster is fetched once and cached for the page's lifetime
 * (layer toggles must never refetch it).
 */

import type {
  HealthPayload,
  LeadsPayload,
  NarrativePayload,
  QueryPayload,
  StationsPayload,
  TrendsPayload,
} from "./types.js";

export type FetchLike = typeof fetch;

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

export interface TrendsParams {
  entity?: string;
  scope?: string;
  from?: string;
  to?: string;
  window?: number;
}

export class ApiClient {
  private inFlight = new Map<string, Promise<unknown>>();
  private rosterCache: StationsPayload | null = null;
  readonly fetchCounts: Record<string, number> = {};

  constructor(
    private readonly base: string = "/api/v1",
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const url = `${this.base}${path}`;
    const pending = this.inFlight.get(url);
    if (pending) return pending as Promise<T>;
    const promise = (async () => {
      this.fetchCounts[url] = (this.fetchCounts[url] ?? 0) + 1;
      let response: Response;
      try {
        response = await this.fetchImpl(url);
      } catch (err) {
        throw new ApiError(`network failure for ${url}: ${String(err)}`);
      } finally {
        this.inFlight.delete(url);
      }
      if (!response.ok) {
        throw new ApiError(`request failed: ${url}`, response.status);
      }
      return (await response.json()) as T;
    })();
    this.inFlight.set(url, promise);
    return promise;
  }

  async stations(): Promise<StationsPayload> {
    if (this.rosterCache) return this.rosterCache;
    this.rosterCache = await this.getJson<StationsPayload>("/stations");
    return this.rosterCache;
  }

  trends(params: TrendsParams = {}): Promise<TrendsPayload> {
    const q = new URLSearchParams();
    if (params.entity) q.set("entity", params.entity);
    if (params.scope) q.set("scope", params.scope);
    if (params.from) q.set("from", params.from);
    if (params.to) q.set("to", params.to);
    if (params.window) q.set("window", String(params.window));
    const suffix = q.toString() ? `?${q.toString()}` : "";
    return this.getJson<TrendsPayload>(`/trends${suffix}`);
  }

  leads(from?: string, to?: string): Promise<LeadsPayload> {
    const q = new URLSearchParams();
    if (from) q.set("from", from);
    if (to) q.set("to", to);
    const suffix = q.toString() ? `?${q.toString()}` : "";
    return this.getJson<LeadsPayload>(`/leads${suffix}`);
  }

  narrative(name?: string, from?: string, to?: string): Promise<NarrativePayload> {
    const q = new URLSearchParams();
    if (name) q.set("name", name);
    if (from) q.set("from", from);
    if (to) q.set("to", to);
    const suffix = q.toString() ? `?${q.toString()}` : "";
    return this.getJson<NarrativePayload>(`/narrative${suffix}`);
  }

  health(): Promise<HealthPayload> {
    return this.getJson<HealthPayload>("/health");
  }

  async query(
    question: string,
    k = 8,
    filter?: Record<string, string>,
  ): Promise<QueryPayload> {
    const url = `${this.base}/query`;
    this.fetchCounts[url] = (this.fetchCounts[url] ?? 0) + 1;
    let response: Response;
    try {
      response = await this.fetchImpl(url, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(filter ? { question, k, filter } : { question, k }),
      });
    } catch (err) {
      throw new ApiError(`network failure for ${url}: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`query failed`, response.status);
    }
    return (await response.json()) as QueryPayload;
  }
}
