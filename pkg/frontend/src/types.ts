/** Payload shapes of the analytics API (v1). */

export interface StationRecord {
  call_sign: string;
  state: string | null;
  url: string | null;
  format: string | null;
  lat: number | null;
  lon: number | null;
}

export interface StationsPayload {
  stations: StationRecord[];
}

export interface TrendPoint {
  entity: string;
  scope: string;
  day: string; // ISO date
  pos: number;
  neu: number;
  neg: number;
  score: number;
  smoothed: number;
}

export interface TrendsPayload {
  window: number;
  points: TrendPoint[];
}

export interface LeadEntry {
  state: string;
  label: string; // "D+n" | "R+n" | "Tie" | "insufficient data"
}

export interface LeadsPayload {
  leads: LeadEntry[];
}

export interface NarrativePayload {
  name: string | null;
  states: Record<string, Record<string, number>>;
}

export interface QuerySource {
  id: string;
  distance: number;
  similarity: number | null;
  metadata: Record<string, string>;
}

export interface QueryPayload {
  answer: string;
  sources: QuerySource[];
}

export interface HealthPayload {
  stages: Record<string, number>;
}
