/**
 * Thin client for the urbscale service. All numbers shown anywhere in the
 * UI originate from these responses.
 *
 * Scenario evaluation keeps at most one request in flight: a new submission
 * aborts the previous one.
 */

import type {
  ApiError,
  CitiesResponse,
  PlaneResponse,
  ScenarioDelta,
  ScenarioOutcome,
} from "./types.js";

export class ServiceError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ApiError) {
    super(body.message);
    this.code = body.code;
    this.status = status;
  }
}

async function getJson<T>(path: string): Promise<T> {
  const response = await fetch(path, { headers: { Accept: "application/json" } });
  if (!response.ok) {
    throw new ServiceError(response.status, await response.json());
  }
  return response.json() as Promise<T>;
}

export function fetchCities(): Promise<CitiesResponse> {
  return getJson("/api/cities");
}

export function fetchPlane(dependent: string): Promise<PlaneResponse> {
  return getJson(`/api/plane?dependent=${encodeURIComponent(dependent)}`);
}

let inFlight: AbortController | null = null;

/** Rejects with DOMException(name="AbortError") when superseded. */
export async function evaluateScenario(
  cityId: string,
  delta: ScenarioDelta,
  dependent: string,
): Promise<ScenarioOutcome> {
  if (inFlight) {
    inFlight.abort();
  }
  const controller = new AbortController();
  inFlight = controller;
  try {
    const response = await fetch("/api/scenario", {
      method: "POST",
      headers: { "Content-Type": "application/json", Accept: "application/json" },
      body: JSON.stringify({ city_id: cityId, delta, dependent }),
      signal: controller.signal,
    });
    if (!response.ok) {
      throw new ServiceError(response.status, await response.json());
    }
    return (await response.json()) as ScenarioOutcome;
  } finally {
    if (inFlight === controller) {
      inFlight = null;
    }
  }
}
