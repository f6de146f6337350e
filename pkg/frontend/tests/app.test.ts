/**
 * Acceptance-level UI test against recorded service payloads, with all
 * network traffic intercepted: the plane view shows one scatter point per
 * included city, an empty scenario draws a zero-length arrow with zero
 * deltas, and every number on screen is a payload value verbatim (the UI
 * recomputes nothing).
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { init } from "../src/app.js";
import type { CitiesResponse, PlaneResponse, ScenarioOutcome } from "../src/types.js";

const fixtures = {
  cities: JSON.parse(
    readFileSync(join(__dirname, "fixtures", "cities.json"), "utf-8"),
  ) as CitiesResponse,
  plane: JSON.parse(
    readFileSync(join(__dirname, "fixtures", "plane.json"), "utf-8"),
  ) as PlaneResponse,
  outcome: JSON.parse(
    readFileSync(join(__dirname, "fixtures", "scenario_empty.json"), "utf-8"),
  ) as ScenarioOutcome,
};

interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

const recorded: RecordedCall[] = [];

function interceptFetch(): void {
  recorded.length = 0;
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, options?: RequestInit) => {
      const url = String(input);
      recorded.push({
        url,
        method: options?.method ?? "GET",
        body: options?.body ? JSON.parse(String(options.body)) : null,
      });
      const respond = (payload: unknown) =>
        new Response(JSON.stringify(payload), {
          status: 200,
          headers: { "Content-Type": "application/json" },
        });
      if (url.startsWith("/api/cities")) return respond(fixtures.cities);
      if (url.startsWith("/api/plane")) return respond(fixtures.plane);
      if (url.startsWith("/api/scenario")) return respond(fixtures.outcome);
      throw new Error(`unexpected request ${url}`);
    }),
  );
}

function mountSkeleton(): void {
  const html = readFileSync(join(__dirname, "..", "index.html"), "utf-8");
  const body = html.slice(html.indexOf("<body>") + 6, html.indexOf("</body>"));
  document.body.innerHTML = body.replace(/<script[\s\S]*?<\/script>/g, "");
}

beforeEach(() => {
  interceptFetch();
  mountSkeleton();
});

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("explorer app on recorded service fixtures", () => {
  it("renders one scatter point per included city", async () => {
    await init(document);
    const dots = document.querySelectorAll(".city-dot");
    const included = fixtures.cities.cities.filter((c) => c.status === "included");
    expect(dots).toHaveLength(included.length);
    expect(dots).toHaveLength(fixtures.plane.cities.length);
  });

  it("city selector offers only included cities", async () => {
    await init(document);
    const options = document.querySelectorAll<HTMLOptionElement>("#city-select option");
    const included = fixtures.cities.cities.filter((c) => c.status === "included");
    expect(options).toHaveLength(included.length);
    const ids = Array.from(options).map((o) => o.value);
    expect(ids).not.toContain("toyville");
    expect(ids).not.toContain("mismatchville");
  });

  it("empty scenario: zero-length arrow, zero deltas, payload numbers verbatim", async () => {
    await init(document);
    document.getElementById("evaluate-btn")!.dispatchEvent(new MouseEvent("click"));
    await vi.waitFor(() => {
      expect(document.querySelector(".scenario-arrow")).not.toBeNull();
    });

    const arrow = document.querySelector(".scenario-arrow")!;
    expect(arrow.getAttribute("x1")).toBe(arrow.getAttribute("x2"));
    expect(arrow.getAttribute("y1")).toBe(arrow.getAttribute("y2"));

    const raw = Array.from(
      document.querySelectorAll("#readout .readout-value"),
    ).map((node) => node.getAttribute("data-raw"));
    const o = fixtures.outcome;
    expect(raw).toEqual([
      String(o.base.ds),
      String(o.scenario.ds),
      String(o.delta_ds),
      String(o.base.mean_density),
      String(o.scenario.mean_density),
      String(o.delta_mean_density),
      String(o.base.plane_estimate),
      String(o.scenario.plane_estimate),
      String(o.delta_plane_estimate),
    ]);
    expect(o.delta_ds).toBe(0);
    expect(o.delta_mean_density).toBe(0);
    expect(o.delta_plane_estimate).toBe(0);
  });

  it("intercept confirms the delta sent is exactly the draft delta", async () => {
    await init(document);
    document.getElementById("evaluate-btn")!.dispatchEvent(new MouseEvent("click"));
    await vi.waitFor(() => {
      expect(recorded.some((c) => c.url.startsWith("/api/scenario"))).toBe(true);
    });
    const call = recorded.find((c) => c.url.startsWith("/api/scenario"))!;
    expect(call.method).toBe("POST");
    expect(call.body).toEqual({
      city_id: (document.getElementById("city-select") as HTMLSelectElement).value,
      delta: { added_blocks: [], modified: [], removed: [] },
      dependent: "gas_per_area",
    });
  });

  it("all traffic went through the intercepted fetch (no other number source)", async () => {
    await init(document);
    document.getElementById("evaluate-btn")!.dispatchEvent(new MouseEvent("click"));
    await vi.waitFor(() => {
      expect(document.querySelector(".scenario-arrow")).not.toBeNull();
    });
    const urls = recorded.map((c) => c.url.split("?")[0]).sort();
    expect(urls).toEqual(["/api/cities", "/api/plane", "/api/scenario"]);
  });

  it("add-block form rejects non-positive area inline", async () => {
    await init(document);
    (document.getElementById("add-id") as HTMLInputElement).value = "N1";
    (document.getElementById("add-area") as HTMLInputElement).value = "0";
    (document.getElementById("add-pop") as HTMLInputElement).value = "10";
    document.getElementById("add-btn")!.dispatchEvent(new MouseEvent("click"));
    expect(document.getElementById("add-error")!.textContent).toMatch(/area/);
    expect(document.querySelectorAll("#added-list li")).toHaveLength(0);
  });

  it("undo after add restores the original draft", async () => {
    const state = await init(document);
    (document.getElementById("add-id") as HTMLInputElement).value = "N1";
    (document.getElementById("add-area") as HTMLInputElement).value = "2";
    (document.getElementById("add-pop") as HTMLInputElement).value = "10";
    document.getElementById("add-btn")!.dispatchEvent(new MouseEvent("click"));
    expect(state.draft.delta.added_blocks).toHaveLength(1);
    document.getElementById("undo-btn")!.dispatchEvent(new MouseEvent("click"));
    expect(state.draft.delta.added_blocks).toHaveLength(0);
    expect(document.querySelectorAll("#added-list li")).toHaveLength(0);
  });

  it("extrapolation warning appears when a point is outside the hull", async () => {
    const outside: ScenarioOutcome = JSON.parse(JSON.stringify(fixtures.outcome));
    outside.scenario.inside_hull = false;
    fixtures.outcome = outside;
    try {
      await init(document);
      document.getElementById("evaluate-btn")!.dispatchEvent(new MouseEvent("click"));
      await vi.waitFor(() => {
        expect(
          (document.getElementById("warning-banner") as HTMLElement).hidden,
        ).toBe(false);
      });
      expect(document.getElementById("warning-banner")!.textContent).toMatch(
        /extrapolation/,
      );
    } finally {
      fixtures.outcome = JSON.parse(
        readFileSync(join(__dirname, "fixtures", "scenario_empty.json"), "utf-8"),
      );
    }
  });
});
