/**
 * Explorer wiring: load the cohort and the plane, let the planner pick a
 * city, edit a scenario draft, evaluate it against the service, and watch
 * the city's point move.
 *
 * Single-source-of-truth rule: every scientific number shown (ds, density,
 * estimates, deltas) is a service response value, carried verbatim in a
 * data-raw attribute next to its formatted display.
 */

import { ServiceError, evaluateScenario, fetchCities, fetchPlane } from "./api.js";
import {
  DraftAction,
  ScenarioDraft,
  UndoStack,
  applyAction,
  emptyDraft,
  loadScenario,
  saveScenario,
  validateBlock,
} from "./draft.js";
import { PlaneView, renderPlane } from "./plane-view.js";
import type { CityEntry, PlaneResponse, ScenarioOutcome } from "./types.js";

/** Display formatting only; provenance stays in data-raw. */
export function fmt(value: number): string {
  if (Number.isInteger(value) && Math.abs(value) < 1e15) {
    return String(value);
  }
  return value.toPrecision(6);
}

export interface AppState {
  cities: CityEntry[];
  plane: PlaneResponse | null;
  view: PlaneView | null;
  draft: ScenarioDraft;
  undo: UndoStack;
  outcome: ScenarioOutcome | null;
}

function byId<T extends HTMLElement>(root: Document, id: string): T {
  const node = root.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id} in the page skeleton`);
  }
  return node as T;
}

function readoutRow(root: Document, label: string, raw: number, unit = ""): HTMLElement {
  const row = root.createElement("div");
  row.className = "readout-row";
  const name = root.createElement("span");
  name.className = "readout-label";
  name.textContent = label;
  const value = root.createElement("span");
  value.className = "readout-value";
  value.setAttribute("data-raw", String(raw));
  value.textContent = unit ? `${fmt(raw)} ${unit}` : fmt(raw);
  row.append(name, value);
  return row;
}

function renderOutcome(root: Document, state: AppState): void {
  const readout = byId(root, "readout");
  const warning = byId(root, "warning-banner");
  readout.replaceChildren();
  warning.hidden = true;
  if (!state.outcome) {
    return;
  }
  const o = state.outcome;
  const dependent = state.plane ? state.plane.dependent : "dependent";
  readout.append(
    readoutRow(root, "base ds", o.base.ds),
    readoutRow(root, "scenario ds", o.scenario.ds),
    readoutRow(root, "Δ ds", o.delta_ds),
    readoutRow(root, "base density", o.base.mean_density, "/km²"),
    readoutRow(root, "scenario density", o.scenario.mean_density, "/km²"),
    readoutRow(root, "Δ density", o.delta_mean_density, "/km²"),
    readoutRow(root, `base ${dependent}`, o.base.plane_estimate),
    readoutRow(root, `scenario ${dependent}`, o.scenario.plane_estimate),
    readoutRow(root, `Δ ${dependent}`, o.delta_plane_estimate),
  );
  if (!o.base.inside_hull || !o.scenario.inside_hull) {
    warning.hidden = false;
    warning.textContent =
      "extrapolation: a point lies outside the observed cohort; " +
      "the plane estimate there is unsupported by data";
  }
  state.view?.setScenario(o);
}

function renderDraft(root: Document, state: AppState): void {
  (byId(root, "scenario-name") as HTMLInputElement).value = state.draft.name;
  (byId(root, "scenario-notes") as HTMLTextAreaElement).value = state.draft.notes;
  byId(root, "dirty-flag").hidden = !state.draft.dirty;

  const added = byId(root, "added-list");
  added.replaceChildren();
  for (const block of state.draft.delta.added_blocks) {
    const item = root.createElement("li");
    item.textContent = `${block.block_id}: ${block.area_km2} km², ${block.population} people `;
    item.appendChild(dropButton(root, state, { kind: "drop-added", blockId: block.block_id }));
    added.appendChild(item);
  }
  const modified = byId(root, "modified-list");
  modified.replaceChildren();
  for (const change of state.draft.delta.modified) {
    const item = root.createElement("li");
    item.textContent = `${change.block_id} → ${change.new_population} people `;
    item.appendChild(
      dropButton(root, state, { kind: "drop-modified", blockId: change.block_id }),
    );
    modified.appendChild(item);
  }
  const removed = byId(root, "removed-list");
  removed.replaceChildren();
  for (const blockId of state.draft.delta.removed) {
    const item = root.createElement("li");
    item.textContent = `${blockId} `;
    item.appendChild(dropButton(root, state, { kind: "drop-removed", blockId }));
    removed.appendChild(item);
  }
}

function dropButton(root: Document, state: AppState, action: DraftAction): HTMLButtonElement {
  const btn = root.createElement("button");
  btn.type = "button";
  btn.className = "drop-btn";
  btn.textContent = "✕";
  btn.addEventListener("click", () => dispatch(root, state, action));
  return btn;
}

export function dispatch(root: Document, state: AppState, action: DraftAction): void {
  try {
    const next = applyAction(state.draft, action);
    state.undo.push(state.draft);
    state.draft = next;
    byId(root, "add-error").textContent = "";
    renderDraft(root, state);
  } catch (err) {
    byId(root, "add-error").textContent = (err as Error).message;
  }
}

function showError(root: Document, err: unknown): void {
  const banner = byId(root, "error-banner");
  banner.hidden = false;
  if (err instanceof ServiceError) {
    banner.textContent = `service error [${err.code}]: ${err.message}`;
  } else {
    banner.textContent = `error: ${(err as Error).message}`;
  }
}

async function submitScenario(root: Document, state: AppState): Promise<void> {
  const citySelect = byId<HTMLSelectElement>(root, "city-select");
  const dependent = byId<HTMLSelectElement>(root, "dependent-select").value;
  byId(root, "error-banner").hidden = true;
  try {
    state.outcome = await evaluateScenario(citySelect.value, state.draft.delta, dependent);
    renderOutcome(root, state);
  } catch (err) {
    if ((err as DOMException).name === "AbortError") {
      return; // superseded by a newer submission
    }
    showError(root, err);
  }
}

async function loadPlane(root: Document, state: AppState): Promise<void> {
  const dependent = byId<HTMLSelectElement>(root, "dependent-select").value;
  state.plane = await fetchPlane(dependent);
  const container = byId(root, "plane-container");
  state.view = renderPlane(container, state.plane);
  state.outcome = null;
  renderOutcome(root, state);

  const v = state.plane.variogram;
  byId(root, "variogram-info").textContent =
    `${state.plane.cities.length} cities · variogram ${v.kind} ` +
    `(nugget ${fmt(v.nugget)}, sill ${fmt(v.sill)}, range ${fmt(v.range_param)})` +
    ` · LOO rmse ${fmt(state.plane.cv_stats.rmse)}`;

  const hover = byId(root, "hover-readout");
  state.view.svg.addEventListener("mousemove", (event) => {
    const rect = state.view!.svg.getBoundingClientRect();
    const cell = state.view!.cellAt(event.clientX - rect.left, event.clientY - rect.top);
    hover.textContent = cell
      ? `density ${fmt(cell.density)} /km² · ds ${fmt(cell.ds)} · ` +
        `${state.plane!.dependent} ${fmt(cell.z)}`
      : "";
  });
}

export async function init(root: Document): Promise<AppState> {
  const state: AppState = {
    cities: [],
    plane: null,
    view: null,
    draft: emptyDraft(),
    undo: new UndoStack(),
    outcome: null,
  };

  const citySelect = byId<HTMLSelectElement>(root, "city-select");
  const payload = await fetchCities();
  state.cities = payload.cities;
  citySelect.replaceChildren();
  for (const city of state.cities) {
    if (city.status !== "included") {
      continue;
    }
    const option = root.createElement("option");
    option.value = city.city_id;
    option.textContent = `${city.city_id} (ds ${city.ds === null ? "n/a" : fmt(city.ds)})`;
    citySelect.appendChild(option);
  }

  await loadPlane(root, state);

  byId(root, "dependent-select").addEventListener("change", () => {
    loadPlane(root, state).catch((err) => showError(root, err));
  });
  byId(root, "evaluate-btn").addEventListener("click", () => {
    void submitScenario(root, state);
  });
  byId(root, "scenario-name").addEventListener("change", (event) => {
    dispatch(root, state, {
      kind: "rename",
      name: (event.target as HTMLInputElement).value,
    });
  });
  byId(root, "scenario-notes").addEventListener("change", (event) => {
    dispatch(root, state, {
      kind: "set-notes",
      notes: (event.target as HTMLTextAreaElement).value,
    });
  });
  byId(root, "add-btn").addEventListener("click", () => {
    const block = {
      block_id: (byId(root, "add-id") as HTMLInputElement).value.trim(),
      area_km2: Number((byId(root, "add-area") as HTMLInputElement).value),
      population: Number((byId(root, "add-pop") as HTMLInputElement).value),
    };
    const problem = validateBlock(block);
    if (problem) {
      byId(root, "add-error").textContent = problem;
      return;
    }
    dispatch(root, state, { kind: "add-block", block });
  });
  byId(root, "modify-btn").addEventListener("click", () => {
    dispatch(root, state, {
      kind: "modify",
      change: {
        block_id: (byId(root, "modify-id") as HTMLInputElement).value.trim(),
        new_population: Number((byId(root, "modify-pop") as HTMLInputElement).value),
      },
    });
  });
  byId(root, "remove-btn").addEventListener("click", () => {
    dispatch(root, state, {
      kind: "remove",
      blockId: (byId(root, "remove-id") as HTMLInputElement).value.trim(),
    });
  });
  byId(root, "undo-btn").addEventListener("click", () => {
    const previous = state.undo.pop();
    if (previous) {
      state.draft = previous;
      renderDraft(root, state);
    }
  });
  byId(root, "clear-btn").addEventListener("click", () => {
    dispatch(root, state, { kind: "clear" });
  });
  byId(root, "save-btn").addEventListener("click", () => {
    const blob = new Blob([saveScenario(state.draft)], { type: "application/json" });
    const link = root.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${state.draft.name.replace(/\s+/g, "_") || "scenario"}.json`;
    link.click();
    URL.revokeObjectURL(link.href);
  });
  byId<HTMLInputElement>(root, "load-input").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) {
      return;
    }
    try {
      state.draft = loadScenario(await file.text());
      state.undo = new UndoStack();
      renderDraft(root, state);
    } catch (err) {
      showError(root, err);
    }
  });

  renderDraft(root, state);
  return state;
}

if (typeof document !== "undefined" && document.getElementById("plane-container")) {
  init(document).catch((err) => {
    const banner = document.getElementById("error-banner");
    if (banner) {
      banner.hidden = false;
      banner.textContent = `failed to start: ${(err as Error).message}`;
    }
  });
}
