/**
 * ScenarioDraft: the delta being edited, plus UI metadata (name, notes,
 * dirty flag). Editing works through pure actions so undo is a stack of
 * previous drafts; saving serializes the draft to exactly the service's
 * ScenarioDelta schema, byte-stable through save/load round trips.
 */

import type { AddedBlock, Modification, ScenarioDelta } from "./types.js";

export interface ScenarioDraft {
  name: string;
  notes: string;
  dirty: boolean;
  delta: ScenarioDelta;
}

export type DraftAction =
  | { kind: "rename"; name: string }
  | { kind: "set-notes"; notes: string }
  | { kind: "add-block"; block: AddedBlock }
  | { kind: "drop-added"; blockId: string }
  | { kind: "modify"; change: Modification }
  | { kind: "drop-modified"; blockId: string }
  | { kind: "remove"; blockId: string }
  | { kind: "drop-removed"; blockId: string }
  | { kind: "clear" };

export function emptyDraft(name = "untitled scenario"): ScenarioDraft {
  return {
    name,
    notes: "",
    dirty: false,
    delta: { added_blocks: [], modified: [], removed: [] },
  };
}

/** Human-readable problem with an add-block form, or null when valid. */
export function validateBlock(block: AddedBlock): string | null {
  if (!block.block_id.trim()) {
    return "block id must not be empty";
  }
  if (!Number.isFinite(block.area_km2) || block.area_km2 <= 0) {
    return "area must be a positive number of km²";
  }
  if (!Number.isInteger(block.population) || block.population < 0) {
    return "population must be a non-negative integer";
  }
  return null;
}

function withDelta(draft: ScenarioDraft, delta: ScenarioDelta): ScenarioDraft {
  return { ...draft, delta, dirty: true };
}

/** Pure: returns a new draft, never mutates the input. */
export function applyAction(draft: ScenarioDraft, action: DraftAction): ScenarioDraft {
  const { added_blocks, modified, removed } = draft.delta;
  switch (action.kind) {
    case "rename":
      return { ...draft, name: action.name, dirty: true };
    case "set-notes":
      return { ...draft, notes: action.notes, dirty: true };
    case "add-block": {
      const problem = validateBlock(action.block);
      if (problem) {
        throw new Error(problem);
      }
      if (added_blocks.some((b) => b.block_id === action.block.block_id)) {
        throw new Error(`block ${action.block.block_id} is already added`);
      }
      return withDelta(draft, {
        added_blocks: [...added_blocks, action.block],
        modified,
        removed,
      });
    }
    case "drop-added":
      return withDelta(draft, {
        added_blocks: added_blocks.filter((b) => b.block_id !== action.blockId),
        modified,
        removed,
      });
    case "modify": {
      if (!Number.isInteger(action.change.new_population) || action.change.new_population < 0) {
        throw new Error("new population must be a non-negative integer");
      }
      const rest = modified.filter((m) => m.block_id !== action.change.block_id);
      return withDelta(draft, {
        added_blocks,
        modified: [...rest, action.change],
        removed,
      });
    }
    case "drop-modified":
      return withDelta(draft, {
        added_blocks,
        modified: modified.filter((m) => m.block_id !== action.blockId),
        removed,
      });
    case "remove":
      if (removed.includes(action.blockId)) {
        return draft;
      }
      return withDelta(draft, {
        added_blocks,
        modified,
        removed: [...removed, action.blockId],
      });
    case "drop-removed":
      return withDelta(draft, {
        added_blocks,
        modified,
        removed: removed.filter((r) => r !== action.blockId),
      });
    case "clear":
      return withDelta(draft, { added_blocks: [], modified: [], removed: [] });
  }
}

/** Canonical file format: delta exactly as the service expects, fixed key order. */
export function saveScenario(draft: ScenarioDraft): string {
  const payload = {
    name: draft.name,
    notes: draft.notes,
    delta: {
      added_blocks: draft.delta.added_blocks.map((b) => ({
        block_id: b.block_id,
        area_km2: b.area_km2,
        population: b.population,
      })),
      modified: draft.delta.modified.map((m) => ({
        block_id: m.block_id,
        new_population: m.new_population,
      })),
      removed: [...draft.delta.removed],
    },
  };
  return JSON.stringify(payload, null, 2) + "\n";
}

export function loadScenario(text: string): ScenarioDraft {
  const raw = JSON.parse(text) as {
    name?: string;
    notes?: string;
    delta?: Partial<ScenarioDelta>;
  };
  const delta = raw.delta ?? {};
  const draft: ScenarioDraft = {
    name: typeof raw.name === "string" ? raw.name : "untitled scenario",
    notes: typeof raw.notes === "string" ? raw.notes : "",
    dirty: false,
    delta: {
      added_blocks: delta.added_blocks ?? [],
      modified: delta.modified ?? [],
      removed: delta.removed ?? [],
    },
  };
  for (const block of draft.delta.added_blocks) {
    const problem = validateBlock(block);
    if (problem) {
      throw new Error(`invalid scenario file: ${problem}`);
    }
  }
  return draft;
}

export class UndoStack {
  private stack: ScenarioDraft[] = [];

  push(draft: ScenarioDraft): void {
    this.stack.push(draft);
    if (this.stack.length > 100) {
      this.stack.shift();
    }
  }

  pop(): ScenarioDraft | null {
    return this.stack.pop() ?? null;
  }

  get size(): number {
    return this.stack.length;
  }
}
