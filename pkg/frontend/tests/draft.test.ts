import { describe, expect, it } from "vitest";

import {
  UndoStack,
  applyAction,
  emptyDraft,
  loadScenario,
  saveScenario,
  validateBlock,
} from "../src/draft.js";

describe("draft actions", () => {
  it("adds a block after validation", () => {
    const draft = applyAction(emptyDraft(), {
      kind: "add-block",
      block: { block_id: "N1", area_km2: 1.5, population: 400 },
    });
    expect(draft.delta.added_blocks).toHaveLength(1);
    expect(draft.dirty).toBe(true);
  });

  it("rejects invalid blocks with a message", () => {
    expect(validateBlock({ block_id: "N1", area_km2: 0, population: 4 })).toMatch(
      /area must be/,
    );
    expect(validateBlock({ block_id: "", area_km2: 1, population: 4 })).toMatch(
      /block id/,
    );
    expect(validateBlock({ block_id: "N1", area_km2: 1, population: 1.5 })).toMatch(
      /population/,
    );
    expect(() =>
      applyAction(emptyDraft(), {
        kind: "add-block",
        block: { block_id: "N1", area_km2: -2, population: 4 },
      }),
    ).toThrow(/area/);
  });

  it("does not mutate the previous draft", () => {
    const before = emptyDraft();
    applyAction(before, { kind: "remove", blockId: "B1" });
    expect(before.delta.removed).toHaveLength(0);
  });

  it("modify replaces an existing modification for the same block", () => {
    let draft = emptyDraft();
    draft = applyAction(draft, {
      kind: "modify",
      change: { block_id: "B1", new_population: 10 },
    });
    draft = applyAction(draft, {
      kind: "modify",
      change: { block_id: "B1", new_population: 20 },
    });
    expect(draft.delta.modified).toEqual([{ block_id: "B1", new_population: 20 }]);
  });

  it("rename is metadata-only", () => {
    const draft = applyAction(emptyDraft(), { kind: "rename", name: "sprawl study" });
    expect(draft.name).toBe("sprawl study");
    expect(draft.delta).toEqual({ added_blocks: [], modified: [], removed: [] });
  });

  it("undo restores the pre-action draft", () => {
    const undo = new UndoStack();
    const original = emptyDraft();
    undo.push(original);
    const changed = applyAction(original, { kind: "remove", blockId: "B9" });
    expect(changed.delta.removed).toEqual(["B9"]);
    expect(undo.pop()).toBe(original);
  });
});

describe("scenario files", () => {
  it("round-trips byte-equal through save/load", () => {
    let draft = emptyDraft("My Plan");
    draft = applyAction(draft, {
      kind: "add-block",
      block: { block_id: "N1", area_km2: 2.25, population: 900 },
    });
    draft = applyAction(draft, {
      kind: "modify",
      change: { block_id: "B7", new_population: 1200 },
    });
    draft = applyAction(draft, { kind: "remove", blockId: "B9" });
    const text = saveScenario(draft);
    const reloaded = loadScenario(text);
    expect(saveScenario(reloaded)).toBe(text);
  });

  it("serializes the delta in exactly the service schema", () => {
    let draft = emptyDraft();
    draft = applyAction(draft, {
      kind: "add-block",
      block: { block_id: "N1", area_km2: 1, population: 5 },
    });
    const payload = JSON.parse(saveScenario(draft));
    expect(Object.keys(payload.delta)).toEqual(["added_blocks", "modified", "removed"]);
    expect(Object.keys(payload.delta.added_blocks[0])).toEqual([
      "block_id",
      "area_km2",
      "population",
    ]);
  });

  it("rejects scenario files with invalid blocks", () => {
    const bad = JSON.stringify({
      name: "x",
      notes: "",
      delta: { added_blocks: [{ block_id: "N", area_km2: -1, population: 2 }] },
    });
    expect(() => loadScenario(bad)).toThrow(/invalid scenario file/);
  });
});
