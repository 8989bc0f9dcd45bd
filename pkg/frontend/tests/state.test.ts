import { describe, expect, it } from "vitest";

import {
  GRID_COLUMNS,
  addDraftCell,
  cellsOverlap,
  initialState,
  nextFreePosition,
  selectEntry,
} from "../src/state.js";
import { historyEntry } from "./fixtures.js";

describe("dashboard draft invariants", () => {
  it("rejects overlapping cells", () => {
    const state = initialState();
    state.history = [historyEntry(0)];
    expect(addDraftCell(state, { history_index: 0, row: 0, col: 0, width: 6, height: 4 })).toBe(true);
    expect(addDraftCell(state, { history_index: 0, row: 2, col: 3, width: 6, height: 4 })).toBe(false);
    expect(state.dashboardDraft.length).toBe(1);
  });

  it("accepts adjacent cells", () => {
    const state = initialState();
    state.history = [historyEntry(0)];
    expect(addDraftCell(state, { history_index: 0, row: 0, col: 0, width: 6, height: 4 })).toBe(true);
    expect(addDraftCell(state, { history_index: 0, row: 0, col: 6, width: 6, height: 4 })).toBe(true);
    expect(addDraftCell(state, { history_index: 0, row: 4, col: 0, width: 6, height: 4 })).toBe(true);
  });

  it("rejects bad history indices and out-of-grid geometry", () => {
    const state = initialState();
    state.history = [historyEntry(0)];
    expect(addDraftCell(state, { history_index: 99, row: 0, col: 0, width: 2, height: 2 })).toBe(false);
    expect(addDraftCell(state, { history_index: 0, row: 0, col: 8, width: 6, height: 2 })).toBe(false);
    expect(addDraftCell(state, { history_index: 0, row: 0, col: 0, width: 0, height: 2 })).toBe(false);
    expect(state.dashboardDraft.length).toBe(0);
  });

  it("finds the next free slot row-major within the 12-column grid", () => {
    const state = initialState();
    state.history = [historyEntry(0)];
    addDraftCell(state, { history_index: 0, row: 0, col: 0, width: 6, height: 4 });
    const slot = nextFreePosition(state.dashboardDraft, 6, 4);
    expect(slot).toEqual({ row: 0, col: 6 });
    addDraftCell(state, { history_index: 0, row: slot.row, col: slot.col, width: 6, height: 4 });
    expect(nextFreePosition(state.dashboardDraft, 6, 4)).toEqual({ row: 4, col: 0 });
    expect(GRID_COLUMNS).toBe(12);
  });

  it("overlap predicate is symmetric", () => {
    const a = { history_index: 0, row: 0, col: 0, width: 3, height: 3 };
    const b = { history_index: 0, row: 1, col: 1, width: 3, height: 3 };
    expect(cellsOverlap(a, b)).toBe(true);
    expect(cellsOverlap(b, a)).toBe(true);
  });
});

describe("entry selection", () => {
  it("only selects entries that exist in history", () => {
    const state = initialState();
    expect(selectEntry(state, 0)).toBe(false);
    state.history = [historyEntry(0)];
    expect(selectEntry(state, 0)).toBe(true);
    expect(state.selectedIndex).toBe(0);
    expect(selectEntry(state, 5)).toBe(false);
    expect(state.selectedIndex).toBe(0);
  });
});
