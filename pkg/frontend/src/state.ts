// Client view state and its invariants: a selected entry must exist in the
// history, and dashboard draft cells never overlap.

import type {
  DashboardCellPayload,
  DatabaseSummary,
  HistoryEntryPayload,
  RecommendationSetPayload,
} from "./types.js";

export const GRID_COLUMNS = 12;

export interface ViewState {
  sessionId: string | null;
  catalog: DatabaseSummary | null;
  recommendations: RecommendationSetPayload | null;
  history: HistoryEntryPayload[];
  selectedIndex: number | null;
  dashboardDraft: DashboardCellPayload[];
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    catalog: null,
    recommendations: null,
    history: [],
    selectedIndex: null,
    dashboardDraft: [],
  };
}

export function cellsOverlap(a: DashboardCellPayload, b: DashboardCellPayload): boolean {
  return !(
    a.row + a.height <= b.row ||
    b.row + b.height <= a.row ||
    a.col + a.width <= b.col ||
    b.col + b.width <= a.col
  );
}

export function cellValid(cell: DashboardCellPayload, historyLength: number): boolean {
  return (
    cell.history_index >= 0 &&
    cell.history_index < historyLength &&
    cell.row >= 0 &&
    cell.col >= 0 &&
    cell.width > 0 &&
    cell.height > 0 &&
    cell.col + cell.width <= GRID_COLUMNS
  );
}

/** Append a draft cell; rejected (returns false) when it would overlap or
 * reference a bad history index, so the saved payload can never violate the
 * grid invariant. */
export function addDraftCell(state: ViewState, cell: DashboardCellPayload): boolean {
  if (!cellValid(cell, state.history.length)) {
    return false;
  }
  if (state.dashboardDraft.some((existing) => cellsOverlap(existing, cell))) {
    return false;
  }
  state.dashboardDraft.push(cell);
  return true;
}

/** First free grid position scanning row-major, for click-to-place layout. */
export function nextFreePosition(
  draft: DashboardCellPayload[],
  width: number,
  height: number,
): { row: number; col: number } {
  for (let row = 0; row < 1000; row++) {
    for (let col = 0; col + width <= GRID_COLUMNS; col++) {
      const probe = { history_index: 0, row, col, width, height };
      if (!draft.some((cell) => cellsOverlap(cell, probe))) {
        return { row, col };
      }
    }
  }
  throw new Error("grid exhausted");
}

export function selectEntry(state: ViewState, index: number): boolean {
  if (index < 0 || index >= state.history.length) {
    return false;
  }
  state.selectedIndex = index;
  return true;
}

export function appendEntry(state: ViewState, entry: HistoryEntryPayload): void {
  state.history.push(entry);
  state.selectedIndex = state.history.length - 1;
}
