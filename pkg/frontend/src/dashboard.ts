// Dashboard builder over a 12-column grid: click-to-place cells for selected
// history entries; the save payload is guaranteed overlap-free by the state
// invariants.

import { ApiClient } from "./api.js";
import { showBanner } from "./banner.js";
import { addDraftCell, nextFreePosition, type ViewState } from "./state.js";
import type { DashboardPayload } from "./types.js";

export const DEFAULT_CELL = { width: 6, height: 4 };

/** Place a history entry at the next free slot; false when placement fails. */
export function placeEntry(state: ViewState, historyIndex: number): boolean {
  const { row, col } = nextFreePosition(state.dashboardDraft, DEFAULT_CELL.width, DEFAULT_CELL.height);
  return addDraftCell(state, {
    history_index: historyIndex,
    row,
    col,
    width: DEFAULT_CELL.width,
    height: DEFAULT_CELL.height,
  });
}

export function renderDashboardDraft(container: HTMLElement, state: ViewState): void {
  container.textContent = "";
  const grid = document.createElement("div");
  grid.className = "dashboard-grid";
  for (const cell of state.dashboardDraft) {
    const el = document.createElement("div");
    el.className = "dashboard-cell";
    el.dataset.historyIndex = String(cell.history_index);
    el.style.gridRow = `${cell.row + 1} / span ${cell.height}`;
    el.style.gridColumn = `${cell.col + 1} / span ${cell.width}`;
    const entry = state.history[cell.history_index];
    el.textContent = entry ? entry.nl_text : `entry ${cell.history_index}`;
    grid.appendChild(el);
  }
  container.appendChild(grid);
}

/** Accept history entries dragged from the history panel; every drop goes
 * through placeEntry, so the draft stays overlap-free. */
export function attachDropZone(
  container: HTMLElement,
  state: ViewState,
  draggedIndex: () => number | null,
  onPlaced: () => void,
): void {
  container.addEventListener("dragover", (event) => event.preventDefault());
  container.addEventListener("drop", (event) => {
    event.preventDefault();
    const transferred = (event as DragEvent).dataTransfer?.getData("text/plain");
    const index = draggedIndex() ?? (transferred ? Number(transferred) : null);
    if (index === null || Number.isNaN(index)) {
      return;
    }
    if (placeEntry(state, index)) {
      onPlaced();
    }
  });
}

export async function saveDashboard(
  state: ViewState,
  api: ApiClient,
  bannerHost: HTMLElement,
): Promise<DashboardPayload | null> {
  if (!state.sessionId || state.dashboardDraft.length === 0) {
    return null;
  }
  try {
    return await api.saveDashboard(state.sessionId, state.dashboardDraft);
  } catch (error) {
    showBanner(bannerHost, error instanceof Error ? error.message : String(error));
    return null;
  }
}
