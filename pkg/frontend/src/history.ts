// History panel: append-only list of submitted queries; clicking restores the
// stored entry into the result panel without re-executing anything.

import { selectEntry, type ViewState } from "./state.js";
import type { HistoryEntryPayload } from "./types.js";

export function renderHistory(
  container: HTMLElement,
  state: ViewState,
  onRestore: (entry: HistoryEntryPayload) => void,
  onDragStart?: (index: number) => void,
): void {
  container.textContent = "";
  const list = document.createElement("ol");
  list.className = "history-list";
  for (const entry of state.history) {
    const row = document.createElement("li");
    row.className = "history-row";
    row.dataset.index = String(entry.index);
    row.textContent = `${entry.nl_text} (${entry.result.rows.length} rows)`;
    row.addEventListener("click", () => {
      if (selectEntry(state, entry.index)) {
        onRestore(state.history[entry.index]);
      }
    });
    if (onDragStart) {
      row.draggable = true;
      row.addEventListener("dragstart", (event) => {
        onDragStart(entry.index);
        // DataTransfer is absent in some test environments; the callback
        // above carries the index either way
        (event as DragEvent).dataTransfer?.setData("text/plain", String(entry.index));
      });
    }
    list.appendChild(row);
  }
  container.appendChild(list);
}
