// Recommendation list: renders the served payload verbatim and submits the
// clicked row's index. No client-side re-ranking, ever.

import { ApiClient } from "./api.js";
import { showBanner } from "./banner.js";
import { appendEntry, type ViewState } from "./state.js";
import type { HistoryEntryPayload, RecommendationSetPayload } from "./types.js";

export interface RecommendationCallbacks {
  onEntry: (entry: HistoryEntryPayload) => void;
  onRecommendations: (set: RecommendationSetPayload) => void;
}

export function renderRecommendations(
  container: HTMLElement,
  state: ViewState,
  api: ApiClient,
  callbacks: RecommendationCallbacks,
  bannerHost?: HTMLElement,
): void {
  container.textContent = "";
  const set = state.recommendations;
  if (!set) {
    return;
  }
  const list = document.createElement("ul");
  list.className = "recommendation-list";
  set.items.forEach((item, index) => {
    const row = document.createElement("li");
    row.className = "recommendation-row";
    row.dataset.index = String(index);

    const question = document.createElement("span");
    question.className = "recommendation-nl";
    question.textContent = item.nl;
    row.appendChild(question);

    const score = document.createElement("span");
    score.className = "recommendation-score";
    score.textContent = String(item.score);
    row.appendChild(score);

    const sql = document.createElement("code");
    sql.className = "recommendation-sql";
    sql.textContent = item.sql;
    row.appendChild(sql);

    row.addEventListener("click", () => {
      void submitIndex(index);
    });
    list.appendChild(row);
  });
  container.appendChild(list);

  async function submitIndex(index: number): Promise<void> {
    if (!state.sessionId) {
      return;
    }
    try {
      const response = await api.submitRecommendation(state.sessionId, index);
      appendEntry(state, response.entry);
      state.recommendations = response.recommendations;
      callbacks.onEntry(response.entry);
      callbacks.onRecommendations(response.recommendations);
    } catch (error) {
      // state untouched; surface the failure and keep the current list
      showBanner(bannerHost ?? container, error instanceof Error ? error.message : String(error));
    }
  }
}
