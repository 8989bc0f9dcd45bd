// Page wiring: database picker, table info, query panel (SQL box +
// autocompletion + recommendation list), result panel, history panel, and the
// dashboard builder.

import { ApiClient } from "./api.js";
import { attachAutocomplete } from "./autocomplete.js";
import { showBanner } from "./banner.js";
import { attachDropZone, placeEntry, renderDashboardDraft, saveDashboard } from "./dashboard.js";
import { renderHistory } from "./history.js";
import { renderRecommendations } from "./recommendations.js";
import { renderResult } from "./result.js";
import { appendEntry, initialState } from "./state.js";
import type { HistoryEntryPayload } from "./types.js";

export function mountApp(root: HTMLElement, api: ApiClient = new ApiClient()): void {
  const state = initialState();

  root.innerHTML = `
    <div id="banner-host"></div>
    <header>
      <select id="database-picker"><option value="">select a database…</option></select>
    </header>
    <main>
      <aside id="table-info"></aside>
      <section id="query-panel">
        <textarea id="sql-input" rows="3" placeholder="SQL, or pick a suggestion below"></textarea>
        <div id="autocomplete-host"></div>
        <button id="submit-sql">run</button>
        <div id="recommendations"></div>
      </section>
      <section id="result-panel"></section>
      <section id="history-panel"></section>
      <section id="dashboard-panel">
        <button id="add-to-dashboard">add selected result</button>
        <button id="save-dashboard">save dashboard</button>
        <div id="dashboard-draft"></div>
      </section>
    </main>
  `;

  const bannerHost = root.querySelector<HTMLElement>("#banner-host")!;
  const picker = root.querySelector<HTMLSelectElement>("#database-picker")!;
  const tableInfo = root.querySelector<HTMLElement>("#table-info")!;
  const sqlInput = root.querySelector<HTMLTextAreaElement>("#sql-input")!;
  const autocompleteHost = root.querySelector<HTMLElement>("#autocomplete-host")!;
  const recommendationsHost = root.querySelector<HTMLElement>("#recommendations")!;
  const resultPanel = root.querySelector<HTMLElement>("#result-panel")!;
  const historyPanel = root.querySelector<HTMLElement>("#history-panel")!;
  const dashboardDraftHost = root.querySelector<HTMLElement>("#dashboard-draft")!;

  const refreshRecommendations = () =>
    renderRecommendations(
      recommendationsHost,
      state,
      api,
      { onEntry: showEntry, onRecommendations: refreshRecommendations },
      bannerHost,
    );

  let draggedEntry: number | null = null;

  function showEntry(entry: HistoryEntryPayload): void {
    renderResult(resultPanel, entry);
    renderHistory(
      historyPanel,
      state,
      (restored) => renderResult(resultPanel, restored),
      (index) => {
        draggedEntry = index;
      },
    );
  }

  attachDropZone(dashboardDraftHost, state, () => draggedEntry, () => {
    draggedEntry = null;
    renderDashboardDraft(dashboardDraftHost, state);
  });

  function renderTableInfo(): void {
    tableInfo.textContent = "";
    if (!state.catalog) {
      return;
    }
    for (const table of state.catalog.tables) {
      const block = document.createElement("div");
      block.className = "table-block";
      const name = document.createElement("strong");
      name.textContent = table.name;
      block.appendChild(name);
      const cols = document.createElement("ul");
      for (const column of table.columns) {
        const li = document.createElement("li");
        li.textContent = `${column.display_text} (${column.value_kind})`;
        cols.appendChild(li);
      }
      block.appendChild(cols);
      tableInfo.appendChild(block);
    }
  }

  void api
    .listDatabases()
    .then((databases) => {
      for (const db of databases) {
        const option = document.createElement("option");
        option.value = db.id;
        option.textContent = `${db.id} — ${db.domain_label}`;
        picker.appendChild(option);
      }
      picker.addEventListener("change", () => {
        const id = picker.value;
        if (!id) {
          return;
        }
        state.catalog = databases.find((db) => db.id === id) ?? null;
        renderTableInfo();
        void api
          .createSession(id)
          .then((created) => {
            state.sessionId = created.session_id;
            state.recommendations = created.recommendations;
            state.history = [];
            state.dashboardDraft = [];
            refreshRecommendations();
          })
          .catch((error) => showBanner(bannerHost, String(error)));
      });
    })
    .catch((error) => showBanner(bannerHost, String(error)));

  attachAutocomplete(sqlInput, autocompleteHost, () => state.catalog);

  root.querySelector<HTMLButtonElement>("#submit-sql")!.addEventListener("click", () => {
    if (!state.sessionId || !sqlInput.value.trim()) {
      return;
    }
    void api
      .submitSql(state.sessionId, sqlInput.value)
      .then((response) => {
        appendEntry(state, response.entry);
        state.recommendations = response.recommendations;
        showEntry(response.entry);
        refreshRecommendations();
      })
      .catch((error) => showBanner(bannerHost, String(error)));
  });

  root.querySelector<HTMLButtonElement>("#add-to-dashboard")!.addEventListener("click", () => {
    if (state.selectedIndex === null) {
      return;
    }
    if (placeEntry(state, state.selectedIndex)) {
      renderDashboardDraft(dashboardDraftHost, state);
    }
  });

  root.querySelector<HTMLButtonElement>("#save-dashboard")!.addEventListener("click", () => {
    void saveDashboard(state, api, bannerHost).then((saved) => {
      if (saved) {
        const note = document.createElement("p");
        note.className = "dashboard-saved";
        note.textContent = `dashboard ${saved.id} saved`;
        dashboardDraftHost.appendChild(note);
      }
    });
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mountApp(document.getElementById("app")!);
}
