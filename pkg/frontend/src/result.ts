// Result panel: renders the server's chart spec as-is (vega-lite when an
// embedder is available), with explanation and raw-data toggles. Anything
// unrenderable falls back to the raw table.

import type { ChartSpecPayload, HistoryEntryPayload, ResultTablePayload } from "./types.js";

type VegaEmbedFn = (el: HTMLElement, spec: Record<string, unknown>) => Promise<unknown>;

declare global {
  interface Window {
    vegaEmbed?: VegaEmbedFn;
  }
}

export function renderRawTable(table: ResultTablePayload): HTMLTableElement {
  const el = document.createElement("table");
  el.className = "result-table";
  const head = el.createTHead().insertRow();
  for (const [name] of table.columns) {
    const cell = document.createElement("th");
    cell.textContent = name;
    head.appendChild(cell);
  }
  const body = el.createTBody();
  for (const row of table.rows) {
    const tr = body.insertRow();
    for (const value of row) {
      tr.insertCell().textContent = value === null ? "" : String(value);
    }
  }
  return el;
}

export function renderValueCard(chart: ChartSpecPayload): HTMLElement {
  const card = document.createElement("div");
  card.className = "value-card";
  const first = chart.data[0] ?? {};
  const value = Object.values(first)[0];
  card.textContent = value === undefined || value === null ? "—" : String(value);
  return card;
}

export function renderExplanation(entry: HistoryEntryPayload): HTMLElement {
  const el = document.createElement("p");
  el.className = "explanation";
  for (const [text, kind] of entry.explanation.segments) {
    if (kind === "plain") {
      el.appendChild(document.createTextNode(text));
    } else {
      const mention = document.createElement("span");
      mention.className = kind === "table_mention" ? "mention-table" : "mention-column";
      mention.textContent = text;
      el.appendChild(mention);
    }
  }
  return el;
}

export function renderResult(container: HTMLElement, entry: HistoryEntryPayload): void {
  container.textContent = "";

  const title = document.createElement("h3");
  title.className = "result-title";
  title.textContent = entry.nl_text;
  container.appendChild(title);

  const chartHost = document.createElement("div");
  chartHost.className = "chart-host";
  container.appendChild(chartHost);

  const mark = entry.chart.mark;
  if (mark === "value_card") {
    chartHost.appendChild(renderValueCard(entry.chart));
  } else if (mark === "table" || !entry.vega_lite || !window.vegaEmbed) {
    // no embedder loaded, or the server already fell back to a table
    chartHost.appendChild(renderRawTable(entry.result));
  } else {
    window
      .vegaEmbed(chartHost, entry.vega_lite)
      .catch(() => {
        chartHost.textContent = "";
        chartHost.appendChild(renderRawTable(entry.result));
      });
  }

  const toggles = document.createElement("div");
  toggles.className = "result-toggles";
  container.appendChild(toggles);

  const explanationHost = document.createElement("div");
  explanationHost.className = "explanation-host";
  explanationHost.hidden = true;
  explanationHost.appendChild(renderExplanation(entry));

  const rawHost = document.createElement("div");
  rawHost.className = "raw-host";
  rawHost.hidden = true;
  rawHost.appendChild(renderRawTable(entry.result));

  const explainToggle = document.createElement("button");
  explainToggle.className = "toggle-explanation";
  explainToggle.textContent = "explain";
  explainToggle.addEventListener("click", () => {
    explanationHost.hidden = !explanationHost.hidden;
  });
  toggles.appendChild(explainToggle);

  const rawToggle = document.createElement("button");
  rawToggle.className = "toggle-raw";
  rawToggle.textContent = "data";
  rawToggle.addEventListener("click", () => {
    rawHost.hidden = !rawHost.hidden;
  });
  toggles.appendChild(rawToggle);

  container.appendChild(explanationHost);
  container.appendChild(rawHost);
}
