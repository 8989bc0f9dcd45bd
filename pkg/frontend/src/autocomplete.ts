// Attribute autocompletion for the SQL input, sourced from the catalog
// summaries served by GET /databases.

import type { DatabaseSummary } from "./types.js";

export interface Suggestion {
  display_text: string;
  qualified: string; // table.column, ready to paste into SQL
}

export function attributeSuggestions(catalog: DatabaseSummary, prefix: string): Suggestion[] {
  const needle = prefix.trim().toLowerCase();
  const out: Suggestion[] = [];
  for (const table of catalog.tables) {
    for (const column of table.columns) {
      if (needle === "" || column.display_text.toLowerCase().includes(needle)) {
        out.push({
          display_text: column.display_text,
          qualified: `${table.name}.${column.name}`,
        });
      }
    }
  }
  out.sort((a, b) =>
    a.display_text === b.display_text
      ? a.qualified.localeCompare(b.qualified)
      : a.display_text.localeCompare(b.display_text),
  );
  return out;
}

export function attachAutocomplete(
  input: HTMLInputElement | HTMLTextAreaElement,
  listHost: HTMLElement,
  catalogProvider: () => DatabaseSummary | null,
): void {
  input.addEventListener("input", () => {
    listHost.textContent = "";
    const catalog = catalogProvider();
    if (!catalog) {
      return;
    }
    const token = input.value.split(/[\s,()]+/).pop() ?? "";
    if (token.length < 2) {
      return;
    }
    for (const suggestion of attributeSuggestions(catalog, token).slice(0, 8)) {
      const item = document.createElement("div");
      item.className = "autocomplete-item";
      item.textContent = `${suggestion.display_text} — ${suggestion.qualified}`;
      item.addEventListener("click", () => {
        const parts = input.value.split(/([\s,()]+)/);
        parts[parts.length - 1] = suggestion.qualified;
        input.value = parts.join("");
        listHost.textContent = "";
        input.focus();
      });
      listHost.appendChild(item);
    }
  });
}
