/** Label-statistics and word-statistics tables (server rows, client reorder). */

import type { LabelStatRow, WordStatRow } from "../api.js";
import { escapeHtml, formatPct } from "../format.js";
import type { SortDirection } from "../sort.js";

export function renderLabelStats(rows: LabelStatRow[], direction: SortDirection,
                                 analysisId: number): string {
  const body = rows
    .map(
      (r) => `
      <tr>
        <td class="doc-text">${escapeHtml(r.text)}</td>
        <td class="num">${r.correct_count}</td>
        <td class="num">${r.incorrect_count}</td>
        <td class="num">${formatPct(r.correct_pct)}</td>
      </tr>`,
    )
    .join("\n");
  return `
    <section class="stats">
      <h2>Label statistics</h2>
      <p><a href="#/analyses/${analysisId}/word-stats">See all words</a></p>
      <table class="label-stats">
        <thead>
          <tr>
            <th>document</th>
            <th>correct</th>
            <th>incorrect</th>
            <th><button class="sort-toggle" data-direction="${direction}">
              correct-% ${direction === "asc" ? "▲" : "▼"}
            </button></th>
          </tr>
        </thead>
        <tbody>${body}</tbody>
      </table>
      ${rows.length ? "" : '<p class="empty">Nothing labeled yet.</p>'}
    </section>`;
}

export function renderWordStats(rows: WordStatRow[], categories: string[],
                                sortKey: "count" | "predictiveness"): string {
  const headers = categories.map((c) => `<th>${escapeHtml(c)}</th>`).join("");
  const body = rows
    .map((r) => {
      const predictiveness = categories
        .map((c) => `<td class="num">${(r.predictiveness[c] ?? 0).toFixed(3)}</td>`)
        .join("");
      return `
      <tr>
        <td>${escapeHtml(r.word)}</td>
        <td class="num">${r.total_count}</td>
        ${predictiveness}
      </tr>`;
    })
    .join("\n");
  return `
    <section class="stats">
      <h2>Word statistics</h2>
      <p>
        sort by
        <button class="word-sort" data-key="count"
                ${sortKey === "count" ? "disabled" : ""}>frequency</button>
        <button class="word-sort" data-key="predictiveness"
                ${sortKey === "predictiveness" ? "disabled" : ""}>predictiveness</button>
      </p>
      <table class="word-stats">
        <thead><tr><th>word</th><th>count</th>${headers}</tr></thead>
        <tbody>${body}</tbody>
      </table>
    </section>`;
}
