/** Confusion-matrix grid with per-category precision / recall / F1. */

import type { ConfusionPayload, MetricsPayload } from "../api.js";
import { escapeHtml, formatMetric } from "../format.js";

export function renderConfusion(confusion: ConfusionPayload,
                                metrics: MetricsPayload,
                                excludedTestDocs: number): string {
  const categories = confusion.categories;
  const headerCells = categories
    .map((c) => `<th scope="col">${escapeHtml(c)}</th>`)
    .join("");
  const rows = confusion.cells
    .map((cells, i) => {
      const rowTotal = cells.reduce((a, b) => a + b, 0);
      const data = cells
        .map((count, j) =>
          `<td class="num ${i === j ? "diagonal" : ""}">${count}</td>`)
        .join("");
      return `
      <tr>
        <th scope="row">${escapeHtml(categories[i] ?? "")}</th>
        ${data}
        <td class="num row-total">${rowTotal}</td>
      </tr>`;
    })
    .join("\n");
  const metricRows = categories
    .map(
      (c) => `
      <tr>
        <td>${escapeHtml(c)}</td>
        <td class="num">${formatMetric(metrics.precision[c] ?? null)}</td>
        <td class="num">${formatMetric(metrics.recall[c] ?? null)}</td>
        <td class="num">${formatMetric(metrics.f1[c] ?? null)}</td>
      </tr>`,
    )
    .join("\n");
  return `
    <section class="confusion">
      <h2>Confusion matrix</h2>
      <p class="axis-note">rows: gold category &middot; columns: predicted</p>
      <table class="confusion-grid">
        <thead><tr><th></th>${headerCells}<th>total</th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <table class="metrics">
        <thead><tr><th>category</th><th>precision</th><th>recall</th><th>F1</th></tr></thead>
        <tbody>${metricRows}</tbody>
      </table>
      <p class="summary">
        accuracy ${formatMetric(metrics.accuracy)}
        &middot; macro-F1 ${formatMetric(metrics.macro_f1)}
        &middot; ${excludedTestDocs} test documents had no feature word
      </p>
    </section>`;
}
