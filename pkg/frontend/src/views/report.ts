/** Run-report table: word, predicted, accuracy, targeted, score. */

import type { RunRecord, RunSummary } from "../api.js";
import { escapeHtml, formatAccuracy } from "../format.js";

export function renderReport(run: RunRecord, analysisId: number): string {
  const body = run.report.rows
    .map(
      (r) => `
      <tr>
        <td>${escapeHtml(r.word)}</td>
        <td>${escapeHtml(r.predicted_category)}</td>
        <td class="num">${formatAccuracy(r.accuracy)}</td>
        <td class="num">${r.targeted}</td>
        <td class="num">${r.score}</td>
      </tr>`,
    )
    .join("\n");
  return `
    <section class="report">
      <h2>Run ${run.seq} (${run.algorithm === "nb" ? "Naive Bayes" : "logistic regression"})</h2>
      <table class="report-table">
        <thead>
          <tr><th>word</th><th>predicted</th><th>accuracy</th><th>targeted</th><th>score</th></tr>
        </thead>
        <tbody>${body}</tbody>
      </table>
      <p class="total-score">total score: <strong>${run.report.total_score}</strong></p>
      <p class="coverage">
        ${run.report.scored_test_docs} test documents scored,
        ${run.report.excluded_test_docs} contained no feature word
      </p>
      <p><a href="#/analyses/${analysisId}/confusion/${run.seq}">view confusion matrix</a></p>
    </section>`;
}

export function renderRunHistory(runs: RunSummary[], analysisId: number): string {
  if (!runs.length) return "";
  const items = runs
    .map(
      (r) => `
      <li>
        <a href="#/analyses/${analysisId}/report/${r.seq}">run ${r.seq}</a>
        (${escapeHtml(r.algorithm)}) — score ${r.total_score}${
        r.accuracy === null ? "" : `, accuracy ${(r.accuracy * 100).toFixed(1)}%`}
      </li>`,
    )
    .join("\n");
  return `<section class="run-history"><h3>Previous runs</h3><ul>${items}</ul></section>`;
}
