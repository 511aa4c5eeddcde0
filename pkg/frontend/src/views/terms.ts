/**
 * Term editor: wildcard patterns, each requiring a stated reason before
 * the list can be saved. Validation runs client-side to block the save
 * inline; the server enforces the same contract.
 */

import type { TermInput } from "../api.js";
import { escapeHtml } from "../format.js";

export interface TermProblem {
  index: number;
  field: "pattern" | "reason";
  message: string;
}

export type TermValidation =
  | { ok: true; terms: TermInput[] }
  | { ok: false; problems: TermProblem[] };

export function validateTerms(drafts: TermInput[]): TermValidation {
  const problems: TermProblem[] = [];
  drafts.forEach((draft, index) => {
    const pattern = draft.pattern.trim();
    if (!pattern) {
      problems.push({ index, field: "pattern", message: "pattern is empty" });
    } else if (/^\*+$/.test(pattern)) {
      problems.push({
        index, field: "pattern",
        message: "pattern needs at least one character besides *",
      });
    }
    if (!draft.reason.trim()) {
      problems.push({
        index, field: "reason",
        message: "state a reason why this word helps",
      });
    }
  });
  if (problems.length) return { ok: false, problems };
  return {
    ok: true,
    terms: drafts.map((d) => ({ pattern: d.pattern.trim(), reason: d.reason.trim() })),
  };
}

export function renderTermsEditor(drafts: TermInput[],
                                  problems: TermProblem[] = []): string {
  const problemFor = (index: number, field: string) =>
    problems.find((p) => p.index === index && p.field === field);
  const rows = drafts
    .map((draft, index) => {
      const patternProblem = problemFor(index, "pattern");
      const reasonProblem = problemFor(index, "reason");
      return `
      <tr class="term-row" data-index="${index}">
        <td>
          <input class="pattern" value="${escapeHtml(draft.pattern)}"
                 placeholder="word or wild*card" aria-label="pattern">
          ${patternProblem ? `<span class="problem">${escapeHtml(patternProblem.message)}</span>` : ""}
        </td>
        <td>
          <input class="reason" value="${escapeHtml(draft.reason)}"
                 placeholder="why this word?" aria-label="reason">
          ${reasonProblem ? `<span class="problem">${escapeHtml(reasonProblem.message)}</span>` : ""}
        </td>
        <td><button class="remove-term">remove</button></td>
      </tr>`;
    })
    .join("\n");
  const saveBlocked = problems.length > 0;
  const runDisabled = drafts.length === 0;
  return `
    <section class="terms">
      <h2>Search terms</h2>
      <p>Asterisks are wildcards and may sit anywhere in the word,
         including the front or back. Every term needs a reason.</p>
      <table class="term-table">
        <thead><tr><th>pattern</th><th>reason</th><th></th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <button class="add-term">add term</button>
      <button class="save-terms" ${saveBlocked ? "disabled" : ""}>save terms</button>
      <button class="run-model" ${runDisabled ? "disabled" : ""}>Run Model</button>
      <label class="algorithm-pick">
        algorithm
        <select class="algorithm">
          <option value="nb">Naive Bayes</option>
          <option value="logreg">logistic regression</option>
        </select>
      </label>
    </section>`;
}
