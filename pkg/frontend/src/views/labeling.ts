/**
 * The labeling screen: current document at the bottom, a drop region per
 * category, the model's current estimate as whole percents, and the
 * remaining-count header. Drag the chip onto a region, click the region,
 * or focus it and press Enter — all three routes end in the same submit.
 */

import type { AnalysisSummary, NextDocument } from "../api.js";
import { escapeHtml, exactEstimate, formatEstimate } from "../format.js";

const REGION_COLORS = [
  "#2f855a", "#2b6cb0", "#b7791f", "#9f7aea", "#dd6b20", "#319795",
];

export function renderLabeling(analysis: AnalysisSummary, step: NextDocument): string {
  const categories = analysis.categories;
  const regions = categories
    .map((category, i) => {
      const color = REGION_COLORS[i % REGION_COLORS.length];
      return `
      <button class="region" data-category="${escapeHtml(category)}"
              style="--region-color: ${color}"
              aria-label="label as ${escapeHtml(category)}">
        ${escapeHtml(category)}
      </button>`;
    })
    .join("\n");
  return `
    <section class="labeling">
      <header class="labeling-header">
        <span class="remaining">${step.remaining} left to label</span>
        <span class="estimate" title="${escapeHtml(exactEstimate(step.estimate, categories))}">
          model estimate: ${formatEstimate(step.estimate, categories)}
        </span>
      </header>
      <div class="target" role="group" aria-label="choose a category">
        ${regions}
      </div>
      <div class="chip" draggable="true" tabindex="0"
           aria-label="document chip; drag onto a category">&#128038;</div>
      <article class="document" data-document-id="${step.document.id}">
        ${escapeHtml(step.document.text)}
      </article>
    </section>`;
}

export function renderFeedback(correct: boolean): string {
  return correct
    ? `<div class="feedback correct">Correct!</div>`
    : `<div class="feedback incorrect">Not this one.</div>`;
}

export function renderCompletion(analysisId: number): string {
  return `
    <section class="completion">
      <h2>All documents labeled</h2>
      <p><a href="#/analyses/${analysisId}/label-stats">See Label &amp; Word Statistics</a></p>
    </section>`;
}

/**
 * Category extraction shared by the click, drop, and keyboard handlers,
 * so every input modality produces the identical submit call.
 */
export function categoryFromTarget(target: unknown): string | null {
  if (target && typeof target === "object" && "dataset" in target) {
    const dataset = (target as { dataset: { category?: string } }).dataset;
    return dataset.category ?? null;
  }
  return null;
}

export type SubmitFn = (category: string) => void;

export function wireRegions(root: ParentNode, submit: SubmitFn): void {
  for (const region of root.querySelectorAll<HTMLElement>(".region")) {
    region.addEventListener("click", () => {
      const category = categoryFromTarget(region);
      if (category) submit(category);
    });
    region.addEventListener("dragover", (event) => event.preventDefault());
    region.addEventListener("drop", (event) => {
      event.preventDefault();
      const category = categoryFromTarget(region);
      if (category) submit(category);
    });
    // Enter/Space on a focused <button> fires click: the keyboard path is
    // the click path by construction.
  }
  const chip = root.querySelector<HTMLElement>(".chip");
  chip?.addEventListener("dragstart", (event) => {
    (event as DragEvent).dataTransfer?.setData("text/plain", "chip");
  });
}
