import type { Estimate } from "./api.js";

/** Whole-percent display, e.g. 0.63 -> "63%". Exact values go on hover. */
export function percent(p: number): string {
  return `${Math.round(p * 100)}%`;
}

/**
 * The labeling-view estimate line: whole percents in category order,
 * joined with " / " (two categories render as "63% / 37%").
 */
export function formatEstimate(estimate: Estimate, categories: string[]): string {
  return categories.map((c) => percent(estimate[c] ?? 0)).join(" / ");
}

/** Hover text with the server's exact probabilities, four decimals. */
export function exactEstimate(estimate: Estimate, categories: string[]): string {
  return categories.map((c) => `${c} ${(estimate[c] ?? 0).toFixed(4)}`).join(", ");
}

export function formatAccuracy(accuracy: number | null): string {
  return accuracy === null ? "—" : accuracy.toFixed(3);
}

export function formatMetric(value: number | null): string {
  return value === null ? "—" : value.toFixed(4);
}

export function formatPct(p: number): string {
  return `${(p * 100).toFixed(1)}%`;
}

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => ESCAPES[ch] ?? ch);
}
