/**
 * Recorded /api/v1 payloads used as contract fixtures. Shapes mirror the
 * server responses exactly; the UI under test must render these numbers
 * verbatim, never recompute them.
 */

import type {
  AnalysisSummary,
  LabelStatRow,
  NextDocument,
  RunRecord,
  WordStatRow,
} from "../src/api.js";

export const twoCategoryAnalysis: AnalysisSummary = {
  id: 3,
  project_id: 1,
  kind: "SHARED_MODEL",
  owner_id: 1,
  per_category_n: null,
  seed: 11,
  categories: ["Biden", "Sanders"],
  pool_size: 240,
  remaining: 12,
  runs: 1,
};

/** GET /analyses/3/next — the labeling-view estimate fixture. */
export const nextDocumentFixture: NextDocument = {
  document: {
    id: 17,
    text: "We need a leader who will be ready on day one to repair the damage http://link",
  },
  estimate: { Biden: 0.63, Sanders: 0.37 },
  remaining: 12,
};

export const threeCategoryAnalysis: AnalysisSummary = {
  ...twoCategoryAnalysis,
  id: 4,
  categories: ["center", "left", "right"],
};

export const threeWayEstimate: NextDocument = {
  document: { id: 2, text: "a three category pool document" },
  estimate: { center: 0.2, left: 0.5, right: 0.3 },
  remaining: 40,
};

/** GET /analyses/3/stats/labels?order=asc — 23 labelers, hard tweet first. */
export const labelStatsAscending: LabelStatRow[] = [
  {
    document_id: 5,
    text: "FLORIDA: Today is the LAST DAY to register for the primary at http://link Let's win this together! http://link",
    correct_count: 1,
    incorrect_count: 22,
    correct_pct: 0.043478260869565216,
  },
  {
    document_id: 9,
    text: "We will not defeat the incumbent with a candidate who blamed redlining for the financial crisis.",
    correct_count: 12,
    incorrect_count: 11,
    correct_pct: 0.5217391304347826,
  },
  {
    document_id: 2,
    text: "We need a leader who will be ready on day one. http://link",
    correct_count: 23,
    incorrect_count: 0,
    correct_pct: 1.0,
  },
];

/** GET /analyses/3/stats/words?sort=count */
export const wordStatsByCount: WordStatRow[] = [
  {
    word: "the",
    total_count: 412,
    counts: { Biden: 203, Sanders: 209 },
    predictiveness: { Biden: 0.4927536231884058, Sanders: 0.5072463768115942 },
  },
  {
    word: "http://link",
    total_count: 230,
    counts: { Biden: 130, Sanders: 100 },
    predictiveness: { Biden: 0.5647058823529412, Sanders: 0.43529411764705883 },
  },
  {
    word: "billionaire",
    total_count: 80,
    counts: { Biden: 2, Sanders: 78 },
    predictiveness: { Biden: 0.036585365853658534, Sanders: 0.9634146341463414 },
  },
];

/** POST /analyses/3/run — the report fixture with the billionaire row. */
export const billionaireRun: RunRecord = {
  seq: 1,
  user_id: 7,
  algorithm: "nb",
  report: {
    rows: [
      {
        word: "billionaire",
        matched_by: "billionaire",
        predicted_category: "Sanders",
        accuracy: 1.0,
        targeted: 54,
        score: 54,
      },
      {
        word: "malarkey",
        matched_by: "malark*",
        predicted_category: "Biden",
        accuracy: 0.875,
        targeted: 16,
        score: 12,
      },
      {
        word: "unmatched",
        matched_by: "unmatched",
        predicted_category: "Biden",
        accuracy: null,
        targeted: 0,
        score: 0,
      },
    ],
    confusion: {
      categories: ["Biden", "Sanders"],
      cells: [
        [44, 6],
        [3, 51],
      ],
    },
    metrics: {
      precision: { Biden: 0.9361702127659575, Sanders: 0.8947368421052632 },
      recall: { Biden: 0.88, Sanders: 0.9444444444444444 },
      f1: { Biden: 0.9072164948453608, Sanders: 0.918918918918919 },
      macro_f1: 0.9130677068821399,
      accuracy: 0.9134615384615384,
    },
    total_score: 66,
    scored_test_docs: 104,
    excluded_test_docs: 9,
    train_size: 452,
    test_size: 113,
  },
};
