/**
 * Typed client for the /api/v1 contract. This is the only place the app
 * talks to the network; every number shown anywhere in the UI originates
 * from one of these responses.
 */

export interface ApiErrorBody {
  machine_code: string;
  message: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export type Estimate = Record<string, number>;

export interface SessionInfo {
  token: string;
  user_id: number;
  username: string;
  role: "TEACHER" | "STUDENT";
}

export interface Project {
  id: number;
  title: string;
  description: string;
  group_id: number;
  corpus_ids: number[];
  categories: string[];
}

export interface AnalysisSummary {
  id: number;
  project_id: number;
  kind: "PERSONAL" | "SHARED_TEXTS" | "SHARED_MODEL";
  owner_id: number;
  per_category_n: number | null;
  seed: number;
  categories: string[];
  pool_size: number;
  remaining: number;
  runs: number;
}

export interface NextDocument {
  document: { id: number; text: string };
  estimate: Estimate;
  remaining: number;
}

export interface LabelOutcome {
  correct: boolean;
  remaining: number;
}

export interface LabelStatRow {
  document_id: number;
  text: string;
  correct_count: number;
  incorrect_count: number;
  correct_pct: number;
}

export interface WordStatRow {
  word: string;
  total_count: number;
  counts: Record<string, number>;
  predictiveness: Record<string, number>;
}

export interface TermInput {
  pattern: string;
  reason: string;
}

export interface ReportRow {
  word: string;
  matched_by: string;
  predicted_category: string;
  accuracy: number | null;
  targeted: number;
  score: number;
}

export interface ConfusionPayload {
  categories: string[];
  cells: number[][];
}

export interface MetricsPayload {
  precision: Record<string, number | null>;
  recall: Record<string, number | null>;
  f1: Record<string, number | null>;
  macro_f1: number | null;
  accuracy: number | null;
}

export interface RunReport {
  rows: ReportRow[];
  confusion: ConfusionPayload;
  metrics: MetricsPayload;
  total_score: number;
  scored_test_docs: number;
  excluded_test_docs: number;
  train_size: number;
  test_size: number;
}

export interface RunRecord {
  seq: number;
  user_id: number;
  algorithm: "nb" | "logreg";
  report: RunReport;
}

export interface RunSummary {
  seq: number;
  algorithm: string;
  total_score: number;
  accuracy: number | null;
}

export interface LeaderboardRow {
  username: string;
  best_score: number;
}

export class ApiClient {
  constructor(
    private baseUrl = "",
    public token: string | null = null,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await fetch(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "HTTP_ERROR";
      let message = response.statusText;
      try {
        const parsed = (await response.json()) as { error?: ApiErrorBody };
        if (parsed.error) {
          code = parsed.error.machine_code;
          message = parsed.error.message;
        }
      } catch {
        /* non-JSON error body; keep the status text */
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  async login(username: string, password: string): Promise<SessionInfo> {
    const session = await this.request<SessionInfo>("POST", "/login", { username, password });
    this.token = session.token;
    return session;
  }

  signup(token: string, username: string, password: string) {
    return this.request<{ user_id: number }>("POST", `/signup/${token}`, { username, password });
  }

  health() {
    return this.request<{ version: string }>("GET", "/health");
  }

  projects() {
    return this.request<{ projects: Project[] }>("GET", "/projects");
  }

  analyses(projectId: number) {
    return this.request<{ analyses: AnalysisSummary[] }>(
      "GET", `/projects/${projectId}/analyses`);
  }

  createAnalysis(projectId: number, kind: string, perCategoryN?: number) {
    return this.request<AnalysisSummary>("POST", `/projects/${projectId}/analyses`, {
      kind,
      per_category_n: perCategoryN ?? null,
    });
  }

  analysis(analysisId: number) {
    return this.request<AnalysisSummary>("GET", `/analyses/${analysisId}`);
  }

  next(analysisId: number) {
    return this.request<NextDocument>("GET", `/analyses/${analysisId}/next`);
  }

  submitLabel(analysisId: number, documentId: number, category: string) {
    return this.request<LabelOutcome>("POST", `/analyses/${analysisId}/labels`, {
      document_id: documentId,
      category,
    });
  }

  labelStats(analysisId: number, order: "asc" | "desc") {
    return this.request<{ rows: LabelStatRow[] }>(
      "GET", `/analyses/${analysisId}/stats/labels?order=${order}`);
  }

  wordStats(analysisId: number, sort: "count" | "predictiveness") {
    return this.request<{ rows: WordStatRow[] }>(
      "GET", `/analyses/${analysisId}/stats/words?sort=${sort}`);
  }

  getTerms(analysisId: number) {
    return this.request<{ terms: TermInput[] }>("GET", `/analyses/${analysisId}/terms`);
  }

  putTerms(analysisId: number, terms: TermInput[]) {
    return this.request<{ terms: TermInput[] }>(
      "PUT", `/analyses/${analysisId}/terms`, { terms });
  }

  run(analysisId: number, algorithm: "nb" | "logreg") {
    return this.request<RunRecord>("POST", `/analyses/${analysisId}/run`, { algorithm });
  }

  runs(analysisId: number) {
    return this.request<{ runs: RunSummary[] }>("GET", `/analyses/${analysisId}/runs`);
  }

  confusion(analysisId: number, seq: number) {
    return this.request<{
      confusion: ConfusionPayload;
      metrics: MetricsPayload;
      excluded_test_docs: number;
    }>("GET", `/analyses/${analysisId}/runs/${seq}/confusion`);
  }

  leaderboard(analysisId: number) {
    return this.request<{ rows: LeaderboardRow[] }>(
      "GET", `/analyses/${analysisId}/leaderboard`);
  }
}
