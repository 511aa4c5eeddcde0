import { ApiClient, ApiError } from "./api.js";
import type { AnalysisSummary, RunRecord, TermInput, WordStatRow } from "./api.js";
import { escapeHtml } from "./format.js";
import { reversed, sortByValue, toggleDirection, type SortDirection } from "./sort.js";
import { loadSession, parseRoute, routeHash, saveSession, type Route } from "./state.js";
import { renderConfusion } from "./views/confusion.js";
import {
  renderCompletion,
  renderFeedback,
  renderLabeling,
  wireRegions,
} from "./views/labeling.js";
import { renderLanding } from "./views/landing.js";
import { renderReport, renderRunHistory } from "./views/report.js";
import { renderLabelStats, renderWordStats } from "./views/tables.js";
import { renderTermsEditor, validateTerms, type TermProblem } from "./views/terms.js";

const app = document.getElementById("app") as HTMLElement;
let session = loadSession(window.sessionStorage);
const client = new ApiClient("", session?.token ?? null);
const analysisCache = new Map<number, AnalysisSummary>();
const runCache = new Map<string, RunRecord>();

function navigate(route: Route): void {
  window.location.hash = routeHash(route);
}

function notice(message: string, kind: "info" | "error" = "info"): void {
  const node = document.createElement("div");
  node.className = `notice ${kind}`;
  node.textContent = message;
  app.prepend(node);
  setTimeout(() => node.remove(), 4000);
}

async function analysisSummary(analysisId: number): Promise<AnalysisSummary> {
  const cached = analysisCache.get(analysisId);
  if (cached) return cached;
  const summary = await client.analysis(analysisId);
  analysisCache.set(analysisId, summary);
  return summary;
}

function header(): string {
  if (!session) return "";
  return `
    <header class="top-bar">
      <a href="#/projects" class="brand">textlab</a>
      <span class="user">${escapeHtml(session.username)} (${session.role.toLowerCase()})</span>
      <button id="logout">log out</button>
    </header>`;
}

function wireHeader(): void {
  document.getElementById("logout")?.addEventListener("click", () => {
    session = null;
    client.token = null;
    saveSession(window.sessionStorage, null);
    navigate({ name: "login" });
  });
}

// -- screens ---------------------------------------------------------------

function showLogin(message = ""): void {
  app.innerHTML = `
    <section class="auth">
      <h1>textlab</h1>
      ${message ? `<p class="error">${escapeHtml(message)}</p>` : ""}
      <form id="login-form">
        <label>username <input name="username" autocomplete="username"></label>
        <label>password <input name="password" type="password"
               autocomplete="current-password"></label>
        <button type="submit">log in</button>
      </form>
      <p class="hint">Students join through their class signup link.</p>
    </section>`;
  const form = document.getElementById("login-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    try {
      session = await client.login(
        String(data.get("username") ?? ""), String(data.get("password") ?? ""));
      saveSession(window.sessionStorage, session);
      navigate({ name: "landing" });
    } catch (error) {
      showLogin(error instanceof ApiError ? error.message : String(error));
    }
  });
}

function showSignup(token: string): void {
  app.innerHTML = `
    <section class="auth">
      <h1>Join your class</h1>
      <form id="signup-form">
        <label>pick a username <input name="username" autocomplete="username"></label>
        <label>pick a password <input name="password" type="password"
               autocomplete="new-password"></label>
        <button type="submit">sign up</button>
      </form>
    </section>`;
  const form = document.getElementById("signup-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const username = String(data.get("username") ?? "");
    const password = String(data.get("password") ?? "");
    try {
      await client.signup(token, username, password);
      session = await client.login(username, password);
      saveSession(window.sessionStorage, session);
      navigate({ name: "landing" });
    } catch (error) {
      notice(error instanceof ApiError ? error.message : String(error), "error");
    }
  });
}

async function showLanding(): Promise<void> {
  if (!session) return showLogin();
  const { projects } = await client.projects();
  app.innerHTML = header() + renderLanding(projects, session);
  wireHeader();
}

async function showAnalyses(projectId: number): Promise<void> {
  const { analyses } = await client.analyses(projectId);
  for (const analysis of analyses) analysisCache.set(analysis.id, analysis);
  const rows = analyses
    .map(
      (a) => `
      <tr>
        <td>${a.kind.toLowerCase().replace("_", " ")}</td>
        <td class="num">${a.pool_size}</td>
        <td class="num">${a.remaining}</td>
        <td>
          <a href="#/analyses/${a.id}/label">label</a>
          <a href="#/analyses/${a.id}/label-stats">statistics</a>
          <a href="#/analyses/${a.id}/terms">terms &amp; model</a>
        </td>
      </tr>`,
    )
    .join("\n");
  const canShare = session?.role === "TEACHER";
  app.innerHTML = header() + `
    <section class="analyses">
      <h2>Analyses</h2>
      <table class="analysis-list">
        <thead><tr><th>kind</th><th>pool</th><th>your remaining</th><th></th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <form id="new-analysis">
        <h3>New analysis</h3>
        <label>kind
          <select name="kind">
            <option value="PERSONAL">personal</option>
            ${canShare ? `<option value="SHARED_TEXTS">shared texts</option>
                          <option value="SHARED_MODEL">shared model</option>` : ""}
          </select>
        </label>
        <label>texts per category (shared texts only)
          <input name="per_category_n" type="number" min="1" value="10">
        </label>
        <button type="submit">create</button>
      </form>
    </section>`;
  wireHeader();
  const form = document.getElementById("new-analysis") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const kind = String(data.get("kind"));
    try {
      const analysis = await client.createAnalysis(
        projectId, kind,
        kind === "SHARED_TEXTS" ? Number(data.get("per_category_n")) : undefined);
      analysisCache.set(analysis.id, analysis);
      navigate({ name: "labeling", analysisId: analysis.id });
    } catch (error) {
      notice(error instanceof ApiError ? error.message : String(error), "error");
    }
  });
}

async function showLabeling(analysisId: number): Promise<void> {
  const analysis = await analysisSummary(analysisId);
  let step;
  try {
    step = await client.next(analysisId);
  } catch (error) {
    if (error instanceof ApiError && error.code === "NOTHING_LEFT") {
      app.innerHTML = header() + renderCompletion(analysisId);
      wireHeader();
      return;
    }
    throw error;
  }
  app.innerHTML = header() + renderLabeling(analysis, step);
  wireHeader();
  let submitted = false;
  wireRegions(app, async (category) => {
    if (submitted) return; // no optimistic re-submission; wait for the server
    submitted = true;
    try {
      const outcome = await client.submitLabel(analysisId, step.document.id, category);
      app.querySelector(".labeling")?.insertAdjacentHTML(
        "afterbegin", renderFeedback(outcome.correct));
      setTimeout(() => showLabeling(analysisId), 650);
    } catch (error) {
      if (error instanceof ApiError && error.code === "ALREADY_LABELED") {
        notice("that one was already labeled; moving on", "info");
        showLabeling(analysisId);
        return;
      }
      submitted = false;
      notice(error instanceof ApiError ? error.message : String(error), "error");
    }
  });
}

async function showLabelStats(analysisId: number): Promise<void> {
  let direction: SortDirection = "asc";
  let { rows } = await client.labelStats(analysisId, direction);

  const draw = () => {
    app.innerHTML = header() + renderLabelStats(rows, direction, analysisId);
    wireHeader();
    // toggling the direction is a pure client-side reversal of server rows
    app.querySelector(".sort-toggle")?.addEventListener("click", () => {
      direction = toggleDirection(direction);
      rows = reversed(rows);
      draw();
    });
  };
  draw();
}

async function showWordStats(analysisId: number): Promise<void> {
  const analysis = await analysisSummary(analysisId);
  let sortKey: "count" | "predictiveness" = "count";
  let rows: WordStatRow[];
  try {
    rows = (await client.wordStats(analysisId, sortKey)).rows;
  } catch (error) {
    if (error instanceof ApiError && error.code === "NO_LABELS_YET") {
      app.innerHTML = header() +
        `<section class="stats"><h2>Word statistics</h2>
         <p class="empty">No labels yet — label some documents first.</p></section>`;
      wireHeader();
      return;
    }
    throw error;
  }

  const draw = () => {
    app.innerHTML = header() + renderWordStats(rows, analysis.categories, sortKey);
    wireHeader();
    for (const button of app.querySelectorAll<HTMLElement>(".word-sort")) {
      button.addEventListener("click", () => {
        const key = button.dataset.key as "count" | "predictiveness";
        sortKey = key;
        rows = sortByValue(
          rows,
          key === "count"
            ? (r) => r.total_count
            : (r) => Math.max(...Object.values(r.predictiveness)),
          "desc");
        draw();
      });
    }
  };
  draw();
}

async function showTerms(analysisId: number, drafts?: TermInput[],
                         problems: TermProblem[] = []): Promise<void> {
  if (drafts === undefined) {
    drafts = (await client.getTerms(analysisId)).terms;
    if (!drafts.length) drafts = [{ pattern: "", reason: "" }];
  }
  const { runs } = await client.runs(analysisId);
  app.innerHTML = header() + renderTermsEditor(drafts, problems) +
    renderRunHistory(runs, analysisId);
  wireHeader();

  const readDrafts = (): TermInput[] =>
    [...app.querySelectorAll<HTMLElement>(".term-row")].map((row) => ({
      pattern: (row.querySelector(".pattern") as HTMLInputElement).value,
      reason: (row.querySelector(".reason") as HTMLInputElement).value,
    }));

  app.querySelector(".add-term")?.addEventListener("click", () => {
    showTerms(analysisId, [...readDrafts(), { pattern: "", reason: "" }]);
  });
  for (const button of app.querySelectorAll<HTMLElement>(".remove-term")) {
    button.addEventListener("click", () => {
      const index = Number(button.closest(".term-row")?.getAttribute("data-index"));
      showTerms(analysisId, readDrafts().filter((_, i) => i !== index));
    });
  }
  app.querySelector(".save-terms")?.addEventListener("click", async () => {
    const current = readDrafts().filter((d) => d.pattern.trim() || d.reason.trim());
    const validation = validateTerms(current);
    if (!validation.ok) {
      showTerms(analysisId, current, validation.problems);
      return;
    }
    await client.putTerms(analysisId, validation.terms);
    notice("terms saved");
    showTerms(analysisId, validation.terms);
  });
  app.querySelector(".run-model")?.addEventListener("click", async () => {
    const current = readDrafts().filter((d) => d.pattern.trim() || d.reason.trim());
    const validation = validateTerms(current);
    if (!validation.ok) {
      showTerms(analysisId, current, validation.problems);
      return;
    }
    const algorithm = (app.querySelector(".algorithm") as HTMLSelectElement)
      .value as "nb" | "logreg";
    try {
      await client.putTerms(analysisId, validation.terms);
      const run = await client.run(analysisId, algorithm);
      runCache.set(`${analysisId}:${run.seq}`, run);
      navigate({ name: "report", analysisId, seq: run.seq });
    } catch (error) {
      if (error instanceof ApiError && error.code === "NO_FEATURES_MATCHED") {
        notice("no training word matches these terms — broaden a wildcard, "
          + "e.g. try vote* instead of votes", "error");
        return;
      }
      notice(error instanceof ApiError ? error.message : String(error), "error");
    }
  });
}

async function showReport(analysisId: number, seq: number): Promise<void> {
  const run = runCache.get(`${analysisId}:${seq}`);
  const { runs } = await client.runs(analysisId);
  if (!run) {
    // full row data only travels on the run response; deep links get the
    // history and the persisted confusion view
    app.innerHTML = header() +
      `<section class="report"><h2>Run ${seq}</h2>
       <p>Open the <a href="#/analyses/${analysisId}/confusion/${seq}">confusion
       matrix</a> for this run, or run the model again from the
       <a href="#/analyses/${analysisId}/terms">term editor</a>.</p></section>` +
      renderRunHistory(runs, analysisId);
    wireHeader();
    return;
  }
  app.innerHTML = header() + renderReport(run, analysisId) +
    renderRunHistory(runs, analysisId);
  wireHeader();
}

async function showConfusion(analysisId: number, seq: number): Promise<void> {
  const payload = await client.confusion(analysisId, seq);
  app.innerHTML = header() +
    renderConfusion(payload.confusion, payload.metrics, payload.excluded_test_docs) +
    `<p><a href="#/analyses/${analysisId}/terms">back to terms</a></p>`;
  wireHeader();
}

// -- router -----------------------------------------------------------------

async function render(): Promise<void> {
  const route = parseRoute(window.location.hash);
  if (route.name === "signup") return showSignup(route.token);
  if (!session && route.name !== "login") return showLogin();
  try {
    switch (route.name) {
      case "login":
        return session ? showLanding() : showLogin();
      case "landing":
        return await showLanding();
      case "analyses":
        return await showAnalyses(route.projectId);
      case "labeling":
        return await showLabeling(route.analysisId);
      case "labelStats":
        return await showLabelStats(route.analysisId);
      case "wordStats":
        return await showWordStats(route.analysisId);
      case "terms":
        return await showTerms(route.analysisId);
      case "report":
        return await showReport(route.analysisId, route.seq);
      case "confusion":
        return await showConfusion(route.analysisId, route.seq);
    }
  } catch (error) {
    if (error instanceof ApiError && error.status === 401) {
      session = null;
      client.token = null;
      saveSession(window.sessionStorage, null);
      return showLogin("session expired; log in again");
    }
    app.innerHTML = header() + `<section class="error-screen">
      <h2>Something went wrong</h2>
      <p>${escapeHtml(error instanceof Error ? error.message : String(error))}</p>
      </section>`;
    wireHeader();
  }
}

window.addEventListener("hashchange", () => void render());
void render();
