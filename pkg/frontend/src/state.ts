/**
 * Session and route state. Client state never holds a gold label for an
 * unlabeled document — the server never sends one, and nothing here
 * stores anything beyond what the API returned.
 */

import type { AnalysisSummary, SessionInfo } from "./api.js";

export type Route =
  | { name: "login" }
  | { name: "signup"; token: string }
  | { name: "landing" }
  | { name: "analyses"; projectId: number }
  | { name: "labeling"; analysisId: number }
  | { name: "labelStats"; analysisId: number }
  | { name: "wordStats"; analysisId: number }
  | { name: "terms"; analysisId: number }
  | { name: "report"; analysisId: number; seq: number }
  | { name: "confusion"; analysisId: number; seq: number };

export interface ViewState {
  session: SessionInfo | null;
  route: Route;
  analysisCache: Map<number, AnalysisSummary>;
}

export function parseRoute(hash: string): Route {
  const parts = hash.replace(/^#\/?/, "").split("/").filter(Boolean);
  switch (parts[0]) {
    case "signup":
      return parts[1] ? { name: "signup", token: parts[1] } : { name: "login" };
    case "projects":
      return parts[1]
        ? { name: "analyses", projectId: Number(parts[1]) }
        : { name: "landing" };
    case "analyses": {
      const analysisId = Number(parts[1]);
      if (!Number.isFinite(analysisId)) return { name: "landing" };
      switch (parts[2]) {
        case "label":
          return { name: "labeling", analysisId };
        case "label-stats":
          return { name: "labelStats", analysisId };
        case "word-stats":
          return { name: "wordStats", analysisId };
        case "terms":
          return { name: "terms", analysisId };
        case "report":
          return { name: "report", analysisId, seq: Number(parts[3] ?? 1) };
        case "confusion":
          return { name: "confusion", analysisId, seq: Number(parts[3] ?? 1) };
        default:
          return { name: "labeling", analysisId };
      }
    }
    case "login":
    case undefined:
      return { name: "login" };
    default:
      return { name: "landing" };
  }
}

export function routeHash(route: Route): string {
  switch (route.name) {
    case "login":
      return "#/login";
    case "signup":
      return `#/signup/${route.token}`;
    case "landing":
      return "#/projects";
    case "analyses":
      return `#/projects/${route.projectId}`;
    case "labeling":
      return `#/analyses/${route.analysisId}/label`;
    case "labelStats":
      return `#/analyses/${route.analysisId}/label-stats`;
    case "wordStats":
      return `#/analyses/${route.analysisId}/word-stats`;
    case "terms":
      return `#/analyses/${route.analysisId}/terms`;
    case "report":
      return `#/analyses/${route.analysisId}/report/${route.seq}`;
    case "confusion":
      return `#/analyses/${route.analysisId}/confusion/${route.seq}`;
  }
}

const TOKEN_KEY = "textlab.session";

export function saveSession(storage: Pick<Storage, "setItem" | "removeItem">,
                            session: SessionInfo | null): void {
  if (session === null) storage.removeItem(TOKEN_KEY);
  else storage.setItem(TOKEN_KEY, JSON.stringify(session));
}

export function loadSession(storage: Pick<Storage, "getItem">): SessionInfo | null {
  const raw = storage.getItem(TOKEN_KEY);
  if (!raw) return null;
  try {
    return JSON.parse(raw) as SessionInfo;
  } catch {
    return null;
  }
}
