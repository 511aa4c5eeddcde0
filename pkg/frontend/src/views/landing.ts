import type { Project, SessionInfo } from "../api.js";
import { escapeHtml } from "../format.js";

export function renderLanding(projects: Project[], session: SessionInfo): string {
  const cards = projects
    .map(
      (p) => `
      <a class="card project-card" href="#/projects/${p.id}">
        <h3>${escapeHtml(p.title)}</h3>
        <p>${escapeHtml(p.description)}</p>
        <p class="meta">categories: ${p.categories.map(escapeHtml).join(", ")}</p>
      </a>`,
    )
    .join("\n");
  const teacherTools =
    session.role === "TEACHER"
      ? `<p class="teacher-note">Teacher tools: create groups, upload corpora and
         create projects with the <code>textlab</code> CLI or the API.</p>`
      : "";
  return `
    <section class="landing">
      <h2>Your projects</h2>
      ${projects.length ? cards : "<p>No projects yet. Ask your teacher for a signup link.</p>"}
      ${teacherTools}
    </section>`;
}
