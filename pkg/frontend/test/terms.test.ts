import { describe, expect, it } from "vitest";

import { renderTermsEditor, validateTerms } from "../src/views/terms.js";

describe("term validation", () => {
  it("blocks a term with a missing reason", () => {
    const result = validateTerms([{ pattern: "bill*", reason: "" }]);
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.problems).toHaveLength(1);
      expect(result.problems[0]).toMatchObject({ index: 0, field: "reason" });
    }
  });

  it("blocks whitespace-only reasons too", () => {
    expect(validateTerms([{ pattern: "x", reason: "   " }]).ok).toBe(false);
  });

  it("blocks empty and all-wildcard patterns", () => {
    const empty = validateTerms([{ pattern: "", reason: "why" }]);
    expect(empty.ok).toBe(false);
    const stars = validateTerms([{ pattern: "**", reason: "why" }]);
    expect(stars.ok).toBe(false);
    if (!stars.ok) expect(stars.problems[0]?.field).toBe("pattern");
  });

  it("accepts and trims valid terms", () => {
    const result = validateTerms([
      { pattern: " bill* ", reason: " mentions money " },
      { pattern: "vote", reason: "campaign vocabulary" },
    ]);
    expect(result.ok).toBe(true);
    if (result.ok) {
      expect(result.terms[0]).toEqual({ pattern: "bill*", reason: "mentions money" });
    }
  });

  it("reports every problem with its row index", () => {
    const result = validateTerms([
      { pattern: "fine", reason: "ok" },
      { pattern: "", reason: "" },
    ]);
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.problems.map((p) => [p.index, p.field])).toEqual([
        [1, "pattern"],
        [1, "reason"],
      ]);
    }
  });
});

describe("terms editor rendering", () => {
  it("disables save while a reason is missing and flags the row inline", () => {
    const drafts = [{ pattern: "bill*", reason: "" }];
    const validation = validateTerms(drafts);
    expect(validation.ok).toBe(false);
    const html = renderTermsEditor(drafts, validation.ok ? [] : validation.problems);
    expect(html).toContain('<button class="save-terms" disabled>');
    expect(html).toContain("state a reason why this word helps");
  });

  it("enables save when every term has a reason", () => {
    const html = renderTermsEditor([{ pattern: "bill*", reason: "money talk" }]);
    expect(html).toContain('<button class="save-terms" >');
  });

  it("disables Run Model with an empty term list", () => {
    const html = renderTermsEditor([]);
    expect(html).toContain('<button class="run-model" disabled>');
  });

  it("re-renders four saved terms with their reasons", () => {
    const terms = [
      { pattern: "billionaire", reason: "wealth critique" },
      { pattern: "malark*", reason: "signature word" },
      { pattern: "#hashtag", reason: "tag density" },
      { pattern: "wall*", reason: "finance theme" },
    ];
    const html = renderTermsEditor(terms);
    for (const term of terms) {
      expect(html).toContain(`value="${term.pattern}"`);
      expect(html).toContain(`value="${term.reason}"`);
    }
    expect(html.match(/class="term-row"/g)).toHaveLength(4);
  });
});
