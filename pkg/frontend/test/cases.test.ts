import { beforeEach, describe, expect, it } from "vitest";

import type { CaseJson } from "../src/api.js";
import { parseJsonl, renderCaseTable } from "../src/cases.js";

function caseFixture(id: number): CaseJson {
  return {
    case_id: id,
    doc_a: "a.tex",
    doc_b: "b.tex",
    doc_a_fingerprint: "a".repeat(64),
    doc_b_fingerprint: "b".repeat(64),
    span_a: { start: 0, end: 5 },
    span_b: { start: 2, end: 7 },
    text_a: "hello",
    text_b: "world",
    formulas_a: [],
    formulas_b: [],
    images_a: [],
    images_b: [],
    content_types: ["text"],
    obfuscation: id % 2 ? "paraphrase" : null,
    created_at: "2024-05-06T12:00:00Z",
  };
}

describe("renderCaseTable", () => {
  let target: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = `<div id="browser"></div>`;
    target = document.getElementById("browser")!;
  });

  it("renders one row per case", () => {
    renderCaseTable(target, [caseFixture(1), caseFixture(2), caseFixture(3)]);
    expect(target.querySelectorAll("tr[data-case-id]")).toHaveLength(3);
  });

  it("shows the empty state without cases", () => {
    renderCaseTable(target, []);
    expect(target.querySelector(".empty-state")).toBeTruthy();
    expect(target.querySelector("table")).toBeNull();
  });

  it("truncates long excerpts", () => {
    const item = caseFixture(1);
    item.text_a = "x".repeat(200);
    renderCaseTable(target, [item]);
    const cell = target.querySelector("tr[data-case-id] td:nth-child(2)")!;
    expect(cell.textContent!.length).toBeLessThan(70);
  });
});

describe("parseJsonl", () => {
  it("round-trips newline-terminated JSON objects", () => {
    const lines =
      JSON.stringify(caseFixture(1)) + "\n" + JSON.stringify(caseFixture(2)) + "\n";
    const parsed = parseJsonl(lines);
    expect(parsed.map((c) => c.case_id)).toEqual([1, 2]);
  });

  it("handles the empty export", () => {
    expect(parseJsonl("")).toEqual([]);
  });
});
