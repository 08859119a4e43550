import { describe, expect, it } from "vitest";

import {
  caseColor,
  matchedFormulaIds,
  overlaps,
  PALETTE_SIZE,
  placeholderHighlights,
  segmentRun,
  type Highlight,
} from "../src/highlights.js";

const h = (start: number, end: number, colorIndex = 0): Highlight => ({
  span: { start, end },
  colorIndex,
  kind: "case",
});

describe("segmentRun", () => {
  it("returns one unhighlighted segment when nothing intersects", () => {
    const segments = segmentRun(10, "hello", [h(0, 5), h(20, 30)]);
    expect(segments).toEqual([{ text: "hello", highlights: [] }]);
  });

  it("splits a run at highlight boundaries", () => {
    const highlight = h(12, 15);
    const segments = segmentRun(10, "abcdefgh", [highlight]);
    expect(segments.map((s) => s.text)).toEqual(["ab", "cde", "fgh"]);
    expect(segments.map((s) => s.highlights.length)).toEqual([0, 1, 0]);
  });

  it("clips highlights that extend past the run", () => {
    const segments = segmentRun(10, "abcd", [h(0, 12), h(13, 99)]);
    expect(segments.map((s) => s.text)).toEqual(["ab", "c", "d"]);
    expect(segments[0].highlights.length).toBe(1);
    expect(segments[1].highlights.length).toBe(0);
    expect(segments[2].highlights.length).toBe(1);
  });

  it("stacks overlapping highlights on the shared segment", () => {
    const segments = segmentRun(0, "abcdef", [h(0, 4, 1), h(2, 6, 2)]);
    const shared = segments.find((s) => s.text === "cd");
    expect(shared?.highlights.map((x) => x.colorIndex).sort()).toEqual([1, 2]);
  });

  it("reassembles to the original text", () => {
    const segments = segmentRun(5, "reassemble me", [h(7, 9), h(11, 12)]);
    expect(segments.map((s) => s.text).join("")).toBe("reassemble me");
  });
});

describe("caseColor", () => {
  it("cycles the fixed palette round-robin", () => {
    expect(caseColor(0)).toBe(0);
    expect(caseColor(PALETTE_SIZE)).toBe(0);
    expect(caseColor(PALETTE_SIZE + 3)).toBe(3);
  });
});

describe("placeholderHighlights", () => {
  it("requires full coverage, matching the server slice rule", () => {
    const span = { start: 10, end: 14 };
    expect(placeholderHighlights(span, [h(10, 14)])).toHaveLength(1);
    expect(placeholderHighlights(span, [h(0, 44)])).toHaveLength(1);
    expect(placeholderHighlights(span, [h(11, 44)])).toHaveLength(0);
    expect(placeholderHighlights(span, [h(0, 13)])).toHaveLength(0);
  });
});

describe("matchedFormulaIds", () => {
  it("maps token indices onto their containing formulas", () => {
    const identifiers = [
      { formula_id: "F1" }, { formula_id: "F1" }, { formula_id: "F2" },
    ];
    expect([...matchedFormulaIds([0, 2], identifiers)]).toEqual(["F1", "F2"]);
    expect([...matchedFormulaIds([1], identifiers)]).toEqual(["F1"]);
    expect([...matchedFormulaIds([99], identifiers)]).toEqual([]);
  });
});

describe("overlaps", () => {
  it("treats touching spans as disjoint", () => {
    expect(overlaps({ start: 0, end: 5 }, { start: 5, end: 9 })).toBe(false);
    expect(overlaps({ start: 0, end: 6 }, { start: 5, end: 9 })).toBe(true);
  });
});
