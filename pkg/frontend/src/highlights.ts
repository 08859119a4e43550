/** Span-to-rendered-run highlight math, shared by case and detector layers.
 *
 * A rendered document is a sequence of text runs (each carrying the plain
 * text offset of its first character) plus formula/image elements standing
 * for their placeholders.  Highlights are half-open [start, end) offset
 * intervals; a highlight covers exactly the parts of the runs it intersects.
 */

import type { SpanJson } from "./api.js";

export const PALETTE_SIZE = 8;

export type HighlightKind = "case" | "detector";

export interface Highlight {
  span: SpanJson;
  colorIndex: number;
  kind: HighlightKind;
}

/** Color index for a recorded case: round-robin over the fixed palette,
 * identical in both panes. */
export function caseColor(caseOrdinal: number): number {
  return caseOrdinal % PALETTE_SIZE;
}

export interface RunSegment {
  text: string;
  highlights: Highlight[];
}

export function overlaps(a: SpanJson, b: SpanJson): boolean {
  return a.start < b.end && b.start < a.end;
}

/** Split one text run into segments with constant highlight coverage. */
export function segmentRun(
  runOffset: number,
  runText: string,
  highlights: Highlight[],
): RunSegment[] {
  const runEnd = runOffset + runText.length;
  const cuts = new Set<number>([runOffset, runEnd]);
  for (const h of highlights) {
    if (!overlaps(h.span, { start: runOffset, end: runEnd })) continue;
    cuts.add(Math.max(h.span.start, runOffset));
    cuts.add(Math.min(h.span.end, runEnd));
  }
  const points = [...cuts].sort((x, y) => x - y);
  const segments: RunSegment[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [from, to] = [points[i], points[i + 1]];
    if (from >= to) continue;
    const active = highlights.filter((h) => h.span.start < to && from < h.span.end);
    segments.push({ text: runText.slice(from - runOffset, to - runOffset), highlights: active });
  }
  return segments;
}

/** Does a placeholder-bearing element (formula/image) fall inside any
 * highlight?  Placeholders are only highlighted when fully covered, matching
 * the slicing rule on the server. */
export function placeholderHighlights(
  placeholderSpan: SpanJson,
  highlights: Highlight[],
): Highlight[] {
  return highlights.filter(
    (h) => h.span.start <= placeholderSpan.start && placeholderSpan.end <= h.span.end,
  );
}

/** Map a math match's token pairs onto the formula ids that contain the
 * matched tokens, per side. */
export function matchedFormulaIds(
  tokenIndices: number[],
  identifiers: { formula_id: string }[],
): Set<string> {
  const ids = new Set<string>();
  for (const index of tokenIndices) {
    const token = identifiers[index];
    if (token) ids.add(token.formula_id);
  }
  return ids;
}
