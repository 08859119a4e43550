/** Detector panel: one active algorithm overlaying both panes. */

import type { ApiClient, DetectResponse } from "./api.js";
import { Highlight, matchedFormulaIds } from "./highlights.js";
import type { DocumentPane } from "./panes.js";

export const ALGORITHMS = ["lcs", "adaplag", "lcis", "git"] as const;
export type Algorithm = (typeof ALGORITHMS)[number];

export interface OverlayResult {
  matchCount: number;
  response: DetectResponse;
}

export class DetectorPanel {
  active: Algorithm | null = null;
  minLength = 3;

  constructor(
    private readonly api: ApiClient,
    private readonly paneA: DocumentPane,
    private readonly paneB: DocumentPane,
  ) {}

  clear(): void {
    this.active = null;
    for (const pane of [this.paneA, this.paneB]) {
      pane.detectorHighlights = [];
      pane.detectorFormulaIds = new Set();
      pane.refresh();
    }
  }

  async activate(algorithm: Algorithm, minLength: number): Promise<OverlayResult> {
    if (!this.paneA.doc || !this.paneB.doc) {
      throw new Error("both documents must be loaded");
    }
    this.active = algorithm;
    this.minLength = minLength;
    const response = await this.api.detect(
      this.paneA.doc.docId, this.paneB.doc.docId, algorithm, minLength,
    );

    const textA: Highlight[] = [];
    const textB: Highlight[] = [];
    const formulasA = new Set<string>();
    const formulasB = new Set<string>();
    for (const match of response.matches) {
      if (match.type === "text") {
        textA.push({ span: match.span_a, colorIndex: 0, kind: "detector" });
        textB.push({ span: match.span_b, colorIndex: 0, kind: "detector" });
      } else {
        for (const id of matchedFormulaIds(
          match.token_pairs.map((p) => p[0]), this.paneA.identifiers,
        )) {
          formulasA.add(id);
        }
        for (const id of matchedFormulaIds(
          match.token_pairs.map((p) => p[1]), this.paneB.identifiers,
        )) {
          formulasB.add(id);
        }
      }
    }
    this.paneA.detectorHighlights = textA;
    this.paneA.detectorFormulaIds = formulasA;
    this.paneB.detectorHighlights = textB;
    this.paneB.detectorFormulaIds = formulasB;
    this.paneA.refresh();
    this.paneB.refresh();
    return { matchCount: response.matches.length, response };
  }
}
