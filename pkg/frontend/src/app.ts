/** Application state machine: upload pair, record cases, manage overlays. */

import { ApiClient, CaseJson } from "./api.js";
import { renderCaseTable } from "./cases.js";
import { DetectorPanel } from "./detectors.js";
import { caseColor, Highlight } from "./highlights.js";
import { DocumentPane } from "./panes.js";
import type { CapturedSelection } from "./selection.js";

export interface AppElements {
  paneA: HTMLElement;
  paneB: HTMLElement;
  status: HTMLElement;
  caseBrowser: HTMLElement;
}

type Side = "a" | "b";

export class AnnotationApp {
  readonly paneA: DocumentPane;
  readonly paneB: DocumentPane;
  readonly detectors: DetectorPanel;
  recording = false;
  selections: Record<Side, CapturedSelection | null> = { a: null, b: null };

  constructor(readonly api: ApiClient, private readonly elements: AppElements) {
    this.paneA = new DocumentPane(elements.paneA);
    this.paneB = new DocumentPane(elements.paneB);
    this.detectors = new DetectorPanel(api, this.paneA, this.paneB);
  }

  status(message: string): void {
    this.elements.status.textContent = message;
  }

  pane(side: Side): DocumentPane {
    return side === "a" ? this.paneA : this.paneB;
  }

  async loadDocument(side: Side, file: File): Promise<void> {
    const uploaded = await this.api.uploadDocument(file, file.name);
    const [rendered, identifiers] = await Promise.all([
      this.api.rendered(uploaded.doc_id),
      this.api.identifiers(uploaded.doc_id),
    ]);
    this.pane(side).load(rendered, identifiers, file.name);
    const notices: string[] = [`loaded ${file.name} into pane ${side.toUpperCase()}`];
    if (uploaded.already_known) {
      notices.push(
        `document already known; ${uploaded.prior_case_count} prior case(s) reference it`,
      );
    }
    for (const warning of uploaded.warnings) {
      notices.push(`warning [${warning.code}]: ${warning.message}`);
    }
    this.status(notices.join(" — "));
    await this.refreshCaseHighlights();
  }

  get pairLoaded(): boolean {
    return Boolean(this.paneA.doc && this.paneB.doc);
  }

  startRecording(): void {
    if (!this.pairLoaded) {
      this.status("load both documents before recording");
      return;
    }
    this.recording = true;
    this.selections = { a: null, b: null };
    this.paneA.provisional = null;
    this.paneB.provisional = null;
    this.paneA.refresh();
    this.paneB.refresh();
    this.status("recording: select a span in each document");
  }

  handleSelection(
    side: Side,
    selection: { anchorNode: Node | null; anchorOffset: number; toString(): string },
  ): void {
    if (!this.recording) return;
    const pane = this.pane(side);
    const captured = pane.captureCurrentSelection(selection);
    if (!captured) return;
    this.selections[side] = captured;
    pane.provisional = pane.previewSpan(captured);
    pane.refresh();
    this.status(`pane ${side.toUpperCase()}: selected ${captured.text.length} characters`);
  }

  async finishRecording(contentTypes: string[], obfuscation: string | null): Promise<CaseJson | null> {
    if (!this.recording || !this.selections.a || !this.selections.b) {
      this.status("select a span in both documents before finishing");
      return null;
    }
    if (!this.paneA.doc || !this.paneB.doc) return null;
    try {
      const recorded = await this.api.recordCase(this.paneA.doc.docId, this.paneB.doc.docId, {
        selected_text_a: this.selections.a.text,
        hint_a: this.selections.a.hint,
        selected_text_b: this.selections.b.text,
        hint_b: this.selections.b.hint,
        content_types: contentTypes,
        obfuscation,
      });
      this.recording = false;
      this.selections = { a: null, b: null };
      this.paneA.provisional = null;
      this.paneB.provisional = null;
      await this.refreshCaseHighlights();
      this.status(`recorded case #${recorded.case_id}`);
      return recorded;
    } catch (error) {
      this.status(`recording failed: ${(error as Error).message}`);
      return null;
    }
  }

  async deleteLast(): Promise<number | null> {
    if (!this.paneA.doc || !this.paneB.doc) return null;
    const deleted = await this.api.deleteLast(this.paneA.doc.docId, this.paneB.doc.docId);
    await this.refreshCaseHighlights();
    this.status(deleted === null ? "nothing to delete" : `deleted case #${deleted}`);
    return deleted;
  }

  /** Case highlights: one palette color per case, shared by both panes. */
  async refreshCaseHighlights(): Promise<void> {
    if (!this.pairLoaded || !this.paneA.doc || !this.paneB.doc) return;
    const pairCases = await this.api.listCases([
      this.paneA.doc.docId, this.paneB.doc.docId,
    ]);
    const layersA: Highlight[] = [];
    const layersB: Highlight[] = [];
    pairCases.forEach((item, ordinal) => {
      const color = caseColor(ordinal);
      const aFirst = item.doc_a_fingerprint === this.paneA.doc!.fingerprint;
      layersA.push({
        span: aFirst ? item.span_a : item.span_b, colorIndex: color, kind: "case",
      });
      layersB.push({
        span: aFirst ? item.span_b : item.span_a, colorIndex: color, kind: "case",
      });
    });
    this.paneA.caseHighlights = layersA;
    this.paneB.caseHighlights = layersB;
    this.paneA.refresh();
    this.paneB.refresh();
  }

  async refreshCaseBrowser(): Promise<CaseJson[]> {
    const cases = await this.api.listCases();
    renderCaseTable(this.elements.caseBrowser, cases);
    return cases;
  }
}
