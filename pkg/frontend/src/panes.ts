/** One side-by-side document pane: rendering, highlight layers, selection. */

import type { IdentifierToken, RenderedDocument, SpanJson } from "./api.js";
import {
  Highlight,
  placeholderHighlights,
  segmentRun,
} from "./highlights.js";
import { CapturedSelection, captureSelection } from "./selection.js";

export interface LoadedDocument {
  docId: string;
  fingerprint: string;
  displayName: string;
}

function placeholderSpanOf(element: Element, id: string): SpanJson {
  const start = Number(element.getAttribute("data-offset"));
  return { start, end: start + id.length + 2 }; // ⟪ + id + ⟫
}

export class DocumentPane {
  doc: LoadedDocument | null = null;
  identifiers: IdentifierToken[] = [];
  caseHighlights: Highlight[] = [];
  provisional: SpanJson | null = null;
  detectorHighlights: Highlight[] = [];
  detectorFormulaIds: Set<string> = new Set();

  private pristine: HTMLElement | null = null;

  constructor(private readonly root: HTMLElement) {}

  load(rendered: RenderedDocument, identifiers: IdentifierToken[], displayName: string): void {
    this.doc = {
      docId: rendered.doc_id,
      fingerprint: rendered.fingerprint,
      displayName,
    };
    this.identifiers = identifiers;
    this.caseHighlights = [];
    this.detectorHighlights = [];
    this.detectorFormulaIds = new Set();
    this.provisional = null;
    const holder = document.createElement("div");
    holder.innerHTML = rendered.html;
    this.pristine = holder.firstElementChild as HTMLElement;
    this.refresh();
  }

  /** Plain text reconstructed from the rendered runs and placeholders. */
  plainText(): string {
    if (!this.pristine) return "";
    let text = "";
    for (const child of Array.from(this.pristine.children)) {
      if (child.classList.contains("t")) {
        text += child.textContent ?? "";
      } else if (child.classList.contains("formula")) {
        text += `⟪${child.getAttribute("data-formula-id")}⟫`;
      } else if (child.classList.contains("image")) {
        text += `⟪${child.getAttribute("data-image-id")}⟫`;
      }
    }
    return text;
  }

  captureCurrentSelection(
    selection: { anchorNode: Node | null; anchorOffset: number; toString(): string },
  ): CapturedSelection | null {
    return captureSelection(this.root, selection);
  }

  /** Preview resolution for a captured selection: nearest exact occurrence
   * to the hint.  The server stays authoritative at recording time. */
  previewSpan(captured: CapturedSelection): SpanJson | null {
    const text = this.plainText();
    const needle = captured.text;
    const starts: number[] = [];
    for (let at = text.indexOf(needle); at !== -1; at = text.indexOf(needle, at + 1)) {
      starts.push(at);
    }
    if (!starts.length) return null;
    let best = starts[0];
    for (const start of starts) {
      const better =
        Math.abs(start - captured.hint) < Math.abs(best - captured.hint) ||
        (Math.abs(start - captured.hint) === Math.abs(best - captured.hint) && start < best);
      if (better) best = start;
    }
    return { start: best, end: best + needle.length };
  }

  refresh(): void {
    if (!this.pristine) {
      this.root.replaceChildren();
      return;
    }
    const layers = [...this.caseHighlights, ...this.detectorHighlights];
    if (this.provisional) {
      layers.push({ span: this.provisional, colorIndex: -1, kind: "case" });
    }
    const container = this.pristine.cloneNode(true) as HTMLElement;
    for (const child of Array.from(container.children)) {
      if (child.classList.contains("t")) {
        this.decorateRun(child as HTMLElement, layers);
      } else if (child.classList.contains("formula")) {
        const id = child.getAttribute("data-formula-id") ?? "";
        this.decoratePlaceholder(child as HTMLElement, id, layers);
        if (this.detectorFormulaIds.has(id)) child.classList.add("detector-hit");
      } else if (child.classList.contains("image")) {
        const id = child.getAttribute("data-image-id") ?? "";
        this.decoratePlaceholder(child as HTMLElement, id, layers);
      }
    }
    this.root.replaceChildren(container);
  }

  private decorateRun(run: HTMLElement, layers: Highlight[]): void {
    const offset = Number(run.getAttribute("data-offset"));
    const text = run.textContent ?? "";
    const segments = segmentRun(offset, text, layers);
    if (segments.every((s) => s.highlights.length === 0)) return;
    run.replaceChildren(
      ...segments.map((segment) => {
        if (!segment.highlights.length) {
          return document.createTextNode(segment.text);
        }
        const mark = document.createElement("mark");
        mark.textContent = segment.text;
        applyHighlightClasses(mark, segment.highlights);
        return mark;
      }),
    );
  }

  private decoratePlaceholder(element: HTMLElement, id: string, layers: Highlight[]): void {
    const covering = placeholderHighlights(placeholderSpanOf(element, id), layers);
    if (covering.length) applyHighlightClasses(element, covering);
  }
}

function applyHighlightClasses(element: HTMLElement, highlights: Highlight[]): void {
  for (const h of highlights) {
    if (h.kind === "detector") {
      element.classList.add("detector-hl");
    } else if (h.colorIndex < 0) {
      element.classList.add("provisional-hl");
    } else {
      element.classList.add("case-hl", `c${h.colorIndex}`);
    }
  }
}
