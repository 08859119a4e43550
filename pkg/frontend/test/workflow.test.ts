/** Headless UI workflow: load a pair, select spans in both panes, record a
 * case, overlay detectors, browse and download cases. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AnnotationApp } from "../src/app.js";
import { downloadCases, parseJsonl } from "../src/cases.js";
import { buildFixtureDoc, FakeServer } from "./fake-server.js";

const SHARED = "Shared opening words appear here and stay identical. ";

const FP_A = "a".repeat(64);
const FP_B = "b".repeat(64);

function makeServer(): FakeServer {
  const server = new FakeServer();
  const docA = buildFixtureDoc("a.tex", FP_A, [
    { kind: "text", content: SHARED },
    { kind: "formula", id: "F1", identifiers: ["E", "m", "c"] },
    { kind: "text", content: "\nTail only in A." },
  ]);
  const docB = buildFixtureDoc("b.tex", FP_B, [
    { kind: "text", content: `Intro only in B. ${SHARED}` },
    { kind: "formula", id: "F1", identifiers: ["E", "m", "c"] },
    { kind: "text", content: "\nEnd of B." },
  ]);
  server.addFixture(docA);
  server.addFixture(docB);
  server.cannedDetect(FP_A, FP_B, "lcs", {
    algorithm: "lcs",
    min_length: 3,
    matches: [
      {
        type: "text",
        span_a: { start: 0, end: SHARED.trimEnd().length },
        span_b: { start: 17, end: 17 + SHARED.trimEnd().length },
        length: 8,
      },
    ],
  });
  server.cannedDetect(FP_A, FP_B, "git", {
    algorithm: "git",
    min_length: 3,
    matches: [
      { type: "math", token_pairs: [[0, 0], [1, 1], [2, 2]], length: 3 },
    ],
  });
  return server;
}

function setupDom(): void {
  document.body.innerHTML = `
    <p id="status"></p>
    <div id="pane-a"></div>
    <div id="pane-b"></div>
    <div id="case-browser"></div>`;
}

function appElements() {
  return {
    paneA: document.getElementById("pane-a")!,
    paneB: document.getElementById("pane-b")!,
    status: document.getElementById("status")!,
    caseBrowser: document.getElementById("case-browser")!,
  };
}

function selectInPane(
  app: AnnotationApp,
  side: "a" | "b",
  runIndex: number,
  offsetInRun: number,
  text: string,
): void {
  const pane = document.getElementById(`pane-${side}`)!;
  const run = pane.querySelectorAll("span.t")[runIndex];
  app.handleSelection(side, {
    anchorNode: run.firstChild,
    anchorOffset: offsetInRun,
    toString: () => text,
  });
}

async function loadPair(server: FakeServer): Promise<AnnotationApp> {
  setupDom();
  const api = new ApiClient("", server.fetch);
  const app = new AnnotationApp(api, appElements());
  await app.loadDocument("a", new File(["ignored"], "a.tex"));
  await app.loadDocument("b", new File(["ignored"], "b.tex"));
  return app;
}

function normalizeWs(text: string): string {
  return text.replace(/\s+/g, " ").trim();
}

describe("annotation workflow", () => {
  let server: FakeServer;

  beforeEach(() => {
    server = makeServer();
  });

  it("loads both panes with rendered content", async () => {
    const app = await loadPair(server);
    expect(document.querySelector("#pane-a .document")).toBeTruthy();
    expect(document.querySelector("#pane-b .document")).toBeTruthy();
    expect(app.pairLoaded).toBe(true);
    expect(app.paneA.plainText()).toContain("⟪F1⟫");
  });

  it("records a case whose stored excerpt equals the selection", async () => {
    const app = await loadPair(server);
    app.startRecording();

    const selected = "opening words appear";
    selectInPane(app, "a", 0, SHARED.indexOf(selected), selected);
    expect(document.querySelector("#pane-a mark.provisional-hl")?.textContent).toBe(selected);

    selectInPane(app, "b", 0, 17 + SHARED.indexOf(selected), selected);
    const recorded = await app.finishRecording(["text"], "verbatim");

    expect(recorded).not.toBeNull();
    expect(normalizeWs(recorded!.text_a)).toBe(normalizeWs(selected));
    expect(normalizeWs(recorded!.text_b)).toBe(normalizeWs(selected));
    expect(recorded!.obfuscation).toBe("verbatim");

    // One shared color in both panes.
    const markA = document.querySelector("#pane-a mark.case-hl");
    const markB = document.querySelector("#pane-b mark.case-hl");
    expect(markA?.classList.contains("c0")).toBe(true);
    expect(markB?.classList.contains("c0")).toBe(true);
    expect(markA?.textContent).toBe(selected);
    expect(markB?.textContent).toBe(selected);
  });

  it("normalizes selection whitespace through the server contract", async () => {
    const app = await loadPair(server);
    app.startRecording();
    // Browsers often include stray whitespace around the visible selection;
    // the server trims it during resolution.
    selectInPane(app, "a", 1, 0, "\nTail only ");
    selectInPane(app, "b", 1, 0, "\nEnd of ");
    const recorded = await app.finishRecording(["text"], null);
    expect(recorded).not.toBeNull();
    expect(recorded!.text_a).toBe("Tail only");
    expect(normalizeWs(recorded!.text_a)).toBe(normalizeWs("\nTail only "));
    expect(recorded!.text_b).toBe("End of");
  });

  it("blocks finishing until both panes hold a selection", async () => {
    const app = await loadPair(server);
    app.startRecording();
    selectInPane(app, "a", 0, 0, "Shared opening");
    const result = await app.finishRecording(["text"], null);
    expect(result).toBeNull();
    expect(document.getElementById("status")!.textContent).toContain("both documents");
  });

  it("text detector overlay count matches the detect response length", async () => {
    const app = await loadPair(server);
    const overlay = await app.detectors.activate("lcs", 3);
    const response = server.detections.get(`${FP_A}|${FP_B}|lcs`)!;
    expect(overlay.matchCount).toBe(response.matches.length);

    const marksA = document.querySelectorAll("#pane-a mark.detector-hl");
    expect(marksA.length).toBe(1);
    expect(marksA[0].textContent).toBe(SHARED.trimEnd());
    const marksB = document.querySelectorAll("#pane-b mark.detector-hl");
    expect(marksB[0].textContent).toBe(SHARED.trimEnd());
  });

  it("math detector highlights the containing formulas in both panes", async () => {
    const app = await loadPair(server);
    await app.detectors.activate("git", 3);
    expect(document.querySelector("#pane-a .formula.detector-hit")).toBeTruthy();
    expect(document.querySelector("#pane-b .formula.detector-hit")).toBeTruthy();
    expect(document.querySelector("#pane-a mark.detector-hl")).toBeNull();
  });

  it("toggling the detector off clears the overlay", async () => {
    const app = await loadPair(server);
    await app.detectors.activate("lcs", 3);
    app.detectors.clear();
    expect(document.querySelector("mark.detector-hl")).toBeNull();
    expect(document.querySelector(".formula.detector-hit")).toBeNull();
  });

  it("delete last removes the most recent case highlight pair", async () => {
    const app = await loadPair(server);
    app.startRecording();
    selectInPane(app, "a", 0, 0, "Shared opening");
    selectInPane(app, "b", 0, 17, "Shared opening");
    await app.finishRecording(["text"], null);
    expect(document.querySelector("#pane-a mark.case-hl")).toBeTruthy();

    const deleted = await app.deleteLast();
    expect(deleted).toBe(1);
    expect(document.querySelector("#pane-a mark.case-hl")).toBeNull();
    expect(document.querySelector("#pane-b mark.case-hl")).toBeNull();
    expect(await app.deleteLast()).toBeNull();
  });

  it("case browser lists cases and the download parses as JSONL", async () => {
    const app = await loadPair(server);
    app.startRecording();
    selectInPane(app, "a", 0, 0, "Shared opening");
    selectInPane(app, "b", 0, 17, "Shared opening");
    await app.finishRecording(["text", "math"], "paraphrase");

    const listed = await app.refreshCaseBrowser();
    expect(listed).toHaveLength(1);
    const rows = document.querySelectorAll("#case-browser tr[data-case-id]");
    expect(rows).toHaveLength(1);

    if (!URL.createObjectURL) {
      URL.createObjectURL = () => "blob:fake";
      URL.revokeObjectURL = () => undefined;
    }
    const payload = await downloadCases(app.api);
    const parsed = parseJsonl(payload);
    expect(parsed).toHaveLength(1);
    expect(parsed[0].case_id).toBe(listed[0].case_id);
    expect(parsed[0].text_a).toBe(listed[0].text_a);
    expect(parsed[0].content_types).toEqual(["text", "math"]);
  });

  it("reports prior annotations when a known document is re-uploaded", async () => {
    const app = await loadPair(server);
    app.startRecording();
    selectInPane(app, "a", 0, 0, "Shared opening");
    selectInPane(app, "b", 0, 17, "Shared opening");
    await app.finishRecording(["text"], null);

    await app.loadDocument("a", new File(["ignored"], "a.tex"));
    expect(document.getElementById("status")!.textContent).toContain("already known");
    expect(document.getElementById("status")!.textContent).toContain("1 prior case");
  });
});
