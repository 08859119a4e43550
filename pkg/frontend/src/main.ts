/** Browser bootstrap: wires the control surface to the application state. */

import { ApiClient } from "./api.js";
import { AnnotationApp } from "./app.js";
import { downloadCases } from "./cases.js";
import { ALGORITHMS, Algorithm } from "./detectors.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

export function bootstrap(): AnnotationApp {
  const api = new ApiClient("");
  const app = new AnnotationApp(api, {
    paneA: el("pane-a"),
    paneB: el("pane-b"),
    status: el("status"),
    caseBrowser: el("case-browser"),
  });

  const fileA = el<HTMLInputElement>("file-a");
  const fileB = el<HTMLInputElement>("file-b");
  el("load-pair").addEventListener("click", async () => {
    const a = fileA.files?.[0];
    const b = fileB.files?.[0];
    if (!a || !b) {
      app.status("choose both files first");
      return;
    }
    try {
      await app.loadDocument("a", a);
      await app.loadDocument("b", b);
    } catch (error) {
      app.status(`upload failed: ${(error as Error).message}`);
    }
  });

  el("start-recording").addEventListener("click", () => app.startRecording());

  for (const side of ["a", "b"] as const) {
    el(`pane-${side}`).addEventListener("mouseup", () => {
      const selection = window.getSelection();
      if (selection) app.handleSelection(side, selection);
    });
  }

  el("finish-recording").addEventListener("click", async () => {
    const contentTypes = ["text", "image", "math"].filter(
      (kind) => el<HTMLInputElement>(`type-${kind}`).checked,
    );
    const obfuscation = el<HTMLInputElement>("obfuscation").value.trim() || null;
    const recorded = await app.finishRecording(contentTypes, obfuscation);
    if (recorded) await app.refreshCaseBrowser();
  });

  el("delete-last").addEventListener("click", async () => {
    await app.deleteLast();
    await app.refreshCaseBrowser();
  });

  const minLength = el<HTMLInputElement>("min-length");
  for (const algorithm of ALGORITHMS) {
    el(`alg-${algorithm}`).addEventListener("change", async () => {
      try {
        const overlay = await app.detectors.activate(
          algorithm as Algorithm, Number(minLength.value) || 1,
        );
        app.status(
          overlay.matchCount
            ? `${algorithm}: ${overlay.matchCount} match(es)`
            : `${algorithm}: no matches`,
        );
      } catch (error) {
        app.status(`detection failed: ${(error as Error).message}`);
      }
    });
  }
  el("alg-none").addEventListener("change", () => {
    app.detectors.clear();
    app.status("detector overlay cleared");
  });
  minLength.addEventListener("change", () => {
    const active = document.querySelector<HTMLInputElement>(
      "input[name=algorithm]:checked",
    );
    if (active && active.id !== "alg-none") {
      active.dispatchEvent(new Event("change"));
    }
  });

  el("view-cases").addEventListener("click", async () => {
    await app.refreshCaseBrowser();
    el("case-panel").hidden = false;
  });
  el("download-cases").addEventListener("click", async () => {
    await downloadCases(api);
  });

  return app;
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  bootstrap();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", () => bootstrap());
}
