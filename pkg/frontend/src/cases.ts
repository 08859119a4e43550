/** Case browser: table of recorded cases plus JSONL download. */

import type { ApiClient, CaseJson } from "./api.js";

function preview(text: string, limit = 60): string {
  return text.length > limit ? `${text.slice(0, limit)}…` : text;
}

export function renderCaseTable(target: HTMLElement, cases: CaseJson[]): void {
  target.replaceChildren();
  if (!cases.length) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No cases recorded yet.";
    target.append(empty);
    return;
  }
  const table = document.createElement("table");
  table.className = "case-table";
  const head = document.createElement("tr");
  for (const column of ["#", "excerpt A", "excerpt B", "types", "obfuscation", "recorded"]) {
    const th = document.createElement("th");
    th.textContent = column;
    head.append(th);
  }
  table.append(head);
  for (const item of cases) {
    const row = document.createElement("tr");
    row.dataset.caseId = String(item.case_id);
    const cells = [
      String(item.case_id),
      preview(item.text_a),
      preview(item.text_b),
      item.content_types.join(", "),
      item.obfuscation ?? "",
      item.created_at,
    ];
    for (const value of cells) {
      const td = document.createElement("td");
      td.textContent = value;
      row.append(td);
    }
    table.append(row);
  }
  target.append(table);
}

export async function downloadCases(api: ApiClient): Promise<string> {
  const payload = await api.exportJsonl();
  const blob = new Blob([payload], { type: "application/x-ndjson" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = "cases.jsonl";
  document.body.append(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
  return payload;
}

export function parseJsonl(payload: string): CaseJson[] {
  return payload
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line) as CaseJson);
}
