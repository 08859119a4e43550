/** Reading the user's text selection out of a rendered pane.
 *
 * The browser owns the selection; the server owns offset resolution.  The
 * pane only ships the selected text plus a hint: the plain-text offset of
 * the selection's anchor, derived from the nearest enclosing element with a
 * data-offset attribute.
 */

export interface CapturedSelection {
  text: string;
  hint: number;
}

function offsetBase(node: Node | null): number | null {
  let current: Node | null = node;
  while (current) {
    if (current instanceof Element && current.hasAttribute("data-offset")) {
      return Number(current.getAttribute("data-offset"));
    }
    current = current.parentNode;
  }
  return null;
}

/** Offset of `node` (a text node) within its enclosing data-offset run,
 * counting the text of preceding sibling nodes inside the same run. */
function offsetWithinRun(node: Node): number {
  let count = 0;
  let current: Node | null = node.previousSibling;
  while (current) {
    count += current.textContent?.length ?? 0;
    current = current.previousSibling;
  }
  return count;
}

export function captureSelection(
  paneRoot: Element,
  selection: { anchorNode: Node | null; anchorOffset: number; toString(): string },
): CapturedSelection | null {
  const text = selection.toString();
  if (!text.trim()) return null;
  const anchor = selection.anchorNode;
  if (!anchor || !paneRoot.contains(anchor)) return null;
  const base = offsetBase(anchor);
  if (base === null) return null;
  const within = anchor.nodeType === Node.TEXT_NODE ? offsetWithinRun(anchor) : 0;
  return { text, hint: base + within + selection.anchorOffset };
}
