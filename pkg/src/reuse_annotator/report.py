"""Offline pair reports: detector matches as JSON Lines plus match-map figures.

The report path runs detectors on one document pair and writes, per
algorithm, the serialized matches into ``matches.jsonl`` and a figure showing
where the matched regions sit in either document.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle

from .document_model import NormalizedDocument
from .math_tokens import identifier_stream
from .similarity import DetectionResult, MathMatch, TextMatch, detect

_PALETTE = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860")


def run_report(a_doc: NormalizedDocument, b_doc: NormalizedDocument,
               algorithms: list[str], min_length: int, out_dir: str | Path) -> dict:
    """Run the detectors and write matches.jsonl plus one figure per algorithm.

    Returns a summary {algorithm: match count, ...} plus the written paths.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results: list[DetectionResult] = [
        detect(a_doc, b_doc, algorithm, min_length) for algorithm in algorithms
    ]

    jsonl_path = out / "matches.jsonl"
    with jsonl_path.open("w", encoding="utf-8") as handle:
        for result in results:
            for match in result.matches:
                line = {"algorithm": result.algorithm, "min_length": result.min_length}
                line.update(match.to_json())
                handle.write(json.dumps(line, ensure_ascii=False) + "\n")

    figures = []
    for result in results:
        fig_path = out / f"match_map_{result.algorithm}.png"
        _draw_match_map(a_doc, b_doc, result, fig_path)
        figures.append(str(fig_path))

    return {
        "matches_jsonl": str(jsonl_path),
        "figures": figures,
        "counts": {r.algorithm: len(r.matches) for r in results},
    }


def _draw_match_map(a_doc: NormalizedDocument, b_doc: NormalizedDocument,
                    result: DetectionResult, path: Path) -> None:
    if result.algorithm in ("lcs", "adaplag"):
        len_a, len_b = len(a_doc.plain_text), len(b_doc.plain_text)
        unit = "characters"
    else:
        len_a = len(identifier_stream(a_doc))
        len_b = len(identifier_stream(b_doc))
        unit = "identifier tokens"
    len_a, len_b = max(len_a, 1), max(len_b, 1)

    fig, ax = plt.subplots(figsize=(9, 3.2))
    ax.add_patch(Rectangle((0, 1.3), 1.0, 0.3, facecolor="#e8e8e8", edgecolor="#888"))
    ax.add_patch(Rectangle((0, 0.4), 1.0, 0.3, facecolor="#e8e8e8", edgecolor="#888"))

    for idx, match in enumerate(result.matches):
        color = _PALETTE[idx % len(_PALETTE)]
        if isinstance(match, TextMatch):
            a0, a1 = match.span_a.start / len_a, match.span_a.end / len_a
            b0, b1 = match.span_b.start / len_b, match.span_b.end / len_b
        elif isinstance(match, MathMatch):
            ar, br = match.a_range, match.b_range
            a0, a1 = ar[0] / len_a, ar[1] / len_a
            b0, b1 = br[0] / len_b, br[1] / len_b
        else:  # pragma: no cover
            continue
        ax.add_patch(Rectangle((a0, 1.3), a1 - a0, 0.3, facecolor=color, alpha=0.85))
        ax.add_patch(Rectangle((b0, 0.4), b1 - b0, 0.3, facecolor=color, alpha=0.85))
        ax.plot([(a0 + a1) / 2, (b0 + b1) / 2], [1.3, 0.7], color=color, linewidth=1)

    ax.text(-0.01, 1.45, a_doc.display_name or "A", ha="right", va="center", fontsize=9)
    ax.text(-0.01, 0.55, b_doc.display_name or "B", ha="right", va="center", fontsize=9)
    ax.set_xlim(-0.25, 1.02)
    ax.set_ylim(0.2, 1.8)
    ax.set_axis_off()
    ax.set_title(
        f"{result.algorithm} (min length {result.min_length}): "
        f"{len(result.matches)} match(es), positions in {unit}",
        fontsize=10,
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
