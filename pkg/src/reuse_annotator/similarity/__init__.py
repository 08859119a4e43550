"""The four annotation-support detectors and their shared dispatch."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from ..errors import InvalidArgumentError
from ..math_tokens import identifier_stream
from .lcis import lcis
from .matches import MathMatch, TextMatch
from .seed_extend import SeedExtendParams, seed_extend_align, split_sentences
from .tiling import git, greedy_tiles, lcs_words
from .words import WordToken, tokenize_words

if TYPE_CHECKING:  # pragma: no cover
    from ..document_model import NormalizedDocument

ALGORITHMS = ("lcs", "adaplag", "lcis", "git")

__all__ = [
    "ALGORITHMS", "DetectionResult", "MathMatch", "SeedExtendParams", "TextMatch",
    "WordToken", "detect", "git", "greedy_tiles", "lcis", "lcs_words",
    "seed_extend_align", "split_sentences", "tokenize_words",
]

Match = Union[TextMatch, MathMatch]


@dataclass
class DetectionResult:
    algorithm: str
    min_length: int
    matches: list[Match]

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "min_length": self.min_length,
            "matches": [m.to_json() for m in self.matches],
        }


def detect(a_doc: "NormalizedDocument", b_doc: "NormalizedDocument",
           algorithm: str, min_length: int,
           seed_params: SeedExtendParams | None = None) -> DetectionResult:
    """Run one detector; min_length counts words (lcs/adaplag) or math
    symbols (lcis/git)."""
    if algorithm not in ALGORITHMS:
        raise InvalidArgumentError(
            f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}"
        )
    if min_length < 1:
        raise InvalidArgumentError("min_length must be >= 1")

    matches: list[Match]
    if algorithm == "lcs":
        matches = lcs_words(
            tokenize_words(a_doc.plain_text), tokenize_words(b_doc.plain_text), min_length
        )
    elif algorithm == "adaplag":
        matches = seed_extend_align(a_doc, b_doc, seed_params, min_length)
    elif algorithm == "lcis":
        matches = lcis(identifier_stream(a_doc), identifier_stream(b_doc), min_length)
    else:
        matches = git(identifier_stream(a_doc), identifier_stream(b_doc), min_length)
    return DetectionResult(algorithm=algorithm, min_length=min_length, matches=matches)
