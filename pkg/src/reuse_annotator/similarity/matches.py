"""Match types shared by the detectors."""

from __future__ import annotations

from dataclasses import dataclass

from ..document_model import Span


@dataclass(frozen=True)
class TextMatch:
    span_a: Span
    span_b: Span
    word_length: int

    def to_json(self) -> dict:
        return {
            "type": "text",
            "span_a": self.span_a.to_json(),
            "span_b": self.span_b.to_json(),
            "length": self.word_length,
        }


@dataclass(frozen=True)
class MathMatch:
    """Aligned identifier tokens between two identifier streams.

    Tiles (GIT) are contiguous equal-length ranges; LCIS alignments are
    strictly increasing index pairs that need not be contiguous.  Indices
    point into each document's identifier stream.
    """

    token_pairs: tuple[tuple[int, int], ...]
    symbol_length: int

    @property
    def a_range(self) -> tuple[int, int]:
        """Covering [first, last+1) range of A-side indices."""
        return self.token_pairs[0][0], self.token_pairs[-1][0] + 1

    @property
    def b_range(self) -> tuple[int, int]:
        return self.token_pairs[0][1], self.token_pairs[-1][1] + 1

    @property
    def contiguous(self) -> bool:
        a0, b0 = self.token_pairs[0]
        return all(
            (a, b) == (a0 + k, b0 + k) for k, (a, b) in enumerate(self.token_pairs)
        )

    def to_json(self) -> dict:
        return {
            "type": "math",
            "token_pairs": [[a, b] for a, b in self.token_pairs],
            "length": self.symbol_length,
        }
