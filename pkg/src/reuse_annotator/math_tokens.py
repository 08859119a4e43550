"""Flat math-token streams extracted from presentation MathML.

Tokens are the mi/mo/mn leaves in pre-order; layout elements only contribute
ordering.  The identifier stream (mi leaves across all formulas of a
document) feeds the math similarity detectors, and the token count feeds the
symbol-length thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .mathml import MathNode, parse_mathml

if TYPE_CHECKING:  # pragma: no cover
    from .document_model import NormalizedDocument

_KIND_BY_TAG = {"mi": "identifier", "mo": "operator", "mn": "number"}
_IGNORED_SUBTREES = {"mtext", "mspace", "annotation", "annotation-xml"}


@dataclass(frozen=True)
class MathToken:
    kind: str       # "identifier" | "operator" | "number"
    value: str      # NFC element text, e.g. "x", "=", "2", "sin"
    formula_id: str
    ordinal: int    # 0-based index in the formula's pre-order token sequence


@dataclass
class TokenStream:
    """Tokens of one document, ordered by (formula position, ordinal)."""

    tokens: list[MathToken] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, index: int) -> MathToken:
        return self.tokens[index]

    def values(self) -> list[str]:
        return [t.value for t in self.tokens]


def _walk(node: MathNode, formula_id: str, out: list[MathToken]) -> None:
    if node.tag in _IGNORED_SUBTREES:
        return
    kind = _KIND_BY_TAG.get(node.tag)
    if kind is not None and node.text:
        out.append(MathToken(kind, node.text, formula_id, len(out)))
    for child in node.children:
        _walk(child, formula_id, out)


def tokenize_mathml(mathml: str, formula_id: str) -> list[MathToken]:
    """Pre-order token sequence of one formula."""
    tokens: list[MathToken] = []
    _walk(parse_mathml(mathml), formula_id, tokens)
    return tokens


def identifier_stream(nd: "NormalizedDocument") -> TokenStream:
    """Identifier tokens of all formulas, concatenated in document order.

    Ordinals stay relative to each formula's full token sequence so matched
    tokens remain addressable for highlighting.
    """
    tokens: list[MathToken] = []
    for entry in nd.formulas:
        tokens.extend(
            t for t in tokenize_mathml(entry.mathml, entry.formula_id)
            if t.kind == "identifier"
        )
    return TokenStream(tokens)


def full_stream(nd: "NormalizedDocument") -> TokenStream:
    """Every token of every formula, in document order."""
    tokens: list[MathToken] = []
    for entry in nd.formulas:
        tokens.extend(tokenize_mathml(entry.mathml, entry.formula_id))
    return TokenStream(tokens)


def symbol_count(tokens: list[MathToken]) -> int:
    """Every token of any kind counts as one math symbol."""
    return len(tokens)
