"""Word tokenization over normalized plain text."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from ..document_model import PLACEHOLDER_CLOSE, PLACEHOLDER_OPEN, Span


@dataclass(frozen=True)
class WordToken:
    surface: str
    folded: str   # case-folded comparison key
    span: Span    # position in the owning plain text


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize_words(plain_text: str) -> list[WordToken]:
    """Whitespace-split tokens with edge punctuation stripped.

    Formula/image placeholders never yield word tokens; spans reference the
    original text and exclude the stripped punctuation.
    """
    tokens: list[WordToken] = []
    i = 0
    n = len(plain_text)
    while i < n:
        if plain_text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not plain_text[j].isspace():
            j += 1
        raw = plain_text[i:j]
        if PLACEHOLDER_OPEN not in raw and PLACEHOLDER_CLOSE not in raw:
            start, end = i, j
            while start < end and _is_punct(plain_text[start]):
                start += 1
            while end > start and _is_punct(plain_text[end - 1]):
                end -= 1
            if end > start:
                surface = plain_text[start:end]
                tokens.append(WordToken(surface, surface.casefold(), Span(start, end)))
        i = j
    return tokens
