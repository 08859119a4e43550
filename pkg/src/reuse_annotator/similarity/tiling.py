"""Greedy non-overlapping cover of common contiguous subsequences.

One core drives both text LCS (word tokens, case-folded keys) and greedy
identifier tiling (math identifier values): repeatedly take the longest
common run among still-unmarked positions, ties to the smallest A start,
then the smallest B start, until the best run falls below the threshold.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

from ..math_tokens import TokenStream
from .matches import MathMatch, TextMatch
from .words import WordToken


def greedy_tiles(a: Sequence[str], b: Sequence[str], min_len: int) -> list[tuple[int, int, int]]:
    """Tiles as (a_start, b_start, length), in selection order (longest first)."""
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    marked_a = [False] * len(a)
    marked_b = [False] * len(b)
    positions_b: dict[str, list[int]] = defaultdict(list)
    for j, key in enumerate(b):
        positions_b[key].append(j)

    tiles: list[tuple[int, int, int]] = []
    while True:
        best_len = 0
        best: tuple[int, int] | None = None
        for i in range(len(a)):
            if marked_a[i]:
                continue
            for j in positions_b.get(a[i], ()):
                if marked_b[j]:
                    continue
                if (
                    i > 0 and j > 0
                    and not marked_a[i - 1] and not marked_b[j - 1]
                    and a[i - 1] == b[j - 1]
                ):
                    continue  # interior of a longer run; its start scores higher
                k = 0
                while (
                    i + k < len(a) and j + k < len(b)
                    and not marked_a[i + k] and not marked_b[j + k]
                    and a[i + k] == b[j + k]
                ):
                    k += 1
                # Scan order (i asc, j asc) makes "strictly longer" the
                # tie-break: the first run of maximal length wins.
                if k > best_len:
                    best_len = k
                    best = (i, j)
        if best is None or best_len < min_len:
            break
        i, j = best
        for t in range(best_len):
            marked_a[i + t] = True
            marked_b[j + t] = True
        tiles.append((i, j, best_len))
    return tiles


def lcs_words(a: list[WordToken], b: list[WordToken], min_words: int) -> list[TextMatch]:
    """Greedy cover of common word runs (folded keys), sorted by A position."""
    tiles = greedy_tiles([t.folded for t in a], [t.folded for t in b], min_words)
    matches = [
        TextMatch(
            span_a=_char_span(a, i, length),
            span_b=_char_span(b, j, length),
            word_length=length,
        )
        for i, j, length in tiles
    ]
    matches.sort(key=lambda m: (m.span_a.start, m.span_b.start))
    return matches


def _char_span(tokens: list[WordToken], start: int, length: int):
    from ..document_model import Span

    return Span(tokens[start].span.start, tokens[start + length - 1].span.end)


def git(a_ids: TokenStream, b_ids: TokenStream, min_symbols: int) -> list[MathMatch]:
    """Greedy identifier tiling, sorted by first A-token index."""
    tiles = greedy_tiles(a_ids.values(), b_ids.values(), min_symbols)
    matches = [
        MathMatch(
            token_pairs=tuple((i + t, j + t) for t in range(length)),
            symbol_length=length,
        )
        for i, j, length in tiles
    ]
    matches.sort(key=lambda m: m.token_pairs[0])
    return matches
