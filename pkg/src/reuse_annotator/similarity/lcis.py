"""Longest common identifier sequence (subsequence alignment)."""

from __future__ import annotations

from ..math_tokens import TokenStream
from .matches import MathMatch


def _suffix_lcs_table(a: list[str], b: list[str]) -> list[list[int]]:
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row = table[i]
        nxt = table[i + 1]
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                row[j] = nxt[j + 1] + 1
            else:
                row[j] = max(nxt[j], row[j + 1])
    return table


def lcis(a_ids: TokenStream, b_ids: TokenStream, min_symbols: int) -> list[MathMatch]:
    """The single longest common subsequence of identifier values.

    Among all maximum-length alignments, the A-index tuple is chosen
    lexicographically smallest, then the B-index tuple.  Returns [] when the
    alignment is shorter than min_symbols.
    """
    if min_symbols < 1:
        raise ValueError("min_symbols must be >= 1")
    a = a_ids.values()
    b = b_ids.values()
    table = _suffix_lcs_table(a, b)
    total = table[0][0]
    if total < min_symbols:
        return []

    pairs: list[tuple[int, int]] = []
    i = j = 0
    need = total
    while need > 0:
        # Smallest usable A index, then smallest B index that keeps the
        # remaining alignment achievable.
        found = False
        while not found:
            for jj in range(j, len(b)):
                if b[jj] == a[i] and table[i + 1][jj + 1] == need - 1:
                    pairs.append((i, jj))
                    i, j = i + 1, jj + 1
                    need -= 1
                    found = True
                    break
            else:
                i += 1
    return [MathMatch(token_pairs=tuple(pairs), symbol_length=total)]
