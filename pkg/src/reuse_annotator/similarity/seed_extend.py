"""Seed-and-extend fragment alignment over sentence vectors.

Sentence pairs similar under both cosine and Dice seed clusters; clusters
grow into fragment pairs bounded by their extreme sentences, get validated by
whole-fragment cosine and a minimum character length, and survivors are
de-overlapped, best fragment first.  One adaptive retry relaxes the cluster
gap when validation leaves nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from ..document_model import Span
from .matches import TextMatch
from .words import WordToken, tokenize_words

if TYPE_CHECKING:  # pragma: no cover
    from ..document_model import NormalizedDocument

_SENTENCE_DELIMS = ".!?\n"
_MIN_SENTENCE_WORDS = 3


@dataclass(frozen=True)
class SeedExtendParams:
    seed_cosine_min: float = 0.33
    seed_dice_min: float = 0.33
    max_gap_sentences: int = 4
    relaxed_max_gap: int = 24
    min_fragment_chars: int = 150


@dataclass
class _Sentence:
    start: int                 # char range in the plain text
    end: int
    words: list[WordToken]

    @property
    def token_span(self) -> Span | None:
        if not self.words:
            return None
        return Span(self.words[0].span.start, self.words[-1].span.end)


def split_sentences(plain_text: str, words: list[WordToken]) -> list[_Sentence]:
    """Sentence ranges split at .!?\\n followed by whitespace or end of text,
    with sub-3-word sentences merged into the following sentence."""
    ranges: list[tuple[int, int]] = []
    start = 0
    n = len(plain_text)
    for i, ch in enumerate(plain_text):
        if ch in _SENTENCE_DELIMS and (i + 1 == n or plain_text[i + 1].isspace()):
            ranges.append((start, i + 1))
            start = i + 1
    if start < n:
        ranges.append((start, n))

    sentences = [
        _Sentence(s, e, [w for w in words if s <= w.span.start < e]) for s, e in ranges
    ]

    merged: list[_Sentence] = []
    pending: _Sentence | None = None
    for sentence in sentences:
        if pending is not None:
            sentence = _Sentence(
                pending.start, sentence.end, pending.words + sentence.words
            )
            pending = None
        if len(sentence.words) < _MIN_SENTENCE_WORDS:
            pending = sentence
        else:
            merged.append(sentence)
    if pending is not None:
        merged.append(pending)
    return merged


def _weights(all_sentences: list[_Sentence]) -> dict[str, float]:
    """Inverse sentence frequency over the union of both documents."""
    total = len(all_sentences)
    frequency: dict[str, int] = {}
    for sentence in all_sentences:
        for term in {w.folded for w in sentence.words}:
            frequency[term] = frequency.get(term, 0) + 1
    return {
        term: 1.0 + math.log(total / df) for term, df in frequency.items()
    }


def _vector(words: list[WordToken], weights: dict[str, float]) -> dict[str, float]:
    counts: dict[str, int] = {}
    for w in words:
        counts[w.folded] = counts.get(w.folded, 0) + 1
    return {term: count * weights[term] for term, count in counts.items()}


def _cosine(u: dict[str, float], v: dict[str, float]) -> float:
    if not u or not v:
        return 0.0
    if len(v) < len(u):
        u, v = v, u
    dot = sum(value * v[term] for term, value in u.items() if term in v)
    if dot == 0.0:
        return 0.0
    norm_u = math.sqrt(sum(value * value for value in u.values()))
    norm_v = math.sqrt(sum(value * value for value in v.values()))
    return dot / (norm_u * norm_v)


def _dice(u: set[str], v: set[str]) -> float:
    if not u and not v:
        return 0.0
    return 2.0 * len(u & v) / (len(u) + len(v))


@dataclass
class _Fragment:
    a_span: Span
    b_span: Span
    cosine: float
    words_a: int
    words_b: int


def _cluster(seeds: list[tuple[int, int]], gap: int) -> list[list[tuple[int, int]]]:
    """Connected components under |Δi| <= gap and |Δj| <= gap adjacency."""
    parent = list(range(len(seeds)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in range(len(seeds)):
        for y in range(x + 1, len(seeds)):
            if (
                abs(seeds[x][0] - seeds[y][0]) <= gap
                and abs(seeds[x][1] - seeds[y][1]) <= gap
            ):
                parent[find(x)] = find(y)
    clusters: dict[int, list[tuple[int, int]]] = {}
    for x, seed in enumerate(seeds):
        clusters.setdefault(find(x), []).append(seed)
    return [clusters[root] for root in sorted(clusters, key=lambda r: min(clusters[r]))]


def seed_extend_align(a_doc: "NormalizedDocument", b_doc: "NormalizedDocument",
                      params: SeedExtendParams | None = None,
                      min_words: int = 1) -> list[TextMatch]:
    params = params or SeedExtendParams()

    words_a = tokenize_words(a_doc.plain_text)
    words_b = tokenize_words(b_doc.plain_text)
    sents_a = split_sentences(a_doc.plain_text, words_a)
    sents_b = split_sentences(b_doc.plain_text, words_b)
    if not sents_a or not sents_b:
        return []

    weights = _weights(sents_a + sents_b)
    vecs_a = [_vector(s.words, weights) for s in sents_a]
    vecs_b = [_vector(s.words, weights) for s in sents_b]
    sets_a = [{w.folded for w in s.words} for s in sents_a]
    sets_b = [{w.folded for w in s.words} for s in sents_b]

    seeds = [
        (i, j)
        for i in range(len(sents_a))
        for j in range(len(sents_b))
        if _cosine(vecs_a[i], vecs_b[j]) >= params.seed_cosine_min
        and _dice(sets_a[i], sets_b[j]) >= params.seed_dice_min
    ]
    if not seeds:
        return []

    def build_fragments(gap: int) -> list[_Fragment]:
        fragments = []
        for cluster in _cluster(seeds, gap):
            a_lo = min(i for i, _ in cluster)
            a_hi = max(i for i, _ in cluster)
            b_lo = min(j for _, j in cluster)
            b_hi = max(j for _, j in cluster)
            frag_words_a = [w for s in sents_a[a_lo:a_hi + 1] for w in s.words]
            frag_words_b = [w for s in sents_b[b_lo:b_hi + 1] for w in s.words]
            if not frag_words_a or not frag_words_b:
                continue
            a_span = Span(frag_words_a[0].span.start, frag_words_a[-1].span.end)
            b_span = Span(frag_words_b[0].span.start, frag_words_b[-1].span.end)
            cos = _cosine(_vector(frag_words_a, weights), _vector(frag_words_b, weights))
            if cos < params.seed_cosine_min:
                continue
            if len(a_span) < params.min_fragment_chars or len(b_span) < params.min_fragment_chars:
                continue
            fragments.append(
                _Fragment(a_span, b_span, cos, len(frag_words_a), len(frag_words_b))
            )
        return fragments

    fragments = build_fragments(params.max_gap_sentences)
    if not fragments:
        fragments = build_fragments(params.relaxed_max_gap)

    # Overlap resolution: best cosine, then longer, then earlier in A.
    fragments.sort(
        key=lambda f: (
            -f.cosine,
            -(len(f.a_span) + len(f.b_span)),
            f.a_span.start,
            f.b_span.start,
        )
    )
    kept: list[_Fragment] = []
    for fragment in fragments:
        if any(
            _overlaps(fragment.a_span, other.a_span) or _overlaps(fragment.b_span, other.b_span)
            for other in kept
        ):
            continue
        kept.append(fragment)

    matches = [
        TextMatch(f.a_span, f.b_span, min(f.words_a, f.words_b))
        for f in kept
        if min(f.words_a, f.words_b) >= min_words
    ]
    matches.sort(key=lambda m: (m.span_a.start, m.span_b.start))
    return matches


def _overlaps(x: Span, y: Span) -> bool:
    return x.start < y.end and y.start < x.end
