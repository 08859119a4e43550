"""Offset-stable normalized document model.

A normalized document is a plain-text string in which every formula and image
has been replaced by a fenced placeholder (``⟪F1⟫``, ``⟪I2⟫``) that starts
exactly where the content started, plus ordered tables describing the replaced
formulas and images.  All annotation offsets refer to this plain text and
count Unicode scalar values.
"""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass, field

from .errors import InvalidIdError, InvalidSpanError, SpanNotFoundError
from .ingest.blocks import Document, ImageBlock, MathBlock, TextBlock
from .math_tokens import tokenize_mathml

PLACEHOLDER_OPEN = "⟪"   # ⟪
PLACEHOLDER_CLOSE = "⟫"  # ⟫

_ID_RE = re.compile(r"^[FI]\d+$")
_PLACEHOLDER_RE = re.compile(r"⟪([FI]\d+)⟫")


@dataclass(frozen=True)
class Span:
    """Half-open character interval ``[start, end)`` into a plain text."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise InvalidSpanError(f"bad span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end}

    @classmethod
    def from_json(cls, obj: dict) -> "Span":
        return cls(int(obj["start"]), int(obj["end"]))


@dataclass
class FormulaEntry:
    formula_id: str          # "F" + 1-based position in document order
    mathml: str              # canonical presentation MathML
    placeholder_span: Span   # where the placeholder sits in the plain text
    symbol_count: int        # number of math tokens (mi/mo/mn leaves)


@dataclass
class ImageEntry:
    image_id: str            # "I" + 1-based position in document order
    content_hash: str        # sha256 hex of the image bytes
    media_type: str
    placeholder_span: Span


@dataclass
class NormalizedDocument:
    doc_id: str
    display_name: str
    source_format: str       # "latex" | "html" | "txt"
    plain_text: str          # NFC, "\n" line endings
    formulas: list[FormulaEntry] = field(default_factory=list)
    images: list[ImageEntry] = field(default_factory=list)
    fingerprint: str = ""
    # Raw bytes per image id, kept for storage and rendering.  Not part of
    # the canonical serialization; the fingerprint covers content hashes.
    image_data: dict[str, bytes] = field(default_factory=dict)

    def formula(self, formula_id: str) -> FormulaEntry:
        for entry in self.formulas:
            if entry.formula_id == formula_id:
                return entry
        raise KeyError(formula_id)

    def to_json(self) -> dict:
        """Canonical JSON object shared by the store and the service."""
        return {
            "doc_id": self.doc_id,
            "display_name": self.display_name,
            "source_format": self.source_format,
            "plain_text": self.plain_text,
            "formulas": [
                {
                    "formula_id": f.formula_id,
                    "mathml": f.mathml,
                    "placeholder_span": f.placeholder_span.to_json(),
                    "symbol_count": f.symbol_count,
                }
                for f in self.formulas
            ],
            "images": [
                {
                    "image_id": i.image_id,
                    "content_hash": i.content_hash,
                    "media_type": i.media_type,
                    "placeholder_span": i.placeholder_span.to_json(),
                }
                for i in self.images
            ],
            "fingerprint": self.fingerprint,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NormalizedDocument":
        return cls(
            doc_id=obj["doc_id"],
            display_name=obj["display_name"],
            source_format=obj["source_format"],
            plain_text=obj["plain_text"],
            formulas=[
                FormulaEntry(
                    formula_id=f["formula_id"],
                    mathml=f["mathml"],
                    placeholder_span=Span.from_json(f["placeholder_span"]),
                    symbol_count=int(f["symbol_count"]),
                )
                for f in obj["formulas"]
            ],
            images=[
                ImageEntry(
                    image_id=i["image_id"],
                    content_hash=i["content_hash"],
                    media_type=i["media_type"],
                    placeholder_span=Span.from_json(i["placeholder_span"]),
                )
                for i in obj["images"]
            ],
            fingerprint=obj["fingerprint"],
        )


@dataclass
class CaseContent:
    """Everything a recorded span carries: its text slice and contained ids."""

    excerpt: str
    formula_ids: list[str]
    image_ids: list[str]


def render_placeholder(entry_id: str) -> str:
    """Return the fenced placeholder for a formula/image id, e.g. ``⟪F1⟫``."""
    if not _ID_RE.match(entry_id):
        raise InvalidIdError(f"not a formula/image id: {entry_id!r}")
    return f"{PLACEHOLDER_OPEN}{entry_id}{PLACEHOLDER_CLOSE}"


def compute_fingerprint(plain_text: str, formula_mathml: list[str], image_hashes: list[str]) -> str:
    """Deterministic content hash of a normalized document.

    Layout (before hashing, all UTF-8): the plain text, the U+0000-joined
    MathML list, and the U+0000-joined image-hash list, themselves joined
    with U+0000.  Byte-exact so identical content always collides.
    """
    payload = "\u0000".join(
        [plain_text, "\u0000".join(formula_mathml), "\u0000".join(image_hashes)]
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def canonical_document_json(nd: NormalizedDocument) -> str:
    return json.dumps(nd.to_json(), ensure_ascii=False, separators=(",", ":"))


def normalize(document: Document, display_name: str | None = None) -> NormalizedDocument:
    """Flatten an ingested block sequence into a normalized document.

    Block boundaries insert "\\n" unless the accumulated text already ends in
    whitespace; a text block following an inserted separator sheds its leading
    whitespace (the newline replaces the inter-block gap).  Formula and image
    placeholders begin exactly where the replaced content would begin.
    """
    pieces: list[str] = []
    length = 0
    formulas: list[FormulaEntry] = []
    images: list[ImageEntry] = []
    image_data: dict[str, bytes] = {}

    def boundary() -> bool:
        """Insert the separator if needed; True if one was inserted."""
        nonlocal length
        if length == 0:
            return False
        if pieces[-1][-1:].isspace():
            return False
        pieces.append("\n")
        length += 1
        return True

    for block in document.blocks:
        if isinstance(block, TextBlock):
            content = unicodedata.normalize("NFC", block.content)
            if not content:
                continue
            if boundary():
                content = content.lstrip()
                if not content:
                    continue
            pieces.append(content)
            length += len(content)
        elif isinstance(block, MathBlock):
            boundary()
            formula_id = f"F{len(formulas) + 1}"
            placeholder = render_placeholder(formula_id)
            span = Span(length, length + len(placeholder))
            pieces.append(placeholder)
            length += len(placeholder)
            formulas.append(
                FormulaEntry(
                    formula_id=formula_id,
                    mathml=block.mathml,
                    placeholder_span=span,
                    symbol_count=len(tokenize_mathml(block.mathml, formula_id)),
                )
            )
        elif isinstance(block, ImageBlock):
            boundary()
            image_id = f"I{len(images) + 1}"
            placeholder = render_placeholder(image_id)
            span = Span(length, length + len(placeholder))
            pieces.append(placeholder)
            length += len(placeholder)
            content_hash = hashlib.sha256(block.data).hexdigest()
            images.append(
                ImageEntry(
                    image_id=image_id,
                    content_hash=content_hash,
                    media_type=block.media_type,
                    placeholder_span=span,
                )
            )
            image_data[image_id] = block.data
        else:  # pragma: no cover - the block union is closed
            raise TypeError(f"unknown block type {type(block)!r}")

    plain_text = "".join(pieces)
    fingerprint = compute_fingerprint(
        plain_text, [f.mathml for f in formulas], [i.content_hash for i in images]
    )
    return NormalizedDocument(
        doc_id=fingerprint,
        display_name=display_name or document.display_name,
        source_format=document.source_format,
        plain_text=plain_text,
        formulas=formulas,
        images=images,
        fingerprint=fingerprint,
        image_data=image_data,
    )


def scan_placeholders(plain_text: str) -> list[tuple[str, Span]]:
    """All placeholder occurrences in a plain text, in document order."""
    return [
        (m.group(1), Span(m.start(), m.end())) for m in _PLACEHOLDER_RE.finditer(plain_text)
    ]


# ---------------------------------------------------------------------------
# Whitespace-normalized span resolution
# ---------------------------------------------------------------------------

def _fold_whitespace(text: str) -> tuple[str, list[int], list[int]]:
    """Collapse whitespace runs to single spaces.

    Returns the folded text plus, per folded character, the start and end
    offsets of the original characters it stands for (a folded space covers
    its whole original run).
    """
    folded: list[str] = []
    starts: list[int] = []
    ends: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            j = i
            while j < n and text[j].isspace():
                j += 1
            folded.append(" ")
            starts.append(i)
            ends.append(j)
            i = j
        else:
            folded.append(ch)
            starts.append(i)
            ends.append(i + 1)
            i += 1
    return "".join(folded), starts, ends


def resolve_span(nd: NormalizedDocument, selected_text: str, hint_offset: int | None = None) -> Span:
    """Locate selected text in the plain text under whitespace-normalized matching.

    Among multiple occurrences the one whose start is nearest ``hint_offset``
    wins (ties to the smaller start); without a hint, the first occurrence.
    """
    needle, _, _ = _fold_whitespace(selected_text)
    needle = needle.strip()
    if not needle:
        raise InvalidSpanError("selected text is empty after whitespace normalization")

    cache = getattr(nd, "_ws_fold", None)
    if cache is None:
        cache = _fold_whitespace(nd.plain_text)
        nd._ws_fold = cache  # lazy; the document is immutable after construction
    haystack, starts, ends = cache

    occurrences: list[Span] = []
    pos = haystack.find(needle)
    while pos != -1:
        occurrences.append(Span(starts[pos], ends[pos + len(needle) - 1]))
        pos = haystack.find(needle, pos + 1)

    if not occurrences:
        offset, prefix_len = _closest_prefix(haystack, starts, needle)
        raise SpanNotFoundError(
            f"selection not found (closest candidate at offset {offset}, "
            f"{prefix_len} matching characters)",
            closest_offset=offset,
            closest_prefix_len=prefix_len,
        )
    if hint_offset is None:
        return occurrences[0]
    return min(occurrences, key=lambda s: (abs(s.start - hint_offset), s.start))


def _closest_prefix(haystack: str, starts: list[int], needle: str) -> tuple[int, int]:
    """Offset of the haystack position sharing the longest prefix with needle."""
    best_pos, best_len = 0, 0
    for i in range(len(haystack)):
        k = 0
        limit = min(len(needle), len(haystack) - i)
        while k < limit and haystack[i + k] == needle[k]:
            k += 1
        if k > best_len:
            best_pos, best_len = i, k
    return (starts[best_pos] if starts else 0), best_len


def slice_content(nd: NormalizedDocument, span: Span) -> CaseContent:
    """Slice the plain text and collect the ids fully contained in the span.

    Formulas/images that only partially overlap the span are excluded.
    """
    if span.end > len(nd.plain_text):
        raise InvalidSpanError(
            f"span [{span.start}, {span.end}) exceeds text length {len(nd.plain_text)}"
        )
    return CaseContent(
        excerpt=nd.plain_text[span.start:span.end],
        formula_ids=[f.formula_id for f in nd.formulas if span.contains(f.placeholder_span)],
        image_ids=[i.image_id for i in nd.images if span.contains(i.placeholder_span)],
    )
