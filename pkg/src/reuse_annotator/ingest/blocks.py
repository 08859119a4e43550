"""Ordered block model produced by the ingest parsers."""

from __future__ import annotations

from dataclasses import dataclass, field

# The placeholder fence characters may never enter ingested text; they are
# reserved for the normalizer.
RESERVED_CHARS = ("⟪", "⟫")


@dataclass
class TextBlock:
    content: str


@dataclass
class MathBlock:
    mathml: str          # canonical presentation MathML
    display: bool = False


@dataclass
class ImageBlock:
    data: bytes
    media_type: str


Block = TextBlock | MathBlock | ImageBlock


@dataclass
class ParseWarning:
    """Structured, non-fatal ingest diagnostic."""

    code: str
    message: str
    source_offset: int | None = None

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "source_offset": self.source_offset}


@dataclass
class Document:
    blocks: list[Block] = field(default_factory=list)
    display_name: str = ""
    source_format: str = "txt"   # "latex" | "html" | "txt"
    warnings: list[ParseWarning] = field(default_factory=list)


def strip_reserved(text: str, warnings: list[ParseWarning], offset: int | None = None) -> str:
    """Drop the placeholder fences from source text, recording one warning."""
    if RESERVED_CHARS[0] in text or RESERVED_CHARS[1] in text:
        warnings.append(
            ParseWarning(
                code="reserved-chars-stripped",
                message="removed reserved placeholder delimiters U+27EA/U+27EB from text",
                source_offset=offset,
            )
        )
        for ch in RESERVED_CHARS:
            text = text.replace(ch, "")
    return text


def normalize_newlines(text: str) -> str:
    return text.replace("\r\n", "\n").replace("\r", "\n")
