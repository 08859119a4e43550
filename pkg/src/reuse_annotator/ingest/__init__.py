"""Parsers turning uploaded bytes into the ordered block Document model."""

from __future__ import annotations

from .blocks import (
    Block,
    Document,
    ImageBlock,
    MathBlock,
    ParseWarning,
    TextBlock,
)
from .external import external_converter_adapter
from .html import parse_html
from .latex import ResourceResolver, latex_math_to_mathml, parse_latex
from .plaintext import decode_utf8_lossy, parse_plaintext

__all__ = [
    "Block", "Document", "ImageBlock", "MathBlock", "ParseWarning", "TextBlock",
    "ResourceResolver", "detect_format", "is_pdf", "parse_bytes",
    "parse_html", "parse_latex", "parse_plaintext", "latex_math_to_mathml",
    "external_converter_adapter", "decode_utf8_lossy",
]


def detect_format(data: bytes, filename: str) -> str:
    """Classify an upload as latex, html, or txt. The extension wins."""
    lower = filename.lower()
    if lower.endswith(".tex"):
        return "latex"
    if lower.endswith((".html", ".htm")):
        return "html"
    if lower.endswith(".txt"):
        return "txt"
    head, _ = decode_utf8_lossy(data[:4096])
    stripped = head.lstrip()
    if stripped[:9].lower().startswith("<!doctype") or stripped[:5].lower().startswith("<html"):
        return "html"
    if "\\documentclass" in head or "\\begin{document}" in head:
        return "latex"
    return "txt"


def is_pdf(data: bytes, filename: str) -> bool:
    return filename.lower().endswith(".pdf") or data[:5] == b"%PDF-"


def parse_bytes(data: bytes, filename: str,
                resource_resolver: ResourceResolver | None = None,
                converter_command: str | None = None) -> Document:
    """Dispatch an upload to the right parser (PDF goes through the adapter)."""
    if is_pdf(data, filename):
        return external_converter_adapter(
            data, converter_command, filename, resource_resolver
        )
    fmt = detect_format(data, filename)
    if fmt == "latex":
        text, _ = decode_utf8_lossy(data)
        return parse_latex(text, filename, resource_resolver)
    if fmt == "html":
        text, _ = decode_utf8_lossy(data)
        return parse_html(text, filename, resource_resolver)
    return parse_plaintext(data, filename)
