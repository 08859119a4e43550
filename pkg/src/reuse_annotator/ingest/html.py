"""Tolerant HTML ingestion with embedded MathML and image extraction."""

from __future__ import annotations

import base64
import binascii
import unicodedata
from html.parser import HTMLParser

from ..mathml import MathNode, serialize
from .blocks import (
    Document,
    ImageBlock,
    MathBlock,
    ParseWarning,
    TextBlock,
    normalize_newlines,
    strip_reserved,
)
from .latex import ResourceResolver, _guess_media_type

BLOCK_TAGS = {"p", "div", "h1", "h2", "h3", "h4", "h5", "h6", "li", "br", "tr"}
DROP_TAGS = {"script", "style"}

_VOID_TAGS = {"br", "img", "hr", "meta", "link", "input"}


def _decode_data_uri(src: str) -> tuple[bytes, str] | None:
    if not src.startswith("data:"):
        return None
    header, _, payload = src.partition(",")
    if not payload:
        return None
    media_type = header[5:].split(";")[0] or "application/octet-stream"
    if ";base64" in header:
        try:
            return base64.b64decode(payload, validate=False), media_type
        except (binascii.Error, ValueError):
            return None
    return payload.encode("utf-8"), media_type


class _Extractor(HTMLParser):
    def __init__(self, resolver: ResourceResolver | None, warnings: list[ParseWarning]):
        super().__init__(convert_charrefs=True)
        self.resolver = resolver
        self.warnings = warnings
        self.blocks: list = []
        self.buf: list[str] = []
        self.pending_break = False
        self.drop_depth = 0
        self.math_stack: list[MathNode] | None = None

    # -- text assembly -------------------------------------------------------

    def _warn(self, code: str, message: str) -> None:
        offset = self.getpos()[1]
        self.warnings.append(ParseWarning(code=code, message=message, source_offset=offset))

    def _apply_break(self) -> None:
        if not self.pending_break:
            return
        self.pending_break = False
        while self.buf and self.buf[-1] == " ":
            self.buf.pop()
        if self.buf and self.buf[-1] != "\n":
            self.buf.append("\n")

    def _append_text(self, data: str) -> None:
        collapsed = " ".join(data.split())
        leading_ws = data[:1].isspace()
        trailing_ws = data[-1:].isspace() if data else False
        if not collapsed:
            # Whitespace-only data keeps words apart unless a break is pending.
            if not self.pending_break and self.buf and not self.buf[-1][-1:].isspace():
                self.buf.append(" ")
            return
        self._apply_break()
        if leading_ws and self.buf and not self.buf[-1][-1:].isspace():
            self.buf.append(" ")
        self.buf.append(collapsed)
        if trailing_ws:
            self.buf.append(" ")

    def _flush_text(self) -> None:
        if self.buf:
            self.blocks.append(TextBlock("".join(self.buf)))
            self.buf = []

    # -- math subtree assembly ------------------------------------------------

    def _math_open(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        node = MathNode(tag=tag, attrs={k: v or "" for k, v in attrs})
        if self.math_stack:
            self.math_stack[-1].children.append(node)
        self.math_stack.append(node)

    def _math_degrade(self, reason: str) -> None:
        root = self.math_stack[0]
        self.math_stack = None
        self._warn("malformed-mathml", reason)
        self._append_text(_raw_text(root))

    def _math_close(self, tag: str) -> None:
        if self.math_stack[-1].tag != tag:
            self._math_degrade(f"mismatched </{tag}> inside <math>")
            return
        node = self.math_stack.pop()
        if node.tag == "math":
            if self.math_stack:
                self._math_degrade("unclosed elements inside <math>")
                return
            self.math_stack = None
            _clean_tree(node)
            self._apply_break()
            self._flush_text()
            display = node.attrs.get("display", "") == "block"
            self.blocks.append(MathBlock(serialize(node), display=display))

    # -- HTMLParser hooks -------------------------------------------------------

    def handle_starttag(self, tag, attrs):
        if self.math_stack is not None:
            self._math_open(tag, attrs)
            return
        if tag in DROP_TAGS:
            self.drop_depth += 1
            return
        if self.drop_depth:
            return
        if tag == "math":
            self.math_stack = []
            self._math_open(tag, attrs)
            return
        if tag == "img":
            self._handle_img(dict(attrs))
            return
        if tag in BLOCK_TAGS:
            self.pending_break = True

    def handle_startendtag(self, tag, attrs):
        if self.math_stack is not None:
            self._math_open(tag, attrs)
            self.math_stack.pop()
            return
        if self.drop_depth:
            return
        if tag == "img":
            self._handle_img(dict(attrs))
        elif tag in BLOCK_TAGS:
            self.pending_break = True

    def handle_endtag(self, tag):
        if self.math_stack is not None:
            self._math_close(tag)
            return
        if tag in DROP_TAGS:
            self.drop_depth = max(0, self.drop_depth - 1)
            return
        if self.drop_depth:
            return
        if tag in BLOCK_TAGS:
            self.pending_break = True

    def handle_data(self, data):
        if self.math_stack is not None:
            self.math_stack[-1].text += data
            return
        if self.drop_depth:
            return
        data = strip_reserved(data, self.warnings, self.getpos()[1])
        self._append_text(data)

    # -- images ----------------------------------------------------------------

    def _handle_img(self, attrs: dict) -> None:
        src = attrs.get("src") or ""
        resolved = _decode_data_uri(src)
        if resolved is None and self.resolver is not None and src:
            resolved = self.resolver(src)
        if resolved is None:
            self._warn("unresolved-image", f"image {src!r} could not be resolved")
            resolved = b"", _guess_media_type(src)
        self._apply_break()
        self._flush_text()
        self.blocks.append(ImageBlock(*resolved))

    def finish(self) -> list:
        self._flush_text()
        if self.math_stack is not None:
            self._math_degrade("unterminated <math>")
            self._flush_text()
        if not self.blocks:
            self.blocks.append(TextBlock(""))
        return self.blocks


def _raw_text(node: MathNode) -> str:
    parts = [node.text]
    parts.extend(_raw_text(child) for child in node.children)
    return "".join(parts)


def _clean_tree(node: MathNode) -> None:
    node.text = unicodedata.normalize("NFC", " ".join(node.text.split()))
    node.attrs = dict(sorted(node.attrs.items()))
    for child in node.children:
        _clean_tree(child)


def parse_html(source: str, name: str,
               resource_resolver: ResourceResolver | None = None) -> Document:
    warnings: list[ParseWarning] = []
    extractor = _Extractor(resource_resolver, warnings)
    extractor.feed(normalize_newlines(source))
    extractor.close()
    blocks = extractor.finish()
    return Document(
        blocks=blocks,
        display_name=name,
        source_format="html",
        warnings=warnings,
    )
