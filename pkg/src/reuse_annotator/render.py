"""Offset-annotated HTML rendering of normalized documents.

Every text run carries its plain-text start offset in a data attribute;
formulas render as their MathML wrapped in an element carrying the formula
id, images as data URIs carrying the image id.  Concatenating the runs and
substituting placeholders reproduces the plain text exactly.
"""

from __future__ import annotations

import base64
import html as html_escape
from dataclasses import dataclass

from .document_model import NormalizedDocument, Span


@dataclass
class RenderedDocument:
    doc_id: str
    fingerprint: str
    html: str

    def to_json(self) -> dict:
        return {"doc_id": self.doc_id, "fingerprint": self.fingerprint, "html": self.html}


def render_document(nd: NormalizedDocument) -> RenderedDocument:
    entries: list[tuple[Span, str]] = []
    for formula in nd.formulas:
        entries.append(
            (
                formula.placeholder_span,
                f'<span class="formula" data-formula-id="{formula.formula_id}" '
                f'data-offset="{formula.placeholder_span.start}">{formula.mathml}</span>',
            )
        )
    for image in nd.images:
        data = nd.image_data.get(image.image_id, b"")
        uri = f"data:{image.media_type};base64,{base64.b64encode(data).decode('ascii')}"
        entries.append(
            (
                image.placeholder_span,
                f'<img class="image" data-image-id="{image.image_id}" '
                f'data-offset="{image.placeholder_span.start}" '
                f'src="{uri}" alt="{image.image_id}">',
            )
        )
    entries.sort(key=lambda item: item[0].start)

    parts = [f'<div class="document" data-doc-id="{nd.doc_id}">']
    cursor = 0
    for span, markup in entries:
        if span.start > cursor:
            parts.append(_text_run(nd.plain_text, cursor, span.start))
        parts.append(markup)
        cursor = span.end
    if cursor < len(nd.plain_text):
        parts.append(_text_run(nd.plain_text, cursor, len(nd.plain_text)))
    parts.append("</div>")
    return RenderedDocument(doc_id=nd.doc_id, fingerprint=nd.fingerprint, html="".join(parts))


def _text_run(text: str, start: int, end: int) -> str:
    escaped = html_escape.escape(text[start:end], quote=False)
    return f'<span class="t" data-offset="{start}">{escaped}</span>'
