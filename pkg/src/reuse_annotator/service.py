"""HTTP facade binding ingest, normalization, detection, and the store."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, File, Form, Response, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import ingest
from .document_model import Span, normalize, resolve_span
from .errors import (
    ConversionFailedError,
    InvalidArgumentError,
    InvalidSpanError,
    NotFoundError,
    SpanNotFoundError,
    UnsupportedFormatError,
)
from .math_tokens import identifier_stream
from .render import render_document
from .similarity import ALGORITHMS, detect
from .store import AnnotationStore, ContentTypeFlags, PairKey

DEFAULT_PORT = 8080
DEFAULT_MAX_UPLOAD_BYTES = 33554432


@dataclass
class ServiceConfig:
    data_dir: str = "./data"
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES
    pdf_converter: str | None = None
    static_dir: str | None = None   # optional built frontend to serve at /


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, **extra})


def create_app(store: AnnotationStore, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="reuse-annotator")

    def _get_pair(a: str, b: str):
        doc_a = store.get_document(a)
        doc_b = store.get_document(b)
        if doc_a is None or doc_b is None:
            missing = a if doc_a is None else b
            return None, _error(404, f"unknown document {missing}")
        return (doc_a, doc_b), None

    @app.post("/documents")
    async def upload_document(file: UploadFile = File(...),
                              display_name: str | None = Form(None)):
        data = await file.read()
        if len(data) > config.max_upload_bytes:
            return _error(413, f"upload exceeds {config.max_upload_bytes} bytes")
        filename = file.filename or "upload"
        try:
            document = ingest.parse_bytes(
                data, filename, converter_command=config.pdf_converter
            )
        except UnsupportedFormatError as exc:
            return _error(415, str(exc))
        except ConversionFailedError as exc:
            return _error(422, str(exc), diagnostics=exc.diagnostics)
        nd = normalize(document, display_name=display_name or filename)
        result = store.save_document(nd)
        return {
            "doc_id": result.doc_id,
            "fingerprint": nd.fingerprint,
            "already_known": result.already_known,
            "prior_case_count": result.prior_case_count,
            "warnings": [w.to_json() for w in document.warnings],
        }

    @app.get("/documents/{doc_id}/rendered")
    def rendered(doc_id: str):
        nd = store.get_document(doc_id)
        if nd is None:
            return _error(404, f"unknown document {doc_id}")
        return render_document(nd).to_json()

    @app.get("/documents/{doc_id}/identifiers")
    def identifiers(doc_id: str):
        """Identifier stream with per-token formula back-references, so a
        client can map math-match token indices onto formulas."""
        nd = store.get_document(doc_id)
        if nd is None:
            return _error(404, f"unknown document {doc_id}")
        stream = identifier_stream(nd)
        return {
            "doc_id": doc_id,
            "identifiers": [
                {"value": t.value, "formula_id": t.formula_id, "ordinal": t.ordinal}
                for t in stream.tokens
            ],
        }

    @app.get("/pairs/{a}/{b}/detect")
    def detect_pair(a: str, b: str, algorithm: str, min_length: int = 1):
        docs, err = _get_pair(a, b)
        if err:
            return err
        try:
            result = detect(docs[0], docs[1], algorithm, min_length)
        except InvalidArgumentError as exc:
            return _error(400, str(exc))
        return result.to_json()

    @app.post("/pairs/{a}/{b}/cases")
    def record_case(a: str, b: str, body: dict):
        docs, err = _get_pair(a, b)
        if err:
            return err
        doc_a, doc_b = docs
        try:
            span_a = _resolve_side(doc_a, body, "a")
            span_b = _resolve_side(doc_b, body, "b")
        except SpanNotFoundError as exc:
            return _error(
                422, str(exc),
                closest_offset=exc.closest_offset,
                closest_prefix_len=exc.closest_prefix_len,
            )
        except (InvalidSpanError, InvalidArgumentError) as exc:
            return _error(422, str(exc))
        try:
            flags = ContentTypeFlags.from_list(body.get("content_types", []))
            if not flags.any():
                return _error(400, "at least one content type is required")
            case = store.record_case(
                a, b, span_a, span_b, flags, body.get("obfuscation")
            )
        except InvalidArgumentError as exc:
            return _error(400, str(exc))
        except InvalidSpanError as exc:
            return _error(422, str(exc))
        except NotFoundError as exc:
            return _error(404, str(exc))
        return _case_json(case)

    @app.delete("/pairs/{a}/{b}/cases/last")
    def delete_last(a: str, b: str):
        docs, err = _get_pair(a, b)
        if err:
            return err
        deleted = store.delete_last(PairKey.of(a, b))
        return {"deleted_case_id": deleted}

    @app.get("/cases")
    def list_cases(pair: str | None = None):
        key, err = _parse_pair_param(pair)
        if err:
            return err
        return [_case_json(c) for c in store.list_cases(key)]

    @app.get("/cases/export")
    def export_cases(pair: str | None = None):
        key, err = _parse_pair_param(pair)
        if err:
            return err
        return Response(
            content=store.export_jsonl(key), media_type="application/x-ndjson"
        )

    def _parse_pair_param(pair: str | None):
        if pair is None:
            return None, None
        parts = pair.split(",")
        if len(parts) != 2 or not all(parts):
            return None, _error(400, "pair filter must be 'fingerprintA,fingerprintB'")
        return PairKey.of(parts[0], parts[1]), None

    def _case_json(case) -> dict:
        from .store import export_line
        import json

        doc_a = store.get_document(case.doc_a_fingerprint)
        doc_b = store.get_document(case.doc_b_fingerprint)
        return json.loads(export_line(case, doc_a, doc_b))

    if config.static_dir and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def _resolve_side(doc, body: dict, side: str) -> Span:
    explicit = body.get(f"span_{side}")
    if explicit is not None:
        span = Span.from_json(explicit)
        if span.end > len(doc.plain_text):
            raise InvalidSpanError(
                f"span_{side} [{span.start}, {span.end}) is out of bounds"
            )
        return span
    selected = body.get(f"selected_text_{side}")
    if not selected:
        raise InvalidArgumentError(
            f"either span_{side} or selected_text_{side} is required"
        )
    return resolve_span(doc, selected, body.get(f"hint_{side}"))
