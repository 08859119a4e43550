"""Durable storage of normalized documents and annotation cases.

Documents are keyed by content fingerprint (one JSON file each, written
atomically); cases live in an append-only JSON Lines log that is replayed on
startup, so a crash after a successful write never loses a case.  Case ids
grow monotonically for the lifetime of a data directory and are never
reused, deletions included.
"""

from __future__ import annotations

import base64
import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable

from .document_model import NormalizedDocument, Span, slice_content
from .errors import InvalidArgumentError, NotFoundError, StoreError

_EXPORT_TIME_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


@dataclass(frozen=True)
class ContentTypeFlags:
    text: bool = False
    image: bool = False
    math: bool = False

    def any(self) -> bool:
        return self.text or self.image or self.math

    def to_list(self) -> list[str]:
        names = []
        if self.text:
            names.append("text")
        if self.image:
            names.append("image")
        if self.math:
            names.append("math")
        return names

    @classmethod
    def from_list(cls, names: Iterable[str]) -> "ContentTypeFlags":
        names = set(names)
        unknown = names - {"text", "image", "math"}
        if unknown:
            raise InvalidArgumentError(f"unknown content types: {sorted(unknown)}")
        return cls(text="text" in names, image="image" in names, math="math" in names)


@dataclass(frozen=True)
class PairKey:
    """Unordered document pair; fingerprints kept in lexicographic order."""

    low: str
    high: str

    @classmethod
    def of(cls, a: str, b: str) -> "PairKey":
        return cls(min(a, b), max(a, b))


@dataclass
class AnnotationCase:
    case_id: int
    doc_a_fingerprint: str
    doc_b_fingerprint: str
    doc_a_name: str
    doc_b_name: str
    span_a: Span
    span_b: Span
    excerpt_a: str
    excerpt_b: str
    formula_ids_a: list[str]
    formula_ids_b: list[str]
    image_ids_a: list[str]
    image_ids_b: list[str]
    content_types: ContentTypeFlags
    obfuscation: str | None
    created_at: datetime

    @property
    def pair(self) -> PairKey:
        return PairKey.of(self.doc_a_fingerprint, self.doc_b_fingerprint)


@dataclass(frozen=True)
class SaveResult:
    doc_id: str
    already_known: bool
    prior_case_count: int


def _utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def export_line(case: AnnotationCase, doc_a: NormalizedDocument,
                doc_b: NormalizedDocument) -> str:
    """One JSONL line, fixed key order, MathML inlined from the documents."""
    obj = {
        "case_id": case.case_id,
        "doc_a": case.doc_a_name,
        "doc_b": case.doc_b_name,
        "doc_a_fingerprint": case.doc_a_fingerprint,
        "doc_b_fingerprint": case.doc_b_fingerprint,
        "span_a": {"start": case.span_a.start, "end": case.span_a.end},
        "span_b": {"start": case.span_b.start, "end": case.span_b.end},
        "text_a": case.excerpt_a,
        "text_b": case.excerpt_b,
        "formulas_a": [
            {"id": fid, "mathml": doc_a.formula(fid).mathml} for fid in case.formula_ids_a
        ],
        "formulas_b": [
            {"id": fid, "mathml": doc_b.formula(fid).mathml} for fid in case.formula_ids_b
        ],
        "images_a": list(case.image_ids_a),
        "images_b": list(case.image_ids_b),
        "content_types": case.content_types.to_list(),
        "obfuscation": case.obfuscation,
        "created_at": case.created_at.strftime(_EXPORT_TIME_FORMAT),
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


class AnnotationStore:
    """Single-writer store under a data directory; readers are lock-free
    against immutable snapshots."""

    def __init__(self, data_dir: str | Path, clock: Callable[[], datetime] | None = None):
        self.data_dir = Path(data_dir)
        self.documents_dir = self.data_dir / "documents"
        self.log_path = self.data_dir / "cases.jsonl"
        self._clock = clock or _utc_now
        self._lock = threading.RLock()
        self._documents: dict[str, NormalizedDocument] = {}
        self._cases: list[AnnotationCase] = []
        self._max_case_id = 0
        try:
            self.documents_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreError(f"cannot create data directory: {exc}") from exc
        self._load()

    # -- loading ---------------------------------------------------------------

    def _load(self) -> None:
        for path in sorted(self.documents_dir.glob("*.json")):
            try:
                payload = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                raise StoreError(f"corrupt document file {path.name}: {exc}") from exc
            nd = NormalizedDocument.from_json(payload["document"])
            nd.image_data = {
                image_id: base64.b64decode(encoded)
                for image_id, encoded in payload.get("image_data", {}).items()
            }
            self._documents[nd.fingerprint] = nd
        if self.log_path.exists():
            with self.log_path.open("r", encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if line:
                        self._replay(json.loads(line))

    def _replay(self, record: dict) -> None:
        if record["op"] == "record":
            case = self._case_from_record(record)
            self._cases.append(case)
            self._max_case_id = max(self._max_case_id, case.case_id)
        elif record["op"] == "delete":
            case_id = record["case_id"]
            self._cases = [c for c in self._cases if c.case_id != case_id]

    @staticmethod
    def _case_from_record(record: dict) -> AnnotationCase:
        return AnnotationCase(
            case_id=record["case_id"],
            doc_a_fingerprint=record["doc_a_fingerprint"],
            doc_b_fingerprint=record["doc_b_fingerprint"],
            doc_a_name=record["doc_a_name"],
            doc_b_name=record["doc_b_name"],
            span_a=Span.from_json(record["span_a"]),
            span_b=Span.from_json(record["span_b"]),
            excerpt_a=record["excerpt_a"],
            excerpt_b=record["excerpt_b"],
            formula_ids_a=list(record["formula_ids_a"]),
            formula_ids_b=list(record["formula_ids_b"]),
            image_ids_a=list(record["image_ids_a"]),
            image_ids_b=list(record["image_ids_b"]),
            content_types=ContentTypeFlags.from_list(record["content_types"]),
            obfuscation=record["obfuscation"],
            created_at=datetime.strptime(
                record["created_at"], _EXPORT_TIME_FORMAT
            ).replace(tzinfo=timezone.utc),
        )

    @staticmethod
    def _case_to_record(case: AnnotationCase) -> dict:
        return {
            "op": "record",
            "case_id": case.case_id,
            "doc_a_fingerprint": case.doc_a_fingerprint,
            "doc_b_fingerprint": case.doc_b_fingerprint,
            "doc_a_name": case.doc_a_name,
            "doc_b_name": case.doc_b_name,
            "span_a": case.span_a.to_json(),
            "span_b": case.span_b.to_json(),
            "excerpt_a": case.excerpt_a,
            "excerpt_b": case.excerpt_b,
            "formula_ids_a": case.formula_ids_a,
            "formula_ids_b": case.formula_ids_b,
            "image_ids_a": case.image_ids_a,
            "image_ids_b": case.image_ids_b,
            "content_types": case.content_types.to_list(),
            "obfuscation": case.obfuscation,
            "created_at": case.created_at.strftime(_EXPORT_TIME_FORMAT),
        }

    # -- writing ---------------------------------------------------------------

    def _append_log(self, record: dict) -> None:
        try:
            with self.log_path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise StoreError(f"cannot append to case log: {exc}") from exc

    def save_document(self, nd: NormalizedDocument) -> SaveResult:
        with self._lock:
            existing = self._documents.get(nd.fingerprint)
            if existing is not None:
                return SaveResult(
                    doc_id=existing.doc_id,
                    already_known=True,
                    prior_case_count=self._case_count_for(nd.fingerprint),
                )
            payload = {
                "document": nd.to_json(),
                "image_data": {
                    image_id: base64.b64encode(data).decode("ascii")
                    for image_id, data in nd.image_data.items()
                },
            }
            path = self.documents_dir / f"{nd.fingerprint}.json"
            tmp = path.with_suffix(".json.tmp")
            try:
                tmp.write_text(
                    json.dumps(payload, ensure_ascii=False), encoding="utf-8"
                )
                os.replace(tmp, path)
            except OSError as exc:
                raise StoreError(f"cannot persist document: {exc}") from exc
            self._documents[nd.fingerprint] = nd
            return SaveResult(doc_id=nd.doc_id, already_known=False, prior_case_count=0)

    def record_case(self, doc_a_fingerprint: str, doc_b_fingerprint: str,
                    span_a: Span, span_b: Span, flags: ContentTypeFlags,
                    obfuscation: str | None = None) -> AnnotationCase:
        with self._lock:
            doc_a = self.get_document(doc_a_fingerprint)
            doc_b = self.get_document(doc_b_fingerprint)
            if doc_a is None or doc_b is None:
                raise NotFoundError("both documents must be uploaded before recording")
            if not flags.any():
                raise InvalidArgumentError("at least one content-type flag is required")
            content_a = slice_content(doc_a, span_a)
            content_b = slice_content(doc_b, span_b)
            case = AnnotationCase(
                case_id=self._max_case_id + 1,
                doc_a_fingerprint=doc_a_fingerprint,
                doc_b_fingerprint=doc_b_fingerprint,
                doc_a_name=doc_a.display_name,
                doc_b_name=doc_b.display_name,
                span_a=span_a,
                span_b=span_b,
                excerpt_a=content_a.excerpt,
                excerpt_b=content_b.excerpt,
                formula_ids_a=content_a.formula_ids,
                formula_ids_b=content_b.formula_ids,
                image_ids_a=content_a.image_ids,
                image_ids_b=content_b.image_ids,
                content_types=flags,
                obfuscation=obfuscation,
                created_at=self._clock(),
            )
            self._append_log(self._case_to_record(case))
            self._cases.append(case)
            self._max_case_id = case.case_id
            return case

    def delete_last(self, pair: PairKey) -> int | None:
        with self._lock:
            candidates = [c for c in self._cases if c.pair == pair]
            if not candidates:
                return None
            last = max(candidates, key=lambda c: c.case_id)
            self._append_log({"op": "delete", "case_id": last.case_id})
            self._cases = [c for c in self._cases if c.case_id != last.case_id]
            return last.case_id

    # -- reading ---------------------------------------------------------------

    def get_document(self, fingerprint: str) -> NormalizedDocument | None:
        return self._documents.get(fingerprint)

    def _case_count_for(self, fingerprint: str) -> int:
        return sum(
            1 for c in self._cases
            if fingerprint in (c.doc_a_fingerprint, c.doc_b_fingerprint)
        )

    def list_cases(self, pair: PairKey | None = None) -> list[AnnotationCase]:
        with self._lock:
            cases = [c for c in self._cases if pair is None or c.pair == pair]
        return sorted(cases, key=lambda c: c.case_id)

    def export_jsonl(self, pair: PairKey | None = None) -> bytes:
        """UTF-8 JSON Lines, ascending case id, one "\\n"-terminated line each."""
        lines = []
        for case in self.list_cases(pair):
            doc_a = self.get_document(case.doc_a_fingerprint)
            doc_b = self.get_document(case.doc_b_fingerprint)
            if doc_a is None or doc_b is None:  # pragma: no cover - invariant
                raise StoreError(f"case {case.case_id} references a missing document")
            lines.append(export_line(case, doc_a, doc_b) + "\n")
        return "".join(lines).encode("utf-8")
