"""Annotation store: persistence, re-upload recognition, JSONL export."""

from __future__ import annotations

import json
from datetime import datetime, timezone

import pytest

from reuse_annotator.document_model import Span, normalize
from reuse_annotator.errors import InvalidArgumentError, NotFoundError
from reuse_annotator.ingest.blocks import Document, ImageBlock, MathBlock, TextBlock
from reuse_annotator.store import AnnotationStore, ContentTypeFlags, PairKey

FIXED_TIME = datetime(2024, 5, 6, 12, 30, 15, tzinfo=timezone.utc)


def fixed_clock():
    return FIXED_TIME


def make_doc(text: str, with_math: bool = False, name: str = "doc"):
    blocks = [TextBlock(text)]
    if with_math:
        blocks.append(MathBlock("<math><mi>x</mi><mo>+</mo><mi>y</mi></math>"))
        blocks.append(TextBlock("tail text"))
        blocks.append(ImageBlock(b"imagebytes", "image/png"))
    return normalize(Document(blocks=blocks, display_name=name, source_format="txt"))


@pytest.fixture
def store(tmp_path):
    return AnnotationStore(tmp_path / "data", clock=fixed_clock)


class TestSaveDocument:
    def test_first_upload(self, store):
        result = store.save_document(make_doc("hello"))
        assert result.already_known is False
        assert result.prior_case_count == 0

    def test_identical_reupload(self, store):
        first = store.save_document(make_doc("hello"))
        second = store.save_document(make_doc("hello"))
        assert second.already_known is True
        assert second.doc_id == first.doc_id

    def test_one_character_difference(self, store):
        first = store.save_document(make_doc("hello"))
        second = store.save_document(make_doc("hellp"))
        assert second.already_known is False
        assert second.doc_id != first.doc_id

    def test_idempotence_keeps_one_document(self, store, tmp_path):
        for _ in range(4):
            store.save_document(make_doc("same"))
        files = list((tmp_path / "data" / "documents").glob("*.json"))
        assert len(files) == 1

    def test_prior_case_count_reported(self, store):
        a, b = make_doc("first text", name="a"), make_doc("second text", name="b")
        store.save_document(a)
        store.save_document(b)
        store.record_case(
            a.fingerprint, b.fingerprint, Span(0, 5), Span(0, 6),
            ContentTypeFlags(text=True),
        )
        again = store.save_document(make_doc("first text", name="a"))
        assert again.already_known is True
        assert again.prior_case_count == 1


class TestRecordCase:
    def test_prose_only_case(self, store):
        a, b = make_doc("plain here"), make_doc("also plain")
        store.save_document(a)
        store.save_document(b)
        case = store.record_case(
            a.fingerprint, b.fingerprint, Span(0, 5), Span(0, 4),
            ContentTypeFlags(text=True),
        )
        assert case.case_id == 1
        assert case.excerpt_a == "plain"
        assert case.formula_ids_a == [] and case.image_ids_a == []
        assert case.created_at == FIXED_TIME

    def test_math_case_collects_formula_ids(self, store):
        a = make_doc("before", with_math=True, name="a")
        b = make_doc("other before", with_math=True, name="b")
        store.save_document(a)
        store.save_document(b)
        f_span = a.formulas[0].placeholder_span
        case = store.record_case(
            a.fingerprint, b.fingerprint,
            Span(f_span.start, f_span.end),
            Span(0, 5),
            ContentTypeFlags(math=True),
        )
        assert case.formula_ids_a == ["F1"]
        assert case.formula_ids_b == []

    def test_all_flags_false_rejected(self, store):
        a, b = make_doc("one"), make_doc("two")
        store.save_document(a)
        store.save_document(b)
        with pytest.raises(InvalidArgumentError):
            store.record_case(
                a.fingerprint, b.fingerprint, Span(0, 3), Span(0, 3),
                ContentTypeFlags(),
            )

    def test_unknown_fingerprint_rejected(self, store):
        a = make_doc("one")
        store.save_document(a)
        with pytest.raises(NotFoundError):
            store.record_case(a.fingerprint, "0" * 64, Span(0, 3), Span(0, 3),
                              ContentTypeFlags(text=True))


class TestDeleteLast:
    def seed(self, store):
        a, b = make_doc("text aaa", name="a"), make_doc("text bbb", name="b")
        store.save_document(a)
        store.save_document(b)
        pair = PairKey.of(a.fingerprint, b.fingerprint)
        flags = ContentTypeFlags(text=True)
        c1 = store.record_case(a.fingerprint, b.fingerprint, Span(0, 4), Span(0, 4), flags)
        c2 = store.record_case(a.fingerprint, b.fingerprint, Span(5, 8), Span(5, 8), flags)
        return a, b, pair, c1, c2

    def test_deletes_greatest_case_id(self, store):
        _, _, pair, c1, c2 = self.seed(store)
        assert store.delete_last(pair) == c2.case_id
        assert [c.case_id for c in store.list_cases(pair)] == [c1.case_id]

    def test_empty_pair_returns_none(self, store):
        a, b = make_doc("x1"), make_doc("x2")
        store.save_document(a)
        store.save_document(b)
        assert store.delete_last(PairKey.of(a.fingerprint, b.fingerprint)) is None

    def test_pair_isolation(self, store):
        a, b, pair_ab, *_ = self.seed(store)
        c = make_doc("third doc", name="c")
        store.save_document(c)
        other = store.record_case(
            a.fingerprint, c.fingerprint, Span(0, 4), Span(0, 5),
            ContentTypeFlags(text=True),
        )
        store.delete_last(pair_ab)
        remaining = store.list_cases(PairKey.of(a.fingerprint, c.fingerprint))
        assert [case.case_id for case in remaining] == [other.case_id]

    def test_ids_never_reused(self, store):
        a, b, pair, c1, c2 = self.seed(store)
        store.delete_last(pair)
        c3 = store.record_case(
            a.fingerprint, b.fingerprint, Span(0, 4), Span(0, 4),
            ContentTypeFlags(text=True),
        )
        assert c3.case_id == c2.case_id + 1


class TestListAndExport:
    def test_list_ascending_and_filter(self, store):
        a, b = make_doc("pair one a", name="a"), make_doc("pair one b", name="b")
        c = make_doc("pair two c", name="c")
        for doc in (a, b, c):
            store.save_document(doc)
        flags = ContentTypeFlags(text=True)
        store.record_case(a.fingerprint, b.fingerprint, Span(0, 4), Span(0, 4), flags)
        store.record_case(a.fingerprint, c.fingerprint, Span(0, 4), Span(0, 4), flags)
        store.record_case(b.fingerprint, c.fingerprint, Span(0, 4), Span(0, 4), flags)
        every = store.list_cases()
        assert [case.case_id for case in every] == [1, 2, 3]
        only = store.list_cases(PairKey.of(c.fingerprint, a.fingerprint))
        assert [case.case_id for case in only] == [2]

    def test_empty_store(self, store):
        assert store.list_cases() == []
        assert store.export_jsonl() == b""

    def test_export_single_line_round_trips(self, store):
        a = make_doc("alpha beta", with_math=True, name="a")
        b = make_doc("gamma delta", name="b")
        store.save_document(a)
        store.save_document(b)
        store.record_case(
            a.fingerprint, b.fingerprint,
            Span(0, len(a.plain_text)), Span(0, 5),
            ContentTypeFlags(text=True, math=True), obfuscation="paraphrase",
        )
        payload = store.export_jsonl()
        lines = payload.decode("utf-8").split("\n")
        assert lines[-1] == "" and len(lines) == 2
        obj = json.loads(lines[0])
        assert list(obj.keys()) == [
            "case_id", "doc_a", "doc_b", "doc_a_fingerprint", "doc_b_fingerprint",
            "span_a", "span_b", "text_a", "text_b", "formulas_a", "formulas_b",
            "images_a", "images_b", "content_types", "obfuscation", "created_at",
        ]
        assert obj["doc_a"] == "a"
        assert obj["formulas_a"] == [
            {"id": "F1", "mathml": a.formulas[0].mathml}
        ]
        assert obj["images_a"] == ["I1"]
        assert obj["content_types"] == ["text", "math"]
        assert obj["obfuscation"] == "paraphrase"
        assert obj["created_at"] == "2024-05-06T12:30:15Z"

    def test_obfuscation_null_when_unset(self, store):
        a, b = make_doc("aaaa"), make_doc("bbbb")
        store.save_document(a)
        store.save_document(b)
        store.record_case(a.fingerprint, b.fingerprint, Span(0, 4), Span(0, 4),
                          ContentTypeFlags(text=True))
        obj = json.loads(store.export_jsonl().decode())
        assert obj["obfuscation"] is None

    def test_export_round_trip_matches_list_cases(self, store):
        a = make_doc("text one body", with_math=True, name="a")
        b = make_doc("text two body", with_math=True, name="b")
        store.save_document(a)
        store.save_document(b)
        flags = ContentTypeFlags(text=True, image=True)
        store.record_case(a.fingerprint, b.fingerprint, Span(0, 8), Span(0, 8), flags)
        store.record_case(
            a.fingerprint, b.fingerprint,
            Span(0, len(a.plain_text)), Span(0, len(b.plain_text)),
            ContentTypeFlags(math=True), obfuscation="summary",
        )
        parsed = [
            json.loads(line)
            for line in store.export_jsonl().decode().splitlines()
        ]
        cases = store.list_cases()
        assert len(parsed) == len(cases) == 2
        for obj, case in zip(parsed, cases):
            assert obj["case_id"] == case.case_id
            assert obj["span_a"] == {"start": case.span_a.start, "end": case.span_a.end}
            assert obj["text_a"] == case.excerpt_a
            assert obj["text_b"] == case.excerpt_b
            assert obj["images_a"] == case.image_ids_a
            assert obj["content_types"] == case.content_types.to_list()
            assert obj["obfuscation"] == case.obfuscation


class TestDurability:
    def test_reopen_restores_state(self, tmp_path):
        data_dir = tmp_path / "data"
        store = AnnotationStore(data_dir, clock=fixed_clock)
        a = make_doc("persisted text", with_math=True, name="a")
        b = make_doc("other persisted", name="b")
        store.save_document(a)
        store.save_document(b)
        flags = ContentTypeFlags(text=True)
        store.record_case(a.fingerprint, b.fingerprint, Span(0, 9), Span(0, 5), flags)
        store.record_case(a.fingerprint, b.fingerprint, Span(10, 14), Span(6, 10), flags)
        store.delete_last(PairKey.of(a.fingerprint, b.fingerprint))
        before = store.export_jsonl()

        reopened = AnnotationStore(data_dir, clock=fixed_clock)
        assert reopened.export_jsonl() == before
        assert reopened.get_document(a.fingerprint).plain_text == a.plain_text
        assert reopened.get_document(a.fingerprint).image_data == a.image_data
        # Ids continue after the deleted maximum.
        resumed = reopened.record_case(
            a.fingerprint, b.fingerprint, Span(0, 4), Span(0, 4), flags
        )
        assert resumed.case_id == 3

    def test_excerpt_consistency_recomputable(self, tmp_path):
        from reuse_annotator.document_model import slice_content

        store = AnnotationStore(tmp_path / "data", clock=fixed_clock)
        a = make_doc("check my excerpt", with_math=True, name="a")
        b = make_doc("and mine too", name="b")
        store.save_document(a)
        store.save_document(b)
        store.record_case(
            a.fingerprint, b.fingerprint,
            Span(0, len(a.plain_text)), Span(4, 8),
            ContentTypeFlags(text=True, math=True, image=True),
        )
        for case in store.list_cases():
            doc_a = store.get_document(case.doc_a_fingerprint)
            doc_b = store.get_document(case.doc_b_fingerprint)
            assert case.excerpt_a == slice_content(doc_a, case.span_a).excerpt
            assert case.excerpt_b == slice_content(doc_b, case.span_b).excerpt
            assert case.formula_ids_a == slice_content(doc_a, case.span_a).formula_ids
            assert case.image_ids_a == slice_content(doc_a, case.span_a).image_ids
