"""CLI surface: report figures + JSONL, export command."""

from __future__ import annotations

import json

from reuse_annotator.cli import main
from reuse_annotator.document_model import normalize
from reuse_annotator.ingest.blocks import Document, MathBlock, TextBlock
from reuse_annotator.report import run_report
from reuse_annotator.similarity import detect

TEX_A = "Shared words appear in this exact sentence here. Unique tail for a.\n$x+y$\n"
TEX_B = "Shared words appear in this exact sentence here. Different end for b.\n$x+y$\n"


def nd(text_blocks):
    return normalize(Document(blocks=text_blocks, display_name="d"))


class TestRunReport:
    def docs(self):
        a = nd([TextBlock(TEX_A.split("$")[0]), MathBlock("<math><mi>x</mi><mo>+</mo><mi>y</mi></math>")])
        b = nd([TextBlock(TEX_B.split("$")[0]), MathBlock("<math><mi>x</mi><mo>+</mo><mi>y</mi></math>")])
        return a, b

    def test_writes_jsonl_and_figures(self, tmp_path):
        a, b = self.docs()
        summary = run_report(a, b, ["lcs", "git"], 2, tmp_path / "out")
        jsonl = (tmp_path / "out" / "matches.jsonl").read_text().splitlines()
        parsed = [json.loads(line) for line in jsonl]
        assert all(p["algorithm"] in ("lcs", "git") for p in parsed)
        # Counts in the summary equal an independent detect run.
        assert summary["counts"]["lcs"] == len(detect(a, b, "lcs", 2).matches)
        assert summary["counts"]["git"] == len(detect(a, b, "git", 2).matches)
        assert summary["counts"]["lcs"] >= 1
        assert summary["counts"]["git"] == 1
        for figure in summary["figures"]:
            data = (tmp_path / figure).read_bytes() if not figure.startswith("/") else open(figure, "rb").read()
            assert data[:8] == b"\x89PNG\r\n\x1a\n"

    def test_jsonl_lines_match_detector_output(self, tmp_path):
        a, b = self.docs()
        run_report(a, b, ["lcs"], 2, tmp_path / "out")
        lines = [
            json.loads(line)
            for line in (tmp_path / "out" / "matches.jsonl").read_text().splitlines()
        ]
        expected = [m.to_json() for m in detect(a, b, "lcs", 2).matches]
        assert [
            {k: v for k, v in line.items() if k not in ("algorithm", "min_length")}
            for line in lines
        ] == expected


class TestCliCommands:
    def test_report_command(self, tmp_path, capsys):
        doc_a = tmp_path / "a.tex"
        doc_b = tmp_path / "b.tex"
        doc_a.write_text(TEX_A)
        doc_b.write_text(TEX_B)
        out_dir = tmp_path / "report"
        code = main([
            "report", str(doc_a), str(doc_b),
            "--algorithms", "lcs,git", "--min-length", "2",
            "--out-dir", str(out_dir),
        ])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert (out_dir / "matches.jsonl").exists()
        assert (out_dir / "match_map_lcs.png").exists()
        assert (out_dir / "match_map_git.png").exists()
        assert summary["counts"]["git"] == 1

    def test_report_rejects_unknown_algorithm(self, tmp_path):
        doc = tmp_path / "a.txt"
        doc.write_text("words")
        assert main(["report", str(doc), str(doc), "--algorithms", "nope"]) == 2

    def test_export_command(self, tmp_path, capsys):
        from reuse_annotator.document_model import Span
        from reuse_annotator.store import AnnotationStore, ContentTypeFlags

        data_dir = tmp_path / "data"
        store = AnnotationStore(data_dir)
        a = nd([TextBlock("export me now")])
        b = nd([TextBlock("export me too")])
        store.save_document(a)
        store.save_document(b)
        store.record_case(a.fingerprint, b.fingerprint, Span(0, 6), Span(0, 6),
                          ContentTypeFlags(text=True))
        out_file = tmp_path / "cases.jsonl"
        assert main(["export", "--data-dir", str(data_dir), "-o", str(out_file)]) == 0
        lines = out_file.read_text().splitlines()
        assert len(lines) == 1
        assert json.loads(lines[0])["text_a"] == "export"
