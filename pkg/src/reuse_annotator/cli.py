"""Command-line entry points: serve, report, export."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import ingest
from .document_model import NormalizedDocument, normalize
from .service import DEFAULT_MAX_UPLOAD_BYTES, DEFAULT_PORT, ServiceConfig, create_app
from .store import AnnotationStore, PairKey


def _file_resolver(base: Path) -> ingest.ResourceResolver:
    def resolve(path: str):
        candidate = (base / path).resolve()
        if not candidate.is_file():
            return None
        from .ingest.latex import _guess_media_type

        return candidate.read_bytes(), _guess_media_type(path)

    return resolve


def _load_document(path_str: str, converter: str | None = None) -> NormalizedDocument:
    path = Path(path_str)
    document = ingest.parse_bytes(
        path.read_bytes(), path.name,
        resource_resolver=_file_resolver(path.parent),
        converter_command=converter,
    )
    for warning in document.warnings:
        print(f"warning [{warning.code}] {path.name}: {warning.message}", file=sys.stderr)
    return normalize(document)


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    store = AnnotationStore(args.data_dir)
    config = ServiceConfig(
        data_dir=args.data_dir,
        max_upload_bytes=args.max_upload_bytes,
        pdf_converter=args.pdf_converter,
        static_dir=args.static_dir,
    )
    app = create_app(store, config)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    from .report import run_report
    from .similarity import ALGORITHMS

    algorithms = (
        list(ALGORITHMS) if args.algorithms == "all" else args.algorithms.split(",")
    )
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        print(f"unknown algorithm(s): {', '.join(unknown)}", file=sys.stderr)
        return 2
    doc_a = _load_document(args.doc_a, args.pdf_converter)
    doc_b = _load_document(args.doc_b, args.pdf_converter)
    summary = run_report(doc_a, doc_b, algorithms, args.min_length, args.out_dir)
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    store = AnnotationStore(args.data_dir)
    pair = None
    if args.pair:
        parts = args.pair.split(",")
        if len(parts) != 2:
            print("--pair expects 'fingerprintA,fingerprintB'", file=sys.stderr)
            return 2
        pair = PairKey.of(parts[0], parts[1])
    payload = store.export_jsonl(pair)
    if args.output == "-":
        sys.stdout.buffer.write(payload)
    else:
        Path(args.output).write_bytes(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reuse-annotator",
        description="Annotate and visualize reused text, images, and math "
                    "across document pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the annotation HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument(
        "--port", type=int, default=int(os.environ.get("REUSE_PORT", DEFAULT_PORT))
    )
    serve.add_argument(
        "--data-dir", default=os.environ.get("REUSE_DATA_DIR", "./data")
    )
    serve.add_argument("--max-upload-bytes", type=int, default=DEFAULT_MAX_UPLOAD_BYTES)
    serve.add_argument("--pdf-converter", default=None,
                       help="external command converting PDF on stdin to HTML on stdout")
    serve.add_argument("--static-dir", default=None,
                       help="serve a built frontend from this directory")
    serve.set_defaults(func=_cmd_serve)

    report = sub.add_parser(
        "report", help="run detectors on a document pair; write JSONL + figures"
    )
    report.add_argument("doc_a")
    report.add_argument("doc_b")
    report.add_argument("--algorithms", default="all",
                        help="comma list of lcs,adaplag,lcis,git (default: all)")
    report.add_argument("--min-length", type=int, default=3)
    report.add_argument("--out-dir", default="./report")
    report.add_argument("--pdf-converter", default=None)
    report.set_defaults(func=_cmd_report)

    export = sub.add_parser("export", help="dump recorded cases as JSON Lines")
    export.add_argument(
        "--data-dir", default=os.environ.get("REUSE_DATA_DIR", "./data")
    )
    export.add_argument("--pair", default=None,
                        help="restrict to one pair: 'fingerprintA,fingerprintB'")
    export.add_argument("-o", "--output", default="-")
    export.set_defaults(func=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
