"""Adapter seam for external format converters (e.g. a PDF pipeline).

The converter is any command that reads the source bytes on stdin and emits
HTML (optionally with MathML) on stdout; its output is ingested through the
HTML parser.  Invocations are serialized per configured command.
"""

from __future__ import annotations

import shlex
import subprocess
import threading
from collections import defaultdict

from ..errors import ConversionFailedError, UnsupportedFormatError
from .blocks import Document
from .html import parse_html
from .latex import ResourceResolver

_command_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
_locks_guard = threading.Lock()


def _lock_for(command: str) -> threading.Lock:
    with _locks_guard:
        return _command_locks[command]


def external_converter_adapter(data: bytes, converter_command: str | None, name: str,
                               resource_resolver: ResourceResolver | None = None,
                               timeout: float = 120.0) -> Document:
    if not converter_command:
        raise UnsupportedFormatError(
            "no external converter configured for this input format"
        )
    argv = shlex.split(converter_command)
    with _lock_for(converter_command):
        try:
            proc = subprocess.run(
                argv, input=data, capture_output=True, timeout=timeout
            )
        except OSError as exc:
            raise ConversionFailedError(f"converter could not run: {exc}") from exc
        except subprocess.TimeoutExpired as exc:
            raise ConversionFailedError("converter timed out") from exc
    if proc.returncode != 0:
        raise ConversionFailedError(
            f"converter exited with status {proc.returncode}",
            diagnostics=proc.stderr.decode("utf-8", errors="replace"),
        )
    html = proc.stdout.decode("utf-8", errors="replace")
    if not html.strip():
        raise ConversionFailedError(
            "converter produced no output",
            diagnostics=proc.stderr.decode("utf-8", errors="replace"),
        )
    document = parse_html(html, name, resource_resolver)
    return document
