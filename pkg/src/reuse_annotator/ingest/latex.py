"""Error-tolerant LaTeX ingestion for a pragmatic subset.

Math modes become MathBlocks through a bundled LaTeX-math-to-MathML
converter; formulas the converter cannot express degrade to their raw source
text with a warning.  Unknown commands are dropped while their brace
arguments stay visible as text.
"""

from __future__ import annotations

import re
from typing import Callable

from ..errors import UnsupportedMathError
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

ResourceResolver = Callable[[str], "tuple[bytes, str] | None"]

GREEK = {
    "alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ", "epsilon": "ε",
    "zeta": "ζ", "eta": "η", "theta": "θ", "iota": "ι", "kappa": "κ",
    "lambda": "λ", "mu": "μ", "nu": "ν", "xi": "ξ", "omicron": "ο",
    "pi": "π", "rho": "ρ", "sigma": "σ", "tau": "τ", "upsilon": "υ",
    "phi": "φ", "chi": "χ", "psi": "ψ", "omega": "ω",
    "Gamma": "Γ", "Delta": "Δ", "Theta": "Θ", "Lambda": "Λ", "Xi": "Ξ",
    "Pi": "Π", "Sigma": "Σ", "Upsilon": "Υ", "Phi": "Φ", "Psi": "Ψ",
    "Omega": "Ω",
}

OPERATOR_COMMANDS = {
    "times": "×", "cdot": "⋅", "leq": "≤", "geq": "≥", "neq": "≠",
    "in": "∈", "sum": "∑", "int": "∫",
}

OPERATOR_CHARS = set("+-=<>/,()[]")

# Commands whose argument text stays; the command itself disappears.
# Unknown commands get the same treatment, so membership here is
# documentation more than behavior.
UNWRAP_COMMANDS = {
    "textbf", "textit", "emph", "underline",
    "section", "subsection", "title", "author",
}

# Commands dropped together with their argument.
DROP_WITH_ARG = {"cite", "ref", "label"}

MATH_ENVIRONMENTS = {"equation", "equation*", "align", "align*"}


# ---------------------------------------------------------------------------
# LaTeX math -> presentation MathML
# ---------------------------------------------------------------------------

_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_COMMAND_RE = re.compile(r"\\([a-zA-Z]+)")


class _MathParser:
    """Recursive-descent parser for the supported math grammar."""

    def __init__(self, source: str):
        self.source = source
        self.pos = 0

    def parse(self) -> MathNode:
        children = self._sequence(stop=None)
        return MathNode(tag="math", children=children)

    # -- tokenizer ---------------------------------------------------------

    def _skip_ws(self) -> None:
        while self.pos < len(self.source) and self.source[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.source[self.pos] if self.pos < len(self.source) else ""

    # -- grammar -----------------------------------------------------------

    def _sequence(self, stop: str | None) -> list[MathNode]:
        items: list[MathNode] = []
        while True:
            ch = self._peek()
            if not ch:
                if stop is not None:
                    raise UnsupportedMathError("end of input", self.pos)
                return items
            if stop is not None and ch == stop:
                self.pos += 1
                return items
            if ch in "^_":
                items.append(self._scripts(items.pop() if items else None))
            else:
                items.append(self._atom())

    def _scripts(self, base: MathNode | None) -> MathNode:
        if base is None:
            raise UnsupportedMathError(self.source[self.pos], self.pos)
        sub: MathNode | None = None
        sup: MathNode | None = None
        while self._peek() in ("^", "_"):
            marker = self.source[self.pos]
            if (marker == "^" and sup is not None) or (marker == "_" and sub is not None):
                raise UnsupportedMathError(marker, self.pos)
            self.pos += 1
            arg = self._atom()
            if marker == "^":
                sup = arg
            else:
                sub = arg
        if sub is not None and sup is not None:
            return MathNode(tag="msubsup", children=[base, sub, sup])
        if sup is not None:
            return MathNode(tag="msup", children=[base, sup])
        return MathNode(tag="msub", children=[base, sub])

    def _atom(self) -> MathNode:
        ch = self._peek()
        at = self.pos
        if not ch:
            raise UnsupportedMathError("end of input", at)
        if ch == "{":
            self.pos += 1
            children = self._sequence(stop="}")
            if len(children) == 1:
                return children[0]
            return MathNode(tag="mrow", children=children)
        if ch == "\\":
            return self._command(at)
        if ch.isalpha():
            self.pos += 1
            return MathNode(tag="mi", text=ch)
        match = _NUMBER_RE.match(self.source, self.pos)
        if match:
            self.pos = match.end()
            return MathNode(tag="mn", text=match.group())
        if ch in OPERATOR_CHARS:
            self.pos += 1
            return MathNode(tag="mo", text=ch)
        raise UnsupportedMathError(ch, at)

    def _command(self, at: int) -> MathNode:
        match = _COMMAND_RE.match(self.source, self.pos)
        if not match:
            raise UnsupportedMathError(self.source[self.pos:self.pos + 2], at)
        name = match.group(1)
        self.pos = match.end()
        if name in GREEK:
            return MathNode(tag="mi", text=GREEK[name])
        if name in OPERATOR_COMMANDS:
            return MathNode(tag="mo", text=OPERATOR_COMMANDS[name])
        if name == "frac":
            return MathNode(tag="mfrac", children=[self._atom(), self._atom()])
        if name == "sqrt":
            if self._peek() == "[":
                raise UnsupportedMathError("[", self.pos)
            return MathNode(tag="msqrt", children=[self._atom()])
        raise UnsupportedMathError("\\" + name, at)


def latex_math_to_mathml(latex_math: str) -> str:
    """Convert math-mode content (without delimiters) to canonical MathML.

    Raises UnsupportedMathError for any token outside the supported grammar.
    """
    return serialize(_MathParser(latex_math).parse())


# ---------------------------------------------------------------------------
# Document scanner
# ---------------------------------------------------------------------------

def _strip_comments(source: str) -> str:
    """Remove % comments (keeping escaped \\%), preserving line structure."""
    lines = []
    for line in source.split("\n"):
        out = []
        escaped = False
        for ch in line:
            if escaped:
                out.append(ch)
                escaped = False
            elif ch == "\\":
                out.append(ch)
                escaped = True
            elif ch == "%":
                break
            else:
                out.append(ch)
        lines.append("".join(out))
    return "\n".join(lines)


def _document_body(source: str) -> str:
    begin = source.find("\\begin{document}")
    if begin == -1:
        return source
    start = begin + len("\\begin{document}")
    end = source.find("\\end{document}", start)
    return source[start:end] if end != -1 else source[start:]


class _LatexScanner:
    def __init__(self, body: str, resolver: ResourceResolver | None,
                 warnings: list[ParseWarning]):
        self.body = body
        self.resolver = resolver
        self.warnings = warnings
        self.blocks: list = []
        self.buf: list[str] = []
        self.pos = 0

    def warn(self, code: str, message: str, offset: int | None = None) -> None:
        self.warnings.append(ParseWarning(code=code, message=message, source_offset=offset))

    def flush_text(self) -> None:
        if self.buf:
            self.blocks.append(TextBlock("".join(self.buf)))
            self.buf = []

    def emit_math(self, content: str, display: bool, offset: int) -> None:
        try:
            mathml = latex_math_to_mathml(content)
        except UnsupportedMathError as exc:
            self.warn(
                "unsupported-math",
                f"formula kept as text: unsupported token {exc.token!r}",
                offset,
            )
            self.buf.append(content)
            return
        self.flush_text()
        self.blocks.append(MathBlock(mathml, display=display))

    def emit_image(self, path: str, offset: int) -> None:
        resolved = self.resolver(path) if self.resolver else None
        if resolved is None:
            self.warn("unresolved-image", f"image {path!r} could not be resolved", offset)
            data, media_type = b"", _guess_media_type(path)
        else:
            data, media_type = resolved
        self.flush_text()
        self.blocks.append(ImageBlock(data, media_type))

    # -- scanning helpers ----------------------------------------------------

    def _find_closing(self, open_delim: str, close_delim: str, start: int) -> int:
        """Index of close_delim, or -1. Dollar delimiters skip escaped ones."""
        i = start
        while True:
            i = self.body.find(close_delim, i)
            if i == -1:
                return -1
            if close_delim.startswith("$") and i > 0 and self.body[i - 1] == "\\":
                i += 1
                continue
            return i

    def _recover_line(self, after: int, code: str, message: str) -> None:
        """Unbalanced delimiter: keep the rest of the line as text."""
        self.warn(code, message, after)
        eol = self.body.find("\n", after)
        if eol == -1:
            eol = len(self.body)
        self.buf.append(self.body[after:eol])
        self.pos = eol

    def _math_span(self, open_len: int, close_delim: str, display: bool) -> None:
        start = self.pos + open_len
        end = self._find_closing("", close_delim, start)
        if end == -1:
            self._recover_line(
                start, "unbalanced-math",
                f"no closing {close_delim!r}; remainder of line kept as text",
            )
            return
        self.emit_math(self.body[start:end], display, self.pos)
        self.pos = end + len(close_delim)

    def _read_group(self) -> str | None:
        """Read a {...} group at self.pos (whitespace allowed before it)."""
        i = self.pos
        while i < len(self.body) and self.body[i].isspace():
            i += 1
        if i >= len(self.body) or self.body[i] != "{":
            return None
        depth = 0
        for j in range(i, len(self.body)):
            if self.body[j] == "{":
                depth += 1
            elif self.body[j] == "}":
                depth -= 1
                if depth == 0:
                    self.pos = j + 1
                    return self.body[i + 1:j]
        return None

    def _skip_optional_arg(self) -> None:
        i = self.pos
        while i < len(self.body) and self.body[i].isspace():
            i += 1
        if i < len(self.body) and self.body[i] == "[":
            end = self.body.find("]", i)
            if end != -1:
                self.pos = end + 1

    def _handle_environment(self, at: int) -> None:
        env = self._read_group()
        if env is None:
            self.warn("bad-environment", "\\begin without environment name", at)
            return
        if env in MATH_ENVIRONMENTS:
            closing = f"\\end{{{env}}}"
            end = self.body.find(closing, self.pos)
            if end == -1:
                self._recover_line(
                    self.pos, "unbalanced-math",
                    f"missing {closing}; remainder of line kept as text",
                )
                return
            self.emit_math(self.body[self.pos:end], True, at)
            self.pos = end + len(closing)
        # Non-math environments are transparent: their content scans normally.

    def _handle_command(self) -> None:
        at = self.pos
        match = _COMMAND_RE.match(self.body, self.pos)
        if not match:
            # Escaped single character (or a row break).
            nxt = self.body[self.pos + 1] if self.pos + 1 < len(self.body) else ""
            if nxt == "\\":
                self.buf.append("\n")
                self.pos += 2
            elif nxt == "(":
                self.pos += 2
                end = self.body.find("\\)", self.pos)
                if end == -1:
                    self._recover_line(
                        self.pos, "unbalanced-math",
                        "no closing \\); remainder of line kept as text",
                    )
                    return
                self.emit_math(self.body[self.pos:end], False, at)
                self.pos = end + 2
            elif nxt == "[":
                self.pos += 2
                end = self.body.find("\\]", self.pos)
                if end == -1:
                    self._recover_line(
                        self.pos, "unbalanced-math",
                        "no closing \\]; remainder of line kept as text",
                    )
                    return
                self.emit_math(self.body[self.pos:end], True, at)
                self.pos = end + 2
            elif nxt:
                self.buf.append(nxt)
                self.pos += 2
            else:
                self.pos += 1
            return

        name = match.group(1)
        self.pos = match.end()
        # TeX swallows whitespace after a control word.
        while self.pos < len(self.body) and self.body[self.pos] == " ":
            self.pos += 1

        if name == "begin":
            self._handle_environment(at)
        elif name == "end":
            self._read_group()
        elif name == "includegraphics":
            self._skip_optional_arg()
            path = self._read_group()
            if path is None:
                self.warn("bad-image", "\\includegraphics without a path", at)
            else:
                self.emit_image(path.strip(), at)
        elif name in DROP_WITH_ARG:
            self._skip_optional_arg()
            self._read_group()
        # Anything else (unwrap commands included): the command disappears,
        # following brace groups are scanned as plain groups.

    def scan(self) -> list:
        body = self.body
        n = len(body)
        while self.pos < n:
            ch = body[self.pos]
            if ch == "\\":
                self._handle_command()
            elif ch == "$":
                if body.startswith("$$", self.pos):
                    self._math_span(2, "$$", True)
                else:
                    self._math_span(1, "$", False)
            elif ch in "{}":
                self.pos += 1
            elif ch == "~":
                self.buf.append(" ")
                self.pos += 1
            else:
                self.buf.append(ch)
                self.pos += 1
        if self.buf or not self.blocks:
            self.blocks.append(TextBlock("".join(self.buf)))
            self.buf = []
        return self.blocks


def _guess_media_type(path: str) -> str:
    lower = path.lower()
    if lower.endswith(".png"):
        return "image/png"
    if lower.endswith((".jpg", ".jpeg")):
        return "image/jpeg"
    if lower.endswith(".gif"):
        return "image/gif"
    if lower.endswith(".svg"):
        return "image/svg+xml"
    return "application/octet-stream"


def parse_latex(source: str, name: str,
                resource_resolver: ResourceResolver | None = None) -> Document:
    warnings: list[ParseWarning] = []
    cleaned = strip_reserved(normalize_newlines(source), warnings)
    body = _document_body(_strip_comments(cleaned))
    scanner = _LatexScanner(body, resource_resolver, warnings)
    blocks = scanner.scan()
    return Document(
        blocks=blocks,
        display_name=name,
        source_format="latex",
        warnings=warnings,
    )
