"""Shared fixtures: a deterministic corpus of LaTeX/HTML documents with
mixed text, math, and images."""

from __future__ import annotations

import random

import pytest

from reuse_annotator.document_model import NormalizedDocument, normalize
from reuse_annotator.ingest import parse_html, parse_latex

# A tiny but valid PNG (1x1 transparent pixel).
TINY_PNG = bytes.fromhex(
    "89504e470d0a1a0a0000000d494844520000000100000001080600000"
    "01f15c4890000000d4944415478da63fcffffff7f000905fe02fedccc"
    "59e70000000049454e44ae426082"
)
TINY_PNG_B64 = __import__("base64").b64encode(TINY_PNG).decode("ascii")

_WORDS = (
    "orbit lattice spectrum kernel flux gradient tensor manifold basis "
    "operator measure metric norm field curve bundle section sheaf functor "
    "limit series sum parity residue module ideal prime order group ring"
).split()

_MATH_SNIPPETS = (
    "x + y = z", "E = m c^2", "\\frac{a}{b} + c", "\\alpha + \\beta",
    "\\sum k^2", "p_i + q_j", "\\sqrt{u} - v", "a \\cdot b \\leq c",
)


def _sentence(rng: random.Random) -> str:
    words = [rng.choice(_WORDS) for _ in range(rng.randint(5, 11))]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def make_latex_source(seed: int) -> str:
    rng = random.Random(seed)
    parts = ["\\documentclass{article}", "\\begin{document}"]
    for index in range(rng.randint(3, 5)):
        sentences = [_sentence(rng) for _ in range(rng.randint(2, 4))]
        if index == 0 or rng.random() < 0.8:
            sentences.insert(
                rng.randrange(len(sentences) + 1),
                f"Consider ${rng.choice(_MATH_SNIPPETS)}$ here.",
            )
        parts.append(" ".join(sentences))
        parts.append("")
    parts.append("\\includegraphics{fig1.png}")
    parts.append("")
    parts.append(_sentence(rng))
    parts.append("\\end{document}")
    return "\n".join(parts)


def make_html_source(seed: int) -> str:
    rng = random.Random(seed)
    parts = ["<html><body>"]
    for index in range(rng.randint(3, 5)):
        sentences = [_sentence(rng) for _ in range(rng.randint(2, 4))]
        body = " ".join(sentences)
        if index == 0 or rng.random() < 0.8:
            body += " <math><mi>x</mi><mo>+</mo><mn>2</mn></math>"
        parts.append(f"<p>{body}</p>")
    parts.append(f'<p>Shown: <img src="data:image/png;base64,{TINY_PNG_B64}"></p>')
    parts.append(f"<p>{_sentence(rng)}</p>")
    parts.append("</body></html>")
    return "\n".join(parts)


def png_resolver(path: str):
    return TINY_PNG, "image/png"


def corpus_documents(n_latex: int = 10, n_html: int = 10) -> list[NormalizedDocument]:
    docs = []
    for seed in range(n_latex):
        document = parse_latex(make_latex_source(seed), f"doc{seed}.tex", png_resolver)
        docs.append(normalize(document))
    for seed in range(n_html):
        document = parse_html(make_html_source(100 + seed), f"doc{seed}.html")
        docs.append(normalize(document))
    return docs


@pytest.fixture(scope="session")
def corpus() -> list[NormalizedDocument]:
    return corpus_documents()


class RenderedTextReconstructor:
    """Independent oracle: rebuild plain text from rendered HTML by
    concatenating text runs and substituting placeholders at formula/image
    elements."""

    def __init__(self):
        from html.parser import HTMLParser

        outer = self

        class _Parser(HTMLParser):
            def __init__(self):
                super().__init__(convert_charrefs=True)
                self.in_text_run = 0
                self.math_depth = 0

            def handle_starttag(self, tag, attrs):
                attrs = dict(attrs)
                if tag == "math":
                    self.math_depth += 1
                elif self.math_depth == 0 and tag == "span":
                    cls = attrs.get("class", "")
                    if cls == "t":
                        self.in_text_run += 1
                    elif cls == "formula":
                        outer.pieces.append(
                            f"⟪{attrs['data-formula-id']}⟫"
                        )
                elif self.math_depth == 0 and tag == "img":
                    outer.pieces.append(f"⟪{attrs['data-image-id']}⟫")

            def handle_endtag(self, tag):
                if tag == "math":
                    self.math_depth -= 1
                elif tag == "span" and self.math_depth == 0 and self.in_text_run:
                    self.in_text_run -= 1

            def handle_data(self, data):
                if self.in_text_run and not self.math_depth:
                    outer.pieces.append(data)

        self.pieces: list[str] = []
        self._parser = _Parser()

    def feed(self, html: str) -> None:
        self._parser.feed(html)

    def text(self) -> str:
        return "".join(self.pieces)


def reconstruct_plain_text(html: str) -> str:
    parser = RenderedTextReconstructor()
    parser.feed(html)
    return parser.text()
