"""Presentation-MathML parsing and canonical serialization.

Canonical form: no whitespace between tags, attributes sorted by name,
namespace declarations dropped, text NFC-normalized with whitespace runs
collapsed.  Canonical output re-parses to the identical string (fixed point),
so stored MathML and fingerprints are reproducible.
"""

from __future__ import annotations

import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .errors import MathMLError

LEAF_TAGS = {"mi", "mo", "mn", "mtext", "ms"}
LAYOUT_TAGS = {
    "math", "mrow", "msup", "msub", "msubsup", "mfrac", "msqrt", "mroot",
    "mstyle", "mpadded", "mphantom", "mfenced", "menclose", "munder", "mover",
    "munderover", "mtable", "mtr", "mtd", "semantics",
}


@dataclass
class MathNode:
    """One MathML element: tag, sorted attributes, character data, children."""

    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    text: str = ""
    children: list["MathNode"] = field(default_factory=list)


def _clean_tag(tag: str) -> str:
    """Strip any XML namespace from a tag name."""
    if "}" in tag:
        tag = tag.rsplit("}", 1)[1]
    return tag.lower()


def _clean_text(text: str) -> str:
    return unicodedata.normalize("NFC", " ".join(text.split()))


def _from_etree(elem: ET.Element) -> MathNode:
    attrs = {
        k.rsplit("}", 1)[-1]: v
        for k, v in elem.attrib.items()
        if not k.startswith("xmlns") and "www.w3.org/2000/xmlns" not in k
    }
    texts = [elem.text or ""]
    children = []
    for child in elem:
        children.append(_from_etree(child))
        texts.append(child.tail or "")
    return MathNode(
        tag=_clean_tag(elem.tag),
        attrs=dict(sorted(attrs.items())),
        text=_clean_text("".join(texts)),
        children=children,
    )


def parse_mathml(source: str) -> MathNode:
    """Parse a MathML string into a node tree, or raise MathMLError."""
    try:
        root = ET.fromstring(source)
    except ET.ParseError as exc:
        raise MathMLError(f"malformed MathML: {exc}") from exc
    node = _from_etree(root)
    if node.tag != "math":
        raise MathMLError(f"root element is <{node.tag}>, expected <math>")
    return node


def _escape_text(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _escape_attr(value: str) -> str:
    return _escape_text(value).replace('"', "&quot;")


def serialize(node: MathNode) -> str:
    """Canonical serialization of a node tree."""
    attrs = "".join(
        f' {name}="{_escape_attr(value)}"' for name, value in sorted(node.attrs.items())
    )
    inner = _escape_text(node.text) + "".join(serialize(child) for child in node.children)
    if not inner:
        return f"<{node.tag}{attrs}/>"
    return f"<{node.tag}{attrs}>{inner}</{node.tag}>"


def canonicalize(source: str) -> str:
    """Parse and re-serialize MathML into its canonical form."""
    return serialize(parse_mathml(source))


def text_content(node: MathNode) -> str:
    """All character data of a subtree, left to right, space-joined."""
    parts = [node.text] if node.text else []
    parts.extend(p for child in node.children if (p := text_content(child)))
    return " ".join(parts)
