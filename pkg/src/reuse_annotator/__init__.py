"""Content-reuse annotation engine for text, images, and math."""

from .document_model import (
    CaseContent,
    FormulaEntry,
    ImageEntry,
    NormalizedDocument,
    Span,
    normalize,
    render_placeholder,
    resolve_span,
    slice_content,
)
from .math_tokens import MathToken, TokenStream, identifier_stream, symbol_count, tokenize_mathml
from .similarity import detect
from .store import AnnotationCase, AnnotationStore, ContentTypeFlags, PairKey

__version__ = "0.1.0"

__all__ = [
    "AnnotationCase", "AnnotationStore", "CaseContent", "ContentTypeFlags",
    "FormulaEntry", "ImageEntry", "MathToken", "NormalizedDocument", "PairKey",
    "Span", "TokenStream", "detect", "identifier_stream", "normalize",
    "render_placeholder", "resolve_span", "slice_content", "symbol_count",
    "tokenize_mathml", "__version__",
]
