"""Exception types shared across the engine."""

from __future__ import annotations


class ReuseAnnotatorError(Exception):
    """Base class for all errors raised by this package."""


class InvalidIdError(ReuseAnnotatorError):
    """A formula/image id does not match ``F<n>`` / ``I<n>``."""


class InvalidSpanError(ReuseAnnotatorError):
    """A span does not fit inside the document it indexes."""


class SpanNotFoundError(ReuseAnnotatorError):
    """Selected text has no occurrence in a document's plain text.

    ``closest_offset``/``closest_prefix_len`` describe the position with the
    longest common prefix against the needle, for diagnostics.
    """

    def __init__(self, message: str, closest_offset: int, closest_prefix_len: int):
        super().__init__(message)
        self.closest_offset = closest_offset
        self.closest_prefix_len = closest_prefix_len


class InvalidArgumentError(ReuseAnnotatorError):
    """A caller-supplied argument is outside the accepted domain."""


class NotFoundError(ReuseAnnotatorError):
    """A referenced document or case does not exist."""


class MathMLError(ReuseAnnotatorError):
    """MathML markup could not be parsed."""


class UnsupportedMathError(ReuseAnnotatorError):
    """A LaTeX math token falls outside the supported grammar."""

    def __init__(self, token: str, offset: int):
        super().__init__(f"unsupported math token {token!r} at offset {offset}")
        self.token = token
        self.offset = offset


class UnsupportedFormatError(ReuseAnnotatorError):
    """The upload format is not accepted in the current configuration."""


class ConversionFailedError(ReuseAnnotatorError):
    """An external converter failed or produced unusable output."""

    def __init__(self, message: str, diagnostics: str = ""):
        super().__init__(message)
        self.diagnostics = diagnostics


class StoreError(ReuseAnnotatorError):
    """The persistent store could not complete an operation."""
