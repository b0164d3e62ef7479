"""Sparsity-aware review stream augmentation: Python bindings for the C++ core."""

from ._core import (
    ReviewRecord,
    Session,
    parse_review_line,
    richness,
    tokenize,
)

__all__ = [
    "ReviewRecord",
    "Session",
    "parse_review_line",
    "richness",
    "tokenize",
]
