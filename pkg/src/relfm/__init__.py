"""Relative full-text indexing: FM-indexes stored as differences against a reference."""

from relfm.text import Alphabet, Text, load_text
from relfm.fm import FMIndex
from relfm.relative import RelativeIndex
from relfm.invariant import RelativeSample

__all__ = [
    "Alphabet",
    "Text",
    "load_text",
    "FMIndex",
    "RelativeIndex",
    "RelativeSample",
]

__version__ = "0.1.0"
