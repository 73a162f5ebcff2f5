"""Exact Yang-Baxter cohomology, enhanced operators and the knot invariants built from them."""

from .braid import BraidWord, parse_braid, trace_invariant
from .bracket import MorseWord, parse_morse
from .eybo import DeformedEybo, Eybo, Report
from .ring import QQ, QQi, ZZ, Ring, RingElement, parse, render
from .tensor import TensorOperator

__all__ = [
    "BraidWord",
    "DeformedEybo",
    "Eybo",
    "MorseWord",
    "QQ",
    "QQi",
    "Report",
    "Ring",
    "RingElement",
    "TensorOperator",
    "ZZ",
    "parse",
    "parse_braid",
    "parse_morse",
    "render",
    "trace_invariant",
]
