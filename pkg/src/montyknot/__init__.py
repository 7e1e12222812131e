"""Exact-arithmetic classification toolkit for Montesinos, pretzel, and two-bridge knots."""

from .errors import MontyknotError
from .lspace_pipeline import classify, enumerate_even, enumerate_odd, selftest
from .notation import parse, print_expr

__all__ = [
    "MontyknotError",
    "classify",
    "enumerate_even",
    "enumerate_odd",
    "parse",
    "print_expr",
    "selftest",
]
__version__ = "0.1.0"
