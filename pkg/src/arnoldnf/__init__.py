"""Exact classifier for plane curve singularity germs of low modality.

Given a polynomial over the rationals with an isolated critical point at
the origin, the package determines its equivalence class under right
equivalence (for corank at most 2 and modality at most 2) and computes a
normal form together with exact values of the moduli, working in radical
extension fields of Q throughout.
"""

from .classify import Result, classify
from .errors import ParseError, PipelineError, Rejection
from .poly import SparsePoly, parse_poly

__all__ = [
    "ParseError",
    "PipelineError",
    "Rejection",
    "Result",
    "SparsePoly",
    "classify",
    "parse_poly",
]
