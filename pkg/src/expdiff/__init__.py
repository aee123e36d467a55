"""
expdiff: exact engine for the differential-difference equation

    f(z)^n + L(z, f) = q(z)·e^{p(z)}

over exponential polynomials, with a numeric zero-counting companion.
"""

from expdiff.algebra import ExpPoly, LinOp, OpTerm, Scalar, ScalarDomain, ZPoly
from expdiff.equations import Equation, build_pq, classify, residual, verify

__version__ = "0.1.0"

__all__ = [
    "ScalarDomain",
    "Scalar",
    "ZPoly",
    "ExpPoly",
    "OpTerm",
    "LinOp",
    "Equation",
    "residual",
    "verify",
    "classify",
    "build_pq",
]
