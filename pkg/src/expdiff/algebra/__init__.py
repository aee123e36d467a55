from expdiff.algebra.ddoperator import LinOp, OpTerm, linear_combine
from expdiff.algebra.exppoly import ExpOrder, ExpPoly, ZPoly
from expdiff.algebra.scalars import Scalar, ScalarDomain, reduce_pi

__all__ = [
    "ScalarDomain",
    "Scalar",
    "reduce_pi",
    "ZPoly",
    "ExpPoly",
    "ExpOrder",
    "OpTerm",
    "LinOp",
    "linear_combine",
]
