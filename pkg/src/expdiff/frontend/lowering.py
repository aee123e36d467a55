"""
lowering.py
===========
Turn parsed expressions into canonical algebra objects.

An expression is lowered to a :class:`Form`, a sum

    const(z) + Σ a_k(z)·f^{(d_k)}(z + c_k) + Σ_n b_n(z)·f(z)^n

which is then narrowed to whatever the caller asked for: an ExpPoly, a
constant, a polynomial, an operator or a full equation.  Only products of
plain ``f`` with itself are accepted as nonlinear terms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

from expdiff.algebra.ddoperator import LinOp, OpTerm
from expdiff.algebra.exppoly import ExpPoly, ZPoly
from expdiff.algebra.scalars import RESERVED_NAMES, Scalar, ScalarDomain
from expdiff.equations.equation import Equation
from expdiff.errors import (
    InvalidEquation,
    InvalidShift,
    NonlinearTerm,
    NotInvertible,
    UndeclaredParameter,
    UnsupportedExponent,
)
from expdiff.frontend.parser import Ast, BinOp, ExpCall, FTerm, Name, Neg, Num, Pow
from expdiff.frontend.printer import format_exppoly, format_zpoly

__all__ = [
    "Session",
    "Form",
    "lower",
    "lower_expression",
    "lower_scalar",
    "lower_polynomial",
    "lower_operator",
    "lower_equation",
]

logger = logging.getLogger(__name__)

FKey = Tuple[Scalar, int]


@dataclass
class Session:
    """
    Parameters and constant bindings visible to expressions.

    Attributes:
        domain:   scalar domain holding the declared parameters.
        bindings: names bound to exact constants (``bindings eta = 2*pi*i``).
    """

    domain: ScalarDomain
    bindings: Dict[str, Scalar] = field(default_factory=dict)

    @classmethod
    def create(cls, params: Sequence[str] = ()) -> "Session":
        return cls(ScalarDomain(params))

    def bind(self, name: str, value: Scalar) -> None:
        if name in RESERVED_NAMES or name == "e":
            raise InvalidEquation(f"'{name}' is reserved and cannot be bound")
        if name in self.domain.params:
            raise InvalidEquation(f"'{name}' is a declared parameter and cannot also be bound")
        if name in self.bindings:
            raise InvalidEquation(f"'{name}' is bound twice")
        self.bindings[name] = self.domain.coerce(value)

    def resolve(self, node: Name) -> ExpPoly:
        domain = self.domain
        name = node.name
        if name == "z":
            return ExpPoly.z(domain)
        if name == "i":
            return ExpPoly.constant(domain, domain.i)
        if name == "pi":
            return ExpPoly.constant(domain, domain.pi)
        if name in domain.params:
            return ExpPoly.constant(domain, domain.param(name))
        if name in self.bindings:
            return ExpPoly.constant(domain, self.bindings[name])
        raise UndeclaredParameter(name, *node.pos)


class Form:
    """Expression that is at most polynomial in plain ``f`` and linear in shifted/derived ``f``."""

    __slots__ = ("domain", "const", "linear", "powers")

    def __init__(
        self,
        domain: ScalarDomain,
        const: Optional[ExpPoly] = None,
        linear: Optional[Mapping[FKey, ExpPoly]] = None,
        powers: Optional[Mapping[int, ExpPoly]] = None,
    ) -> None:
        self.domain = domain
        self.const = const if const is not None else ExpPoly.zero(domain)
        self.linear = {k: v for k, v in (linear or {}).items() if not v.is_zero()}
        self.powers = {k: v for k, v in (powers or {}).items() if not v.is_zero()}

    @classmethod
    def fterm(cls, domain: ScalarDomain, shift: Scalar, dorder: int) -> "Form":
        return cls(domain, linear={(shift, dorder): ExpPoly.constant(domain, 1)})

    def is_f_free(self) -> bool:
        return not self.linear and not self.powers

    def _monomial(self) -> Optional[Tuple[ExpPoly, int]]:
        """(coefficient, k) when the form is coefficient·f^k with plain f."""
        if not self.const.is_zero():
            return None
        plain = (self.domain.zero, 0)
        if not self.powers and set(self.linear) == {plain}:
            return self.linear[plain], 1
        if not self.linear and len(self.powers) == 1:
            (k, coeff), = self.powers.items()
            return coeff, k
        return None

    @staticmethod
    def _merge(left: Mapping, right: Mapping) -> Dict:
        out = dict(left)
        for key, value in right.items():
            out[key] = out[key] + value if key in out else value
        return out

    def __add__(self, other: "Form") -> "Form":
        return Form(
            self.domain,
            self.const + other.const,
            self._merge(self.linear, other.linear),
            self._merge(self.powers, other.powers),
        )

    def scale(self, factor: ExpPoly) -> "Form":
        return Form(
            self.domain,
            self.const * factor,
            {k: v * factor for k, v in self.linear.items()},
            {k: v * factor for k, v in self.powers.items()},
        )

    def __neg__(self) -> "Form":
        return self.scale(ExpPoly.constant(self.domain, -1))

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, other: "Form") -> "Form":
        if other.is_f_free():
            return self.scale(other.const)
        if self.is_f_free():
            return other.scale(self.const)
        left, right = self._monomial(), other._monomial()
        if left is None or right is None:
            raise NonlinearTerm("only powers of plain f may be multiplied together")
        return Form(self.domain, powers={left[1] + right[1]: left[0] * right[0]})

    def power(self, k: int) -> "Form":
        if self.is_f_free():
            if k >= 0:
                return Form(self.domain, self.const ** k)
            return Form(self.domain, _reciprocal(self.const) ** (-k))
        if k == 0:
            return Form(self.domain, ExpPoly.constant(self.domain, 1))
        mono = self._monomial()
        if mono is None or k < 0:
            raise NonlinearTerm("only plain f may be raised to a power")
        coeff, j = mono
        return Form(self.domain, powers={j * k: coeff ** k})


def _reciprocal(value: ExpPoly) -> ExpPoly:
    """1/value for a single term c·e^{Q} with constant c."""
    items = value.items()
    if len(items) != 1:
        reason = "zero" if not items else "division needs a single constant or exponential term"
        raise NotInvertible(format_exppoly(value), reason)
    (exponent, coeff), = items
    if coeff.degree != 0:
        raise NotInvertible(format_exppoly(value), "cannot divide by a polynomial in z")
    domain = value.domain
    return ExpPoly.term(ZPoly.constant(domain, coeff[0].invert()), -exponent)


def _shift_of(arg: Form, node: FTerm) -> Scalar:
    if not arg.is_f_free() or not arg.const.is_polynomial():
        raise InvalidShift("f(...)", "argument of f must be z + c")
    poly = arg.const.as_polynomial()
    if poly.degree != 1 or poly[1] != 1:
        raise InvalidShift(format_zpoly(poly), f"argument of f at {node.pos[0]}:{node.pos[1]} must be z + c")
    shift = poly[0]
    if not shift.is_plain():
        raise InvalidShift(format_zpoly(poly))
    return shift


def lower(tree: Ast, session: Session) -> Form:
    domain = session.domain
    if isinstance(tree, Num):
        return Form(domain, ExpPoly.constant(domain, tree.value))
    if isinstance(tree, Name):
        return Form(domain, session.resolve(tree))
    if isinstance(tree, Neg):
        return -lower(tree.operand, session)
    if isinstance(tree, BinOp):
        left, right = lower(tree.left, session), lower(tree.right, session)
        if tree.op == "+":
            return left + right
        if tree.op == "-":
            return left - right
        if tree.op == "*":
            return left * right
        if not right.is_f_free():
            raise NonlinearTerm("cannot divide by an expression in f")
        return left.scale(_reciprocal(right.const))
    if isinstance(tree, Pow):
        return lower(tree.base, session).power(tree.exponent)
    if isinstance(tree, ExpCall):
        inner = lower(tree.arg, session)
        if not inner.is_f_free():
            raise NonlinearTerm("exp(...) of an expression in f")
        if not inner.const.is_polynomial():
            raise UnsupportedExponent(format_exppoly(inner.const))
        return Form(domain, ExpPoly.exp(inner.const.as_polynomial()))
    if isinstance(tree, FTerm):
        shift = domain.zero if tree.arg is None else _shift_of(lower(tree.arg, session), tree)
        return Form.fterm(domain, shift, tree.dorder)
    raise TypeError(f"unknown node {tree!r}")


def _f_free(tree: Ast, session: Session, what: str) -> ExpPoly:
    form = lower(tree, session)
    if not form.is_f_free():
        raise InvalidEquation(f"{what} must not contain f")
    return form.const


def lower_expression(tree: Ast, session: Session) -> ExpPoly:
    return _f_free(tree, session, "expression")


def lower_polynomial(tree: Ast, session: Session, what: str = "value") -> ZPoly:
    value = _f_free(tree, session, what)
    if not value.is_polynomial():
        raise InvalidEquation(f"{what} must be a polynomial in z, got {format_exppoly(value)}")
    return value.as_polynomial()


def lower_scalar(tree: Ast, session: Session, what: str = "value") -> Scalar:
    poly = lower_polynomial(tree, session, what)
    if poly.degree > 0:
        raise InvalidEquation(f"{what} must be a constant, got {format_zpoly(poly)}")
    return poly[0]


def _operator(form: Form) -> LinOp:
    return LinOp(
        form.domain,
        [OpTerm(shift, dorder, coeff) for (shift, dorder), coeff in form.linear.items()],
        form.const,
    )


def lower_operator(tree: Ast, session: Session) -> LinOp:
    form = lower(tree, session)
    if form.powers:
        raise NonlinearTerm("L must be linear in f")
    return _operator(form)


def lower_equation(lhs: Ast, rhs: Ast, session: Session, note: str = "") -> Equation:
    """``f^n + L(z,f) = q(z)*exp(p(z))``."""
    left = lower(lhs, session)
    domain = session.domain
    if len(left.powers) != 1:
        raise InvalidEquation("the left-hand side needs exactly one power f^n with n >= 2")
    (n, lead), = left.powers.items()
    if lead != ExpPoly.constant(domain, 1):
        raise InvalidEquation(f"f^{n} must have coefficient 1, got {format_exppoly(lead)}")

    right = _f_free(rhs, session, "the right-hand side")
    items = right.items()
    if not items:
        q, p = ZPoly(domain), ZPoly(domain)
    elif len(items) == 1:
        (p, q), = items
    else:
        raise InvalidEquation("the right-hand side must be a single term q(z)*exp(p(z))")

    return Equation(n=n, L=_operator(Form(domain, left.const, left.linear)), q=q, p=p, note=note)
