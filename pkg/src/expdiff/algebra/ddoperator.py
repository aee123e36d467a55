"""
ddoperator.py
=============
Linear differential-difference operators

    L(z, f) = Σ_k a_k(z) · f^{(d_k)}(z + c_k)  +  v(z)

with exponential-polynomial coefficients a_k and inhomogeneous part v.

Two different zero notions are exposed: ``is_zero`` (every coefficient and
v vanish) and ``applied_is_zero`` (the composed function L(z, f(z)) vanishes
for one particular f).  They genuinely differ; see the operator
h·f(z+η) − η·e^η·h·f' + (η−1)·e^η·h·f, which kills z·e^z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from expdiff.algebra.exppoly import ExpPoly, ZPoly
from expdiff.algebra.scalars import Scalar, ScalarDomain
from expdiff.errors import DomainMismatch, InvalidShift

__all__ = ["OpTerm", "LinOp", "linear_combine"]

Multiplier = Union[ExpPoly, ZPoly, Scalar, int]


@dataclass(frozen=True)
class OpTerm:
    """One term ``coeff(z) · f^(dorder)(z + shift)``."""

    shift: Scalar
    dorder: int
    coeff: ExpPoly

    @property
    def key(self) -> Tuple[Scalar, int]:
        return self.shift, self.dorder


class LinOp:
    """
    Immutable linear differential-difference operator in canonical form:
    one term per (shift, dorder), no zero coefficients.

    Args:
        domain: scalar domain shared by every coefficient.
        terms:  iterable of :class:`OpTerm`; duplicates are merged.
        inhom:  the f-free part v(z) (defaults to 0).
    """

    def __init__(
        self,
        domain: ScalarDomain,
        terms: Iterable[OpTerm] = (),
        inhom: Optional[ExpPoly] = None,
    ) -> None:
        merged: Dict[Tuple[Scalar, int], ExpPoly] = {}
        for term in terms:
            if term.coeff.domain is not domain or term.shift.domain is not domain:
                raise DomainMismatch()
            if not term.shift.is_plain():
                raise InvalidShift(repr(term.shift))
            if term.dorder < 0:
                raise ValueError(f"negative derivative order {term.dorder}")
            key = term.key
            merged[key] = merged[key] + term.coeff if key in merged else term.coeff

        self.domain = domain
        self.terms: Tuple[OpTerm, ...] = tuple(
            OpTerm(shift, dorder, coeff)
            for (shift, dorder), coeff in merged.items()
            if not coeff.is_zero()
        )
        inhom = inhom if inhom is not None else ExpPoly.zero(domain)
        if inhom.domain is not domain:
            raise DomainMismatch()
        self.inhom = inhom

    @classmethod
    def zero(cls, domain: ScalarDomain) -> "LinOp":
        return cls(domain)

    @classmethod
    def identity(cls, domain: ScalarDomain) -> "LinOp":
        """L(z, f) = f."""
        return cls(domain, [OpTerm(domain.zero, 0, ExpPoly.constant(domain, 1))])

    # ── inspection ────────────────────────────────────────────────────────────

    def coefficient(self, shift: Union[Scalar, int], dorder: int) -> ExpPoly:
        shift = self.domain.coerce(shift)
        for term in self.terms:
            if term.key == (shift, dorder):
                return term.coeff
        return ExpPoly.zero(self.domain)

    def homogeneous(self) -> "LinOp":
        return LinOp(self.domain, self.terms)

    def is_zero(self) -> bool:
        """Operator-level vanishing: no terms and v ≡ 0."""
        return not self.terms and self.inhom.is_zero()

    def max_dorder(self) -> int:
        return max((t.dorder for t in self.terms), default=0)

    # ── evaluation ────────────────────────────────────────────────────────────

    def apply(self, f: ExpPoly) -> ExpPoly:
        """L(z, f(z)) as an exponential polynomial."""
        if f.domain is not self.domain:
            raise DomainMismatch()
        derivatives: List[ExpPoly] = [f]
        total = self.inhom
        for term in self.terms:
            while len(derivatives) <= term.dorder:
                derivatives.append(derivatives[-1].derivative())
            total = total + term.coeff * derivatives[term.dorder].shift(term.shift)
        return total

    def applied_is_zero(self, f: ExpPoly) -> bool:
        return self.apply(f).is_zero()

    # ── transforms ────────────────────────────────────────────────────────────

    def derivative(self) -> "LinOp":
        """
        Operator L' with L'(z, f) = d/dz [L(z, f(z))]:
        a·f^{(k)}(z+c)  ->  a'·f^{(k)}(z+c) + a·f^{(k+1)}(z+c).
        """
        terms: List[OpTerm] = []
        for t in self.terms:
            terms.append(OpTerm(t.shift, t.dorder, t.coeff.derivative()))
            terms.append(OpTerm(t.shift, t.dorder + 1, t.coeff))
        return LinOp(self.domain, terms, self.inhom.derivative())

    def scaled(self, alpha: Multiplier) -> "LinOp":
        alpha = _as_exppoly(self.domain, alpha)
        return LinOp(
            self.domain,
            [OpTerm(t.shift, t.dorder, alpha * t.coeff) for t in self.terms],
            alpha * self.inhom,
        )

    def __add__(self, other: "LinOp") -> "LinOp":
        if not isinstance(other, LinOp):
            return NotImplemented
        if other.domain is not self.domain:
            raise DomainMismatch()
        return LinOp(self.domain, self.terms + other.terms, self.inhom + other.inhom)

    def __neg__(self) -> "LinOp":
        return self.scaled(-1)

    def __sub__(self, other: "LinOp") -> "LinOp":
        if not isinstance(other, LinOp):
            return NotImplemented
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinOp):
            return NotImplemented
        return (
            self.domain is other.domain
            and {t.key: t.coeff for t in self.terms} == {t.key: t.coeff for t in other.terms}
            and self.inhom == other.inhom
        )

    def __hash__(self) -> int:
        return hash((frozenset((t.key, t.coeff) for t in self.terms), self.inhom))

    def __repr__(self) -> str:
        return f"LinOp(terms={list(self.terms)!r}, inhom={self.inhom!r})"


def _as_exppoly(domain: ScalarDomain, value: Multiplier) -> ExpPoly:
    if isinstance(value, ExpPoly):
        if value.domain is not domain:
            raise DomainMismatch()
        return value
    if isinstance(value, ZPoly):
        if value.domain is not domain:
            raise DomainMismatch()
        return ExpPoly.polynomial(value)
    return ExpPoly.constant(domain, domain.coerce(value))


def linear_combine(alpha: Multiplier, first: LinOp, beta: Multiplier, second: LinOp) -> LinOp:
    """alpha·L1 + beta·L2 with polynomial (or exponential-polynomial) multipliers."""
    if first.domain is not second.domain:
        raise DomainMismatch()
    return first.scaled(alpha) + second.scaled(beta)
