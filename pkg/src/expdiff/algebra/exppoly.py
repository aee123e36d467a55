"""
exppoly.py
==========
Polynomials in z over the scalar field (:class:`ZPoly`) and exponential
polynomials  Σ_j P_j(z)·exp(Q_j(z))  (:class:`ExpPoly`).

Canonical form of an ExpPoly:
  * every exponent has exp-free coefficients and zero constant term
    (the constant is folded into the coefficient as exp(c));
  * exponents are pairwise distinct;
  * no coefficient is the zero polynomial.

Under that form the functions exp(Q_j) are linearly independent over the
polynomials, so ExpPoly equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from expdiff.algebra.scalars import Scalar, ScalarDomain
from expdiff.errors import DomainMismatch, InvalidShift, UnsupportedExponent, ZeroFunction

__all__ = ["ZPoly", "ExpPoly", "ExpOrder"]

Number = Union[int, Fraction]


class ZPoly:
    """Polynomial Σ c_k z^k with Scalar coefficients, trailing zeros trimmed."""

    __slots__ = ("domain", "coeffs")

    def __init__(self, domain: ScalarDomain, coeffs: Iterable[Union[Scalar, Number]] = ()) -> None:
        cs = [domain.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.domain = domain
        self.coeffs: Tuple[Scalar, ...] = tuple(cs)

    # ── constructors ──────────────────────────────────────────────────────────

    @classmethod
    def z(cls, domain: ScalarDomain) -> "ZPoly":
        return cls(domain, [domain.zero, domain.one])

    @classmethod
    def constant(cls, domain: ScalarDomain, value: Union[Scalar, Number]) -> "ZPoly":
        return cls(domain, [value])

    @classmethod
    def monomial(cls, domain: ScalarDomain, coeff: Union[Scalar, Number], k: int) -> "ZPoly":
        return cls(domain, [domain.zero] * k + [domain.coerce(coeff)])

    # ── inspection ────────────────────────────────────────────────────────────

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Scalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.domain.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_plain(self) -> bool:
        return all(c.is_plain() for c in self.coeffs)

    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else self.domain.zero

    def without_constant(self) -> "ZPoly":
        return ZPoly(self.domain, [self.domain.zero] + list(self.coeffs[1:]))

    # ── arithmetic ────────────────────────────────────────────────────────────

    def _lift(self, other) -> "ZPoly":
        if isinstance(other, ZPoly):
            if other.domain is not self.domain:
                raise DomainMismatch()
            return other
        return ZPoly(self.domain, [self.domain.coerce(other)])

    def __add__(self, other) -> "ZPoly":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return ZPoly(self.domain, [self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "ZPoly":
        return ZPoly(self.domain, [-c for c in self.coeffs])

    def __sub__(self, other) -> "ZPoly":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ZPoly":
        return (-self) + other

    def __mul__(self, other) -> "ZPoly":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZPoly(self.domain)
        out = [self.domain.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return ZPoly(self.domain, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ZPoly":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = ZPoly.constant(self.domain, 1)
        for _ in range(k):
            result = result * self
        return result

    def derivative(self) -> "ZPoly":
        return ZPoly(self.domain, [k * c for k, c in enumerate(self.coeffs)][1:])

    def shift(self, eta: Union[Scalar, Number]) -> "ZPoly":
        """P(z + eta), by Horner's scheme."""
        eta = self.domain.coerce(eta)
        step = ZPoly(self.domain, [eta, self.domain.one])
        result = ZPoly(self.domain)
        for c in reversed(self.coeffs):
            result = result * step + c
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self.domain is other.domain and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"ZPoly({list(self.coeffs)!r})"


@dataclass(frozen=True)
class ExpOrder:
    """Order and hyper-order of an entire function."""

    order: int
    hyper_order: int = 0


class ExpPoly:
    """
    Exponential polynomial Σ P_j(z)·exp(Q_j(z)) in canonical form.

    Terms are stored as ``{exponent: coefficient}``; build instances with
    the classmethod constructors, never from a raw dict.
    """

    __slots__ = ("domain", "_terms")

    def __init__(self, domain: ScalarDomain, terms: Dict[ZPoly, ZPoly]) -> None:
        self.domain = domain
        self._terms = terms

    @classmethod
    def _build(cls, domain: ScalarDomain, pairs: Iterable[Tuple[ZPoly, ZPoly]]) -> "ExpPoly":
        acc: Dict[ZPoly, ZPoly] = {}
        for exponent, coeff in pairs:
            if exponent.domain is not domain or coeff.domain is not domain:
                raise DomainMismatch()
            if coeff.is_zero():
                continue
            if not exponent.is_plain():
                raise UnsupportedExponent(repr(exponent))
            kappa = exponent[0]
            if not kappa.is_zero():
                coeff = coeff * domain.exp(kappa)
                exponent = exponent.without_constant()
            acc[exponent] = acc[exponent] + coeff if exponent in acc else coeff
        return cls(domain, {q: p for q, p in acc.items() if not p.is_zero()})

    # ── constructors ──────────────────────────────────────────────────────────

    @classmethod
    def zero(cls, domain: ScalarDomain) -> "ExpPoly":
        return cls(domain, {})

    @classmethod
    def polynomial(cls, p: ZPoly) -> "ExpPoly":
        return cls._build(p.domain, [(ZPoly(p.domain), p)])

    @classmethod
    def constant(cls, domain: ScalarDomain, value: Union[Scalar, Number]) -> "ExpPoly":
        return cls.polynomial(ZPoly.constant(domain, value))

    @classmethod
    def z(cls, domain: ScalarDomain) -> "ExpPoly":
        return cls.polynomial(ZPoly.z(domain))

    @classmethod
    def term(cls, coeff: ZPoly, exponent: ZPoly) -> "ExpPoly":
        """coeff(z)·exp(exponent(z))."""
        return cls._build(coeff.domain, [(exponent, coeff)])

    @classmethod
    def exp(cls, exponent: ZPoly) -> "ExpPoly":
        return cls.term(ZPoly.constant(exponent.domain, 1), exponent)

    # ── inspection ────────────────────────────────────────────────────────────

    def items(self) -> List[Tuple[ZPoly, ZPoly]]:
        """(exponent, coefficient) pairs."""
        return list(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_polynomial(self) -> bool:
        return all(q.is_zero() for q in self._terms)

    def polynomial_part(self) -> ZPoly:
        return self._terms.get(ZPoly(self.domain), ZPoly(self.domain))

    def as_polynomial(self) -> ZPoly:
        if not self.is_polynomial():
            raise ValueError("exponential polynomial has exponential terms")
        return self.polynomial_part()

    def order(self) -> ExpOrder:
        """Order = highest exponent degree; hyper-order is always 0."""
        if not self._terms:
            raise ZeroFunction("order")
        return ExpOrder(max(max(q.degree, 0) for q in self._terms))

    # ── arithmetic ────────────────────────────────────────────────────────────

    def _lift(self, other) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            if other.domain is not self.domain:
                raise DomainMismatch()
            return other
        if isinstance(other, ZPoly):
            return ExpPoly.polynomial(self._same(other))
        return ExpPoly.constant(self.domain, self.domain.coerce(other))

    def _same(self, p: ZPoly) -> ZPoly:
        if p.domain is not self.domain:
            raise DomainMismatch()
        return p

    def __add__(self, other) -> "ExpPoly":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return ExpPoly._build(self.domain, [*self._terms.items(), *other._terms.items()])

    __radd__ = __add__

    def __neg__(self) -> "ExpPoly":
        return ExpPoly(self.domain, {q: -p for q, p in self._terms.items()})

    def __sub__(self, other) -> "ExpPoly":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ExpPoly":
        return (-self) + other

    def __mul__(self, other) -> "ExpPoly":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        pairs = [
            (q1 + q2, p1 * p2)
            for q1, p1 in self._terms.items()
            for q2, p2 in other._terms.items()
        ]
        return ExpPoly._build(self.domain, pairs)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ExpPoly":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = ExpPoly.constant(self.domain, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self) -> "ExpPoly":
        """(P·e^Q)' = (P' + P·Q')·e^Q, termwise."""
        return ExpPoly._build(
            self.domain,
            [(q, p.derivative() + p * q.derivative()) for q, p in self._terms.items()],
        )

    def nth_derivative(self, k: int) -> "ExpPoly":
        out = self
        for _ in range(k):
            out = out.derivative()
        return out

    def shift(self, eta: Union[Scalar, Number]) -> "ExpPoly":
        """
        f(z + eta).  The constant of Q(z + eta) becomes a factor exp(·) on
        the coefficient, so eta has to be exp-free.
        """
        eta = self.domain.coerce(eta)
        if not eta.is_plain():
            raise InvalidShift(repr(eta))
        if eta.is_zero():
            return self
        return ExpPoly._build(
            self.domain,
            [(q.shift(eta), p.shift(eta)) for q, p in self._terms.items()],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.domain is other.domain and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"ExpPoly({self._terms!r})"
