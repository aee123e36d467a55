"""
scalars.py
==========
Exact constants of the form

    Σ_k  r_k · exp(c_k)

where every coefficient r_k and every exponent c_k lives in the rational
function field Q(i)(pi, params...) built by sympy over the Gaussian rationals
``QQ_I`` with a graded-lexicographic monomial order.

Zero testing is structural: pi, the declared parameters and exponentials of
distinct (reduced) arguments are taken as algebraically independent, so a
Scalar is zero exactly when it has no terms.

Only exp(i·pi·s) with s an integer or half-integer is folded into the
coefficient (as ±1, ±i).  Other rational s stay in the exponent, and any
arithmetic that has to merge such a term with another one raises
:class:`~expdiff.errors.UnsupportedRootOfUnity`.
"""

from __future__ import annotations

import logging
import math
import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.polys.domains import QQ_I
from sympy.polys.fields import FracElement, field
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import CoercionFailed, DomainError
from sympy.polys.rings import PolyElement

from expdiff.errors import (
    DomainMismatch,
    NotAPerfectSquare,
    NotInvertible,
    UnsupportedExponent,
    UnsupportedRootOfUnity,
)

__all__ = [
    "ScalarDomain",
    "Scalar",
    "ExpArg",
    "reduce_pi",
    "frac_key",
    "gauss_sqrt",
    "RESERVED_NAMES",
]

logger = logging.getLogger(__name__)

ExpArg = FracElement
FracKey = Tuple[tuple, tuple]
Number = Union[int, Fraction]

RESERVED_NAMES = frozenset({"pi", "i", "z", "f", "exp"})
_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


# ── Gaussian rational helpers ─────────────────────────────────────────────────

def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _gauss(re_part: Number, im_part: Number = 0):
    re_part, im_part = Fraction(re_part), Fraction(im_part)
    value = sympy.Rational(re_part.numerator, re_part.denominator) + sympy.I * sympy.Rational(
        im_part.numerator, im_part.denominator
    )
    return QQ_I.from_sympy(value)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def gauss_sqrt(c):
    """Square root of a Gaussian rational inside Q(i), or ``None``."""
    a, b = _to_fraction(c.x), _to_fraction(c.y)
    if b == 0:
        if a >= 0:
            r = _rational_sqrt(a)
            return None if r is None else _gauss(r, 0)
        r = _rational_sqrt(-a)
        return None if r is None else _gauss(0, r)
    m = _rational_sqrt(a * a + b * b)
    if m is None:
        return None
    x = _rational_sqrt((a + m) / 2)
    if not x:
        return None
    return _gauss(x, b / (2 * x))


def frac_key(x: FracElement) -> FracKey:
    """Hashable canonical key of a rational function: denominator made monic."""
    numer, denom = x.numer, x.denom
    lc = denom.LC
    if lc != denom.ring.domain.one:
        numer = numer.quo_ground(lc)
        denom = denom.quo_ground(lc)
    return tuple(numer.terms()), tuple(denom.terms())


def _poly_sqrt(poly: PolyElement) -> Optional[PolyElement]:
    ring = poly.ring
    if len(poly) == 1:
        (monom, coeff), = poly.items()
        if any(e % 2 for e in monom):
            return None
        root = gauss_sqrt(coeff)
        return None if root is None else ring.from_dict({tuple(e // 2 for e in monom): root})
    try:
        coeff, factors = poly.sqf_list()
    except (NotImplementedError, DomainError, CoercionFailed):
        logger.debug("square-free factorisation failed for %s", poly)
        return None
    if any(k % 2 for _, k in factors):
        return None
    lead = gauss_sqrt(coeff)
    if lead is None:
        return None
    root = ring.ground_new(lead)
    for factor, k in factors:
        root = root * factor ** (k // 2)
    return root


# ── Domain ────────────────────────────────────────────────────────────────────

class ScalarDomain:
    """
    Constant field of one session: Q(i)(pi, *params) plus formal exponentials.

    The parameter list is fixed at construction.  Every Scalar, ZPoly, ExpPoly
    and operator keeps a reference to its domain and refuses to mix with
    objects from another one.

    Args:
        params: declared parameter names, e.g. ``("eta",)``.
    """

    def __init__(self, params: Sequence[str] = ()) -> None:
        params = tuple(params)
        seen = set()
        for name in params:
            if not _IDENTIFIER.match(name):
                raise ValueError(f"invalid parameter name: {name!r}")
            if name in RESERVED_NAMES:
                raise ValueError(f"'{name}' is reserved and cannot be a parameter")
            if name in seen:
                raise ValueError(f"duplicate parameter: {name!r}")
            seen.add(name)

        self.params: Tuple[str, ...] = params
        self.names: Tuple[str, ...] = ("pi",) + params
        self.field, *gens = field(",".join(self.names), QQ_I, grlex)
        self.ring = self.field.ring
        self._gens = dict(zip(self.names, gens))
        self._pi_monom = (1,) + (0,) * len(params)
        imag = QQ_I.from_sympy(sympy.I)
        self._units = (QQ_I.one, imag, -QQ_I.one, -imag)

        self.zero = Scalar(self, {})
        self.one = self.plain(self.field.one)

    def __repr__(self) -> str:
        return f"ScalarDomain(params={list(self.params)})"

    # ── constructors ──────────────────────────────────────────────────────────

    def plain(self, value: FracElement) -> "Scalar":
        """Exp-free constant with the given rational-function value."""
        return Scalar._build(self, [(self.field.zero, value)])

    def rational(self, re_part: Number, im_part: Number = 0) -> "Scalar":
        return self.plain(self.field.ground_new(_gauss(re_part, im_part)))

    def gaussian(self, value) -> "Scalar":
        """Lift a ``QQ_I`` element."""
        return self.plain(self.field.ground_new(value))

    @property
    def pi(self) -> "Scalar":
        return self.plain(self._gens["pi"])

    @property
    def i(self) -> "Scalar":
        return self.rational(0, 1)

    def param(self, name: str) -> "Scalar":
        if name not in self.params:
            raise KeyError(name)
        return self.plain(self._gens[name])

    def exp(self, arg: "Scalar") -> "Scalar":
        """exp(arg) for an exp-free constant ``arg``."""
        arg = self.coerce(arg)
        if not arg.is_plain():
            raise UnsupportedExponent(repr(arg))
        return Scalar._build(self, [(arg.plain_value(), self.field.one)])

    def coerce(self, value: Union["Scalar", Number]) -> "Scalar":
        if isinstance(value, Scalar):
            if value.domain is not self:
                raise DomainMismatch()
            return value
        if isinstance(value, (int, Fraction)):
            return self.rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Scalar")

    # ── pi handling ───────────────────────────────────────────────────────────

    def _pi_imaginary(self, arg: ExpArg) -> Optional[Tuple[PolyElement, Fraction]]:
        """Exponent as a polynomial and the s in its i·pi·s part, if any."""
        denom = arg.denom
        if not denom.is_ground:
            return None
        poly = arg.numer.quo_ground(denom.LC)
        c = poly.get(self._pi_monom)
        if c is None or c.y == 0:
            return None
        return poly, _to_fraction(c.y)

    def is_unreduced(self, arg: ExpArg) -> bool:
        """True when ``arg`` still carries an i·pi·s part (s not a half-integer)."""
        return self._pi_imaginary(arg) is not None


def reduce_pi(domain: ScalarDomain, arg: ExpArg, coeff: FracElement) -> Tuple[ExpArg, FracElement]:
    """
    Fold exp(i·pi·s) into the coefficient when 2s is an integer.

    Returns the (possibly) reduced exponent and the adjusted coefficient.
    Exponents with other rational s come back unchanged; they are rejected
    later, when a sum has to compare them with other terms.
    """
    part = domain._pi_imaginary(arg)
    if part is None:
        return arg, coeff
    poly, s = part
    twice = 2 * s
    if twice.denominator != 1:
        return arg, coeff

    monom = domain._pi_monom
    real = _gauss(_to_fraction(poly[monom].x), 0)
    terms = {m: c for m, c in poly.items() if m != monom}
    if real:
        terms[monom] = real
    reduced = domain.field(domain.ring.from_dict(terms))
    unit = domain._units[twice.numerator % 4]
    return reduced, coeff * domain.field.ground_new(unit)


# ── Scalar ────────────────────────────────────────────────────────────────────

class Scalar:
    """
    Immutable exact constant Σ r_k·exp(c_k) in canonical form.

    Use the :class:`ScalarDomain` constructors rather than calling this
    directly.  Arithmetic operators return new canonical Scalars; ``==`` is
    structural equality of canonical forms.
    """

    __slots__ = ("domain", "_terms", "_key")

    def __init__(self, domain: ScalarDomain, terms: Dict[FracKey, Tuple[ExpArg, FracElement]]) -> None:
        self.domain = domain
        self._terms = terms
        self._key = frozenset((k, frac_key(c)) for k, (_, c) in terms.items())

    @classmethod
    def _build(cls, domain: ScalarDomain, pairs: Iterable[Tuple[ExpArg, FracElement]]) -> "Scalar":
        acc: Dict[FracKey, Tuple[ExpArg, FracElement]] = {}
        for arg, coeff in pairs:
            if not coeff:
                continue
            arg, coeff = reduce_pi(domain, arg, coeff)
            key = frac_key(arg)
            if key in acc:
                first, total = acc[key]
                acc[key] = (first, total + coeff)
            else:
                acc[key] = (arg, coeff)
        result = cls(domain, {k: v for k, v in acc.items() if v[1]})
        result._check_mergeable()
        return result

    # ── inspection ────────────────────────────────────────────────────────────

    def terms(self) -> List[Tuple[ExpArg, FracElement]]:
        """(exponent, coefficient) pairs."""
        return list(self._terms.values())

    def __iter__(self) -> Iterator[Tuple[ExpArg, FracElement]]:
        return iter(self._terms.values())

    def __len__(self) -> int:
        return len(self._terms)

    def is_plain(self) -> bool:
        """True for exp-free constants (including zero)."""
        if not self._terms:
            return True
        if len(self._terms) > 1:
            return False
        (arg, _), = self._terms.values()
        return not arg

    def plain_value(self) -> FracElement:
        if not self.is_plain():
            raise UnsupportedExponent(repr(self))
        if not self._terms:
            return self.domain.field.zero
        (_, coeff), = self._terms.values()
        return coeff

    def has_unreduced_root(self) -> bool:
        return any(self.domain.is_unreduced(arg) for arg, _ in self._terms.values())

    def _check_mergeable(self) -> None:
        """An unreduced root of unity may only stand alone; next to another term it is undecidable."""
        if len(self._terms) < 2:
            return
        for arg, _ in self._terms.values():
            if self.domain.is_unreduced(arg):
                raise UnsupportedRootOfUnity(str(arg.as_expr()))

    def is_zero(self) -> bool:
        """
        Zero test under the independence assumption: no terms left.

        A sum that still holds an unreduced root of unity next to another
        term cannot be decided coefficientwise and raises.
        """
        self._check_mergeable()
        return not self._terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    # ── arithmetic ────────────────────────────────────────────────────────────

    def _other(self, other) -> "Scalar":
        return self.domain.coerce(other)

    def __add__(self, other) -> "Scalar":
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        return Scalar._build(self.domain, [*self._terms.values(), *other._terms.values()])

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(self.domain, {k: (a, -c) for k, (a, c) in self._terms.items()})

    def __sub__(self, other) -> "Scalar":
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        pairs = [
            (a1 + a2, c1 * c2)
            for a1, c1 in self._terms.values()
            for a2, c2 in other._terms.values()
        ]
        return Scalar._build(self.domain, pairs)

    __rmul__ = __mul__

    def invert(self) -> "Scalar":
        """r·exp(c) -> r⁻¹·exp(−c); multi-term sums are not invertible here."""
        if len(self._terms) != 1:
            reason = "zero" if not self._terms else "sum of several exponential terms"
            raise NotInvertible(repr(self), reason)
        (arg, coeff), = self._terms.values()
        return Scalar._build(self.domain, [(-arg, self.domain.field.one / coeff)])

    def __truediv__(self, other) -> "Scalar":
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other) -> "Scalar":
        return self._other(other) * self.invert()

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.invert()
        result = self.domain.one
        for _ in range(abs(k)):
            result = result * base
        return result

    def sqrt(self) -> Tuple["Scalar", "Scalar"]:
        """
        Both square roots ``(s, -s)`` with ``s*s == self`` exactly.

        Works for r·exp(c) where r is a square in Q(i)(pi, params).
        """
        if not self._terms:
            return self, self
        if len(self._terms) != 1:
            raise NotAPerfectSquare(repr(self))
        (arg, coeff), = self._terms.values()
        numer, denom = _poly_sqrt(coeff.numer), _poly_sqrt(coeff.denom)
        if numer is None or denom is None:
            raise NotAPerfectSquare(repr(self))
        field_ = self.domain.field
        half = arg * field_.ground_new(_gauss(Fraction(1, 2)))
        root = Scalar._build(self.domain, [(half, field_(numer) / field_(denom))])
        if root * root != self:
            raise NotAPerfectSquare(repr(self))
        return root, -root

    # ── equality ──────────────────────────────────────────────────────────────

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.domain.rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.domain is other.domain and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        if not self._terms:
            return "Scalar(0)"
        parts = []
        for arg, coeff in self._terms.values():
            c = coeff.as_expr()
            parts.append(f"({c})" if not arg else f"({c})*exp({arg.as_expr()})")
        return "Scalar(" + " + ".join(parts) + ")"
