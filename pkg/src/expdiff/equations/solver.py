"""
solver.py
=========
Closed-form solving of

    f(z)^2 + g(z)·f(z+η) + h(z)·f'(z) + u(z)·f(z) + v(z) = b·e^{az}

with polynomial g, h, u, v and constants a, b, η (a·b·η ≠ 0).

Every finite-order entire solution with L(z, f) ≢ 0 has the form
f = c·e^{(a/2)z} + f0(z) where c² = b and

    f0 = −½ (e^{aη/2}·g + (a/2)·h + u),

provided f0 ≢ 0 and the consistency identity

    f0² + g·f0(z+η) + h·f0' + u·f0 + v ≡ 0

holds.  ``synthesize_v`` reads that identity backwards to manufacture v.

Also here: the polynomial particular solution of 2f' − a·f = H.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from expdiff.algebra.ddoperator import LinOp, OpTerm
from expdiff.algebra.exppoly import ExpPoly, ZPoly
from expdiff.algebra.scalars import Scalar, ScalarDomain
from expdiff.equations.equation import Equation, residual
from expdiff.errors import (
    DegenerateL,
    InvalidInstance,
    InvalidShift,
    NotAPerfectSquare,
    OutOfTheoremScope,
    SoundnessViolation,
)

__all__ = [
    "OdeInstance",
    "T31Instance",
    "SolutionTag",
    "SolutionSet",
    "Synthesis",
    "solve_linear_ode_poly",
    "particular_f0",
    "consistency_residual",
    "solve_theorem31",
    "synthesize_v",
    "instance_from_equation",
    "solve_equation",
]

logger = logging.getLogger(__name__)

F0_VANISHES = "f0_vanishes"
V_CONSISTENCY = "v_consistency"
C_SQUARED = "c_squared"


# ── 2f' − a f = H ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class OdeInstance:
    a: Scalar
    H: ZPoly

    def __post_init__(self) -> None:
        if self.a.is_zero():
            raise InvalidInstance("a must be nonzero")
        if self.H.is_zero():
            raise InvalidInstance("H must be a nonzero polynomial")


def solve_linear_ode_poly(inst: OdeInstance) -> ZPoly:
    """
    The polynomial solution of 2f' − a·f = H, of the same degree as H.

    Coefficients from the top down:
        b_n = −λ_n / a,   b_j = (2(j+1)·b_{j+1} − λ_j) / a.
    """
    a_inv = inst.a.invert()
    lam = inst.H.coeffs
    top = len(lam) - 1
    b = [inst.a.domain.zero] * (top + 1)
    b[top] = -lam[top] * a_inv
    for j in range(top - 1, -1, -1):
        b[j] = (2 * (j + 1) * b[j + 1] - lam[j]) * a_inv
    return ZPoly(inst.a.domain, b)


# ── the shifted quadratic ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class T31Instance:
    """
    f² + g·f(z+shift) + h·f' + u·f + v = b·e^{az}.

    ``v`` may be ``None`` for instances that only feed :func:`synthesize_v`.
    """

    g: ZPoly
    h: ZPoly
    u: ZPoly
    v: Optional[ZPoly]
    a: Scalar
    b: Scalar
    shift: Scalar

    def __post_init__(self) -> None:
        for name in ("a", "b", "shift"):
            if getattr(self, name).is_zero():
                raise InvalidInstance(f"{name} must be nonzero (a*b*shift != 0)")
        if not self.a.is_plain():
            raise InvalidInstance("a must be an exp-free constant so that exp(a*z) is representable")
        if not self.shift.is_plain():
            raise InvalidShift(repr(self.shift))

    @property
    def domain(self) -> ScalarDomain:
        return self.a.domain

    def operator(self) -> LinOp:
        domain = self.domain
        v = self.v if self.v is not None else ZPoly(domain)
        return LinOp(
            domain,
            [
                OpTerm(self.shift, 0, ExpPoly.polynomial(self.g)),
                OpTerm(domain.zero, 1, ExpPoly.polynomial(self.h)),
                OpTerm(domain.zero, 0, ExpPoly.polynomial(self.u)),
            ],
            ExpPoly.polynomial(v),
        )

    def equation(self) -> Equation:
        domain = self.domain
        return Equation(
            n=2,
            L=self.operator(),
            q=ZPoly.constant(domain, self.b),
            p=ZPoly(domain, [domain.zero, self.a]),
        )

    def half_exponential(self) -> ExpPoly:
        """e^{(a/2)z}."""
        domain = self.domain
        return ExpPoly.exp(ZPoly(domain, [domain.zero, self.a * Fraction(1, 2)]))


class SolutionTag(str, Enum):
    TWO_SOLUTIONS = "TwoSolutions"
    NO_FINITE_ORDER = "NoFiniteOrderSolution"


@dataclass(frozen=True)
class SolutionSet:
    """
    Attributes:
        tag:             TwoSolutions or NoFiniteOrderSolution.
        f0:              the polynomial part shared by both solutions.
        roots:           (c, −c) with c² = b; ``None`` when b has no exact root.
        solutions:       the two solutions, in the order of ``roots``.
        failed_identity: which requirement failed for NoFiniteOrderSolution.
        residual:        the nonzero left-over of the failed identity.
        constraint:      ``"c^2 = b"`` when the roots are left symbolic.
        diagnostics:     free-form explanation.
    """

    tag: SolutionTag
    f0: Optional[ZPoly] = None
    roots: Optional[Tuple[Scalar, Scalar]] = None
    solutions: Tuple[ExpPoly, ...] = ()
    failed_identity: Optional[str] = None
    residual: Optional[ExpPoly] = None
    constraint: Optional[str] = None
    diagnostics: str = ""

    @property
    def solved(self) -> bool:
        return self.tag is SolutionTag.TWO_SOLUTIONS


def particular_f0(g: ZPoly, h: ZPoly, u: ZPoly, a: Scalar, shift: Scalar) -> ZPoly:
    """f0 = −½ (e^{a·shift/2}·g + (a/2)·h + u)."""
    domain = a.domain
    half = Fraction(1, 2)
    growth = domain.exp(a * shift * half)
    return (g * growth + h * (a * half) + u) * domain.rational(Fraction(-1, 2))


def consistency_residual(g: ZPoly, h: ZPoly, u: ZPoly, v: ZPoly, shift: Scalar, f0: ZPoly) -> ZPoly:
    """f0² + g·f0(z+shift) + h·f0' + u·f0 + v."""
    return f0 * f0 + g * f0.shift(shift) + h * f0.derivative() + u * f0 + v


def _candidates(inst: T31Instance, f0: ZPoly, roots: Tuple[Scalar, Scalar]) -> Tuple[ExpPoly, ExpPoly]:
    wave = inst.half_exponential()
    base = ExpPoly.polynomial(f0)
    return tuple(wave * c + base for c in roots)


def _check_solution(inst: T31Instance, f0: ZPoly, c: Scalar, f: ExpPoly) -> None:
    """Re-verify a constructed solution; failure here is an internal error."""
    eq = inst.equation()
    if not residual(eq, f).is_zero():
        raise SoundnessViolation(f"constructed solution {f!r} leaves a nonzero residual")
    applied = eq.L.apply(f)
    base = ExpPoly.polynomial(f0)
    closing = -(base * (base + inst.half_exponential() * (2 * c)))
    if applied != closing:
        raise SoundnessViolation("L(z,f) != -f0*(f0 + 2c*exp(a*z/2)) for a constructed solution")
    if applied.is_zero():
        raise SoundnessViolation("L(z,f) vanishes on a constructed solution")


def solve_theorem31(inst: T31Instance, c: Optional[Scalar] = None) -> SolutionSet:
    """
    All finite-order entire solutions with L(z, f) ≢ 0.

    Args:
        inst: the instance; ``inst.v`` is required.
        c:    optional root of b to use instead of computing one.
    """
    if inst.v is None:
        raise InvalidInstance("v is required to solve; use synthesize_v to construct it")
    if inst.operator().is_zero():
        raise OutOfTheoremScope("L vanishes identically; the closed form needs L != 0")

    domain = inst.domain
    f0 = particular_f0(inst.g, inst.h, inst.u, inst.a, inst.shift)
    consistency = consistency_residual(inst.g, inst.h, inst.u, inst.v, inst.shift, f0)

    if f0.is_zero():
        logger.info("f0 vanishes identically; no solution with L(z,f) != 0")
        note = "f0 = 0 forces L(z,f) = 0 on every candidate c*exp(a*z/2)"
        if not inst.v.is_zero():
            logger.warning(
                "f0 vanishes but v does not (consistency residual %r); reported as "
                "NoFiniteOrderSolution",
                consistency,
            )
            note = "f0 = 0 while v != 0: the candidates c*exp(a*z/2) leave v as residual"
        else:
            note += "; c*exp(a*z/2) solves the equation only with L(z,f) = 0"
        return SolutionSet(
            SolutionTag.NO_FINITE_ORDER,
            f0=f0,
            failed_identity=F0_VANISHES,
            residual=ExpPoly.polynomial(consistency),
            diagnostics=note,
        )

    if not consistency.is_zero():
        logger.info("consistency identity fails for f0 = %r", f0)
        return SolutionSet(
            SolutionTag.NO_FINITE_ORDER,
            f0=f0,
            failed_identity=V_CONSISTENCY,
            residual=ExpPoly.polynomial(consistency),
            diagnostics="f0^2 + g*f0(z+shift) + h*f0' + u*f0 + v does not vanish",
        )

    if c is not None:
        c = domain.coerce(c)
        gap = c * c - inst.b
        if not gap.is_zero():
            return SolutionSet(
                SolutionTag.NO_FINITE_ORDER,
                f0=f0,
                failed_identity=C_SQUARED,
                residual=ExpPoly.constant(domain, gap),
                diagnostics="the supplied c does not satisfy c^2 = b",
            )
        roots = (c, -c)
    else:
        try:
            roots = inst.b.sqrt()
        except NotAPerfectSquare:
            logger.info("b has no exact square root; returning the solutions in terms of c")
            return SolutionSet(
                SolutionTag.TWO_SOLUTIONS,
                f0=f0,
                constraint="c^2 = b",
                diagnostics="f = c*exp(a*z/2) + f0 and f = -c*exp(a*z/2) + f0 with c^2 = b",
            )

    solutions = _candidates(inst, f0, roots)
    for root, f in zip(roots, solutions):
        _check_solution(inst, f0, root, f)
    return SolutionSet(
        SolutionTag.TWO_SOLUTIONS,
        f0=f0,
        roots=roots,
        solutions=solutions,
        diagnostics="both candidates verified with zero residual",
    )


@dataclass(frozen=True)
class Synthesis:
    """A manufactured instance together with its solutions."""

    instance: T31Instance
    v: ZPoly
    f0: ZPoly
    solutions: SolutionSet = field(compare=False)


def synthesize_v(
    g: ZPoly,
    h: ZPoly,
    u: ZPoly,
    a: Scalar,
    b: Scalar,
    shift: Scalar,
    c: Optional[Scalar] = None,
) -> Synthesis:
    """
    The v that makes f = ±c·e^{(a/2)z} + f0 solutions:
    v = −(f0² + g·f0(z+shift) + h·f0' + u·f0).
    """
    f0 = particular_f0(g, h, u, a, shift)
    if f0.is_zero():
        raise DegenerateL(
            "exp(a*shift/2)*g + (a/2)*h + u vanishes, so L(z,f) would vanish on every solution"
        )
    v = -consistency_residual(g, h, u, ZPoly(a.domain), shift, f0)
    instance = T31Instance(g=g, h=h, u=u, v=v, a=a, b=b, shift=shift)
    return Synthesis(instance=instance, v=v, f0=f0, solutions=solve_theorem31(instance, c))


# ── general equations ─────────────────────────────────────────────────────────

def instance_from_equation(eq: Equation) -> T31Instance:
    """
    Read g, h, u, v, a, b and the shift off a general equation, or raise
    :class:`OutOfTheoremScope` when it is not of the solvable shape.
    """
    domain = eq.domain
    if eq.n != 2:
        raise OutOfTheoremScope(f"closed-form solving needs n = 2, got n = {eq.n}")
    if eq.q.degree != 0:
        raise OutOfTheoremScope("closed-form solving needs a nonzero constant q")
    if eq.p.degree != 1:
        raise OutOfTheoremScope("closed-form solving needs p of degree 1")

    a = eq.p[1]
    b = eq.q[0]
    if not eq.p[0].is_zero():
        b = b * domain.exp(eq.p[0])

    g, shift = ZPoly(domain), None
    h, u = ZPoly(domain), ZPoly(domain)
    for term in eq.L.terms:
        if not term.coeff.is_polynomial():
            raise OutOfTheoremScope("closed-form solving needs polynomial coefficients in L")
        coeff = term.coeff.as_polynomial()
        if term.shift.is_zero() and term.dorder == 0:
            u = coeff
        elif term.shift.is_zero() and term.dorder == 1:
            h = coeff
        elif term.dorder == 0 and shift is None:
            g, shift = coeff, term.shift
        else:
            raise OutOfTheoremScope(
                "L may contain one shifted term f(z+c), one f' term and one f term only"
            )
    if not eq.L.inhom.is_polynomial():
        raise OutOfTheoremScope("closed-form solving needs a polynomial v")

    return T31Instance(
        g=g,
        h=h,
        u=u,
        v=eq.L.inhom.as_polynomial(),
        a=a,
        b=b,
        shift=shift if shift is not None else domain.one,
    )


def solve_equation(eq: Equation, c: Optional[Scalar] = None) -> SolutionSet:
    return solve_theorem31(instance_from_equation(eq), c)
