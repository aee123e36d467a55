"""
equation.py
===========
The model  f(z)^n + L(z, f) = q(z)·e^{p(z)},  exact verification, the
classification rules and the P/Q elimination.

Classification is declarative: it reports what is known about entire
solutions of an instance, it does not search for them.

  q ≡ 0 or p constant   → no entire solution of hyper-order < 1
  n ≥ 3                 → no transcendental entire solution of finite order
  n = 2                 → every such solution has λ̄(f) = σ(f) = deg p
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from expdiff.algebra.ddoperator import LinOp, OpTerm, linear_combine
from expdiff.algebra.exppoly import ExpOrder, ExpPoly, ZPoly
from expdiff.algebra.scalars import ScalarDomain
from expdiff.errors import DomainMismatch, InvalidEquation, SoundnessViolation

__all__ = [
    "Equation",
    "Verdict",
    "VerdictTag",
    "Constraints",
    "PQPair",
    "residual",
    "verify",
    "classify",
    "build_pq",
    "pq_identity",
]

logger = logging.getLogger(__name__)


class VerdictTag(str, Enum):
    NO_ENTIRE_SOLUTION = "NoEntireSolution_Lemma21"
    NO_TRANSCENDENTAL_FINITE_ORDER = "NoTranscendentalFiniteOrder_Lemma24"
    CONSTRAINED_N2 = "ConstrainedN2"
    VERIFIED = "Verified"
    NOT_A_SOLUTION = "NotASolution"


@dataclass(frozen=True)
class Constraints:
    """Growth constraints every transcendental entire solution must meet."""

    sigma: int
    lambda_bar: int
    hyper_order: int = 0


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of :func:`classify` or :func:`verify`.

    Attributes:
        tag:             verdict name.
        constraints:     σ = λ̄ = deg p for ConstrainedN2.
        witness:         nonzero residual for NotASolution.
        reason:          one-line human explanation.
        order:           growth order of the verified candidate.
        applied_L_zero:  L(z, f(z)) ≡ 0 for the candidate.
        operator_L_zero: L vanishes as an operator.
        soundness_flag:  candidate contradicts the classification rules.
    """

    tag: VerdictTag
    constraints: Optional[Constraints] = None
    witness: Optional[ExpPoly] = None
    reason: str = ""
    order: Optional[ExpOrder] = None
    applied_L_zero: Optional[bool] = None
    operator_L_zero: Optional[bool] = None
    soundness_flag: bool = False

    @property
    def ok(self) -> bool:
        return self.tag is not VerdictTag.NOT_A_SOLUTION


@dataclass(frozen=True)
class Equation:
    """
    f(z)^n + L(z, f) = q(z)·e^{p(z)}.

    q ≡ 0 and constant p are accepted here; :func:`classify` reports them.
    """

    n: int
    L: LinOp
    q: ZPoly
    p: ZPoly
    note: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidEquation(f"n must be an integer >= 2, got {self.n!r}")
        domain = self.L.domain
        if self.q.domain is not domain or self.p.domain is not domain:
            raise DomainMismatch()

    @property
    def domain(self) -> ScalarDomain:
        return self.L.domain

    def rhs(self) -> ExpPoly:
        return ExpPoly.term(self.q, self.p)


def residual(eq: Equation, f: ExpPoly) -> ExpPoly:
    """f^n + L(z, f) − q·e^p; zero exactly when f solves ``eq``."""
    if f.domain is not eq.domain:
        raise DomainMismatch()
    return f ** eq.n + eq.L.apply(f) - eq.rhs()


def _is_transcendental_case(eq: Equation) -> bool:
    return not eq.q.is_zero() and eq.p.degree >= 1


def verify(eq: Equation, f: ExpPoly, strict: bool = False) -> Verdict:
    """
    Check a candidate solution exactly.

    A verified transcendental solution of an n >= 3 instance with
    L(z, f) ≢ 0 would contradict :func:`classify`; it is logged as a
    soundness problem and, with ``strict=True``, raised.
    """
    res = residual(eq, f)
    operator_zero = eq.L.is_zero()
    if not res.is_zero():
        return Verdict(
            VerdictTag.NOT_A_SOLUTION,
            witness=res,
            reason=_with_note(eq, "residual f^n + L(z,f) - q*exp(p) does not vanish"),
            operator_L_zero=operator_zero,
        )

    order = f.order() if not f.is_zero() else ExpOrder(0)
    applied_zero = eq.L.applied_is_zero(f)
    flag = False
    reason = "residual vanishes identically"

    if order.order > 0 and not applied_zero and _is_transcendental_case(eq):
        if eq.n >= 3:
            flag = True
            reason = (
                f"verified transcendental solution of order {order.order} with n = {eq.n} "
                "and L(z,f) not identically zero; this contradicts the classification"
            )
            logger.warning("soundness flag raised: %s", reason)
            if strict:
                raise SoundnessViolation(reason)
        elif order.order != eq.p.degree:
            flag = True
            reason = f"verified solution has order {order.order}, expected deg p = {eq.p.degree}"
            logger.warning("soundness flag raised: %s", reason)
            if strict:
                raise SoundnessViolation(reason)
    elif applied_zero and order.order > 0:
        reason += "; L(z,f) vanishes identically on this solution"

    return Verdict(
        VerdictTag.VERIFIED,
        reason=_with_note(eq, reason),
        order=order,
        applied_L_zero=applied_zero,
        operator_L_zero=operator_zero,
        soundness_flag=flag,
    )


def _with_note(eq: Equation, reason: str) -> str:
    return f"{reason} [{eq.note}]" if eq.note else reason


def classify(eq: Equation) -> Verdict:
    """Apply the three classification rules in order."""
    if eq.q.is_zero():
        return Verdict(
            VerdictTag.NO_ENTIRE_SOLUTION,
            reason="q vanishes identically: no entire solution of hyper-order < 1",
        )
    if eq.p.degree <= 0:
        return Verdict(
            VerdictTag.NO_ENTIRE_SOLUTION,
            reason="p is constant: no entire solution of hyper-order < 1",
        )
    if eq.n >= 3:
        return Verdict(
            VerdictTag.NO_TRANSCENDENTAL_FINITE_ORDER,
            reason=f"n = {eq.n} >= 3: no transcendental entire solution of finite order",
        )
    deg = eq.p.degree
    return Verdict(
        VerdictTag.CONSTRAINED_N2,
        constraints=Constraints(sigma=deg, lambda_bar=deg),
        reason=(
            f"n = 2: every transcendental entire solution of hyper-order < 1 with "
            f"L(z,f) not identically zero has lambda_bar = sigma = deg p = {deg}"
        ),
    )


@dataclass(frozen=True)
class PQPair:
    """
    Operators of the elimination identity  f^{n-1}·P(f) = Q(f),
    both multiplied through by ``cleared`` = q.
    """

    P: LinOp
    Qop: LinOp
    cleared: ZPoly


def build_pq(eq: Equation) -> PQPair:
    """
    P̃ = q·n·D − (q·p' + q')·id   and   Q̃ = (q·p' + q')·L − q·L'.

    Differentiating the equation and eliminating e^p gives the identity
    f^{n-1}·P̃(f) = Q̃(f) for every solution f.
    """
    if eq.q.is_zero():
        raise InvalidEquation("q vanishes identically; there is nothing to eliminate")
    domain = eq.domain
    q, p = eq.q, eq.p
    weight = q * p.derivative() + q.derivative()

    P = LinOp(
        domain,
        [
            OpTerm(domain.zero, 1, ExpPoly.polynomial(q * eq.n)),
            OpTerm(domain.zero, 0, ExpPoly.polynomial(-weight)),
        ],
    )
    Qop = linear_combine(weight, eq.L, -q, eq.L.derivative())
    return PQPair(P=P, Qop=Qop, cleared=q)


def pq_identity(eq: Equation, pq: PQPair, f: ExpPoly) -> ExpPoly:
    """f^{n-1}·P̃(f) − Q̃(f); vanishes for every exact solution."""
    return f ** (eq.n - 1) * pq.P.apply(f) - pq.Qop.apply(f)
