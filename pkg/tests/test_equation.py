import sympy
import pytest

from expdiff.algebra.ddoperator import LinOp, OpTerm
from expdiff.algebra.exppoly import ExpPoly, ZPoly
from expdiff.equations.equation import (
    Constraints,
    Equation,
    VerdictTag,
    build_pq,
    classify,
    pq_identity,
    residual,
    verify,
)
from expdiff.errors import InvalidEquation, SoundnessViolation
from expdiff.frontend.lowering import lower_expression
from expdiff.frontend.parser import parse
from expdiff.numeric.growth import NumericContext, eval_numeric, spot_check


def lowered(loaded, text):
    return lower_expression(parse(text), loaded.session)


VERIFIED_CASES = [
    ("example22.eq", "z*exp(z) - z"),
    ("example22.eq", "-z*exp(z) - z"),
    ("example31.eq", "exp(z) - z"),
    ("example31.eq", "-exp(z) - z"),
    ("example31_eta1.eq", "exp(z) - z"),
    ("example31_eta1.eq", "-exp(z) - z"),
    ("example31_eta_full_turn.eq", "exp(z) - z"),
    ("example31_eta_full_turn.eq", "-exp(z) - z"),
    ("remark21.eq", "z*exp(z)"),
    ("remark21.eq", "-z*exp(z)"),
    ("linear_shift1.eq", "exp(z) + z"),
    ("linear_shift1.eq", "-exp(z) + z"),
]


@pytest.mark.parametrize("name, candidate", VERIFIED_CASES)
def test_printed_solutions_verify_exactly(load, name, candidate):
    loaded = load(name)
    eq = loaded.require_equation()
    f = lowered(loaded, candidate)
    assert residual(eq, f).is_zero()
    verdict = verify(eq, f)
    assert verdict.tag is VerdictTag.VERIFIED
    assert not verdict.soundness_flag


@pytest.mark.parametrize("name, candidate", VERIFIED_CASES)
def test_elimination_identity_holds_on_solutions(load, name, candidate):
    loaded = load(name)
    eq = loaded.require_equation()
    f = lowered(loaded, candidate)
    assert pq_identity(eq, build_pq(eq), f).is_zero()


@pytest.mark.parametrize("name, candidate", VERIFIED_CASES)
def test_verified_quadratic_solutions_have_order_deg_p(load, name, candidate):
    loaded = load(name)
    eq = loaded.require_equation()
    verdict = verify(eq, lowered(loaded, candidate))
    assert verdict.order.order == eq.p.degree
    assert verdict.order.hyper_order == 0


def test_both_zero_notions_when_L_cancels_on_f(load):
    loaded = load("remark21.eq")
    verdict = verify(loaded.require_equation(), lowered(loaded, "z*exp(z)"))
    assert verdict.applied_L_zero is True
    assert verdict.operator_L_zero is False


def test_applied_operator_is_nonzero_on_the_polynomial_rhs_solution(load):
    loaded = load("example22.eq")
    verdict = verify(loaded.require_equation(), lowered(loaded, "z*exp(z) - z"))
    assert verdict.applied_L_zero is False
    assert verdict.order.order == 1


# ── the misprinted example ────────────────────────────────────────────────────

def _brute_force_residual(sign: int):
    z = sympy.symbols("z")
    f = sign * z * sympy.exp(z) + z
    shifted = f.subs(z, z + 2 * sympy.pi * sympy.I)
    expr = (
        f ** 2
        + z ** 2 / (2 * sympy.pi * sympy.I) * shifted
        + (-z ** 2 / (2 * sympy.pi * sympy.I) - 2 * z) * f
        - sympy.exp(2 * z)
    )
    return sympy.lambdify(z, sympy.expand(expr), "mpmath")


@pytest.mark.parametrize("sign, text", [(1, "z*exp(z) + z"), (-1, "-z*exp(z) + z")])
def test_misprinted_claimed_solutions_fail(load, sign, text):
    loaded = load("example21.eq")
    eq = loaded.require_equation()
    verdict = verify(eq, lowered(loaded, text))
    assert verdict.tag is VerdictTag.NOT_A_SOLUTION
    assert not verdict.ok
    assert "Example 2.1" in verdict.reason

    expected = "(z^2 - 1)*exp(2*z) + z^2*exp(z)" if sign == 1 else "(z^2 - 1)*exp(2*z) - z^2*exp(z)"
    assert verdict.witness == lowered(loaded, expected)

    ctx = NumericContext()
    samples = spot_check(verdict.witness, 5, ctx, seed=7)
    assert len(samples) == 5
    assert all(value > 1e-10 for _, value in samples)

    brute = _brute_force_residual(sign)
    for point, value in samples:
        exact = complex(eval_numeric(verdict.witness, point, ctx))
        independent = complex(brute(point))
        assert abs(exact - independent) <= 1e-9 * max(1.0, abs(independent))
        assert abs(abs(exact) - value) <= 1e-9 * max(1.0, value)


# ── classification ────────────────────────────────────────────────────────────

def test_constant_p_has_no_entire_solution(load):
    verdict = classify(load("lemma21.eq").require_equation())
    assert verdict.tag is VerdictTag.NO_ENTIRE_SOLUTION
    assert verdict.constraints is None


def test_zero_q_has_no_entire_solution(domain):
    eq = Equation(n=2, L=LinOp.identity(domain), q=ZPoly(domain), p=ZPoly.z(domain))
    assert classify(eq).tag is VerdictTag.NO_ENTIRE_SOLUTION


def test_cubic_has_no_transcendental_finite_order_solution(load):
    verdict = classify(load("lemma24.eq").require_equation())
    assert verdict.tag is VerdictTag.NO_TRANSCENDENTAL_FINITE_ORDER


def test_quadratic_is_constrained_to_deg_p(load):
    verdict = classify(load("example22.eq").require_equation())
    assert verdict.tag is VerdictTag.CONSTRAINED_N2
    assert verdict.constraints == Constraints(sigma=1, lambda_bar=1, hyper_order=0)


def test_quadratic_constraint_follows_degree_of_p(domain):
    eq = Equation(n=2, L=LinOp.identity(domain), q=ZPoly.constant(domain, 1), p=ZPoly.z(domain) ** 3)
    assert classify(eq).constraints.sigma == 3


# ── verification bookkeeping ──────────────────────────────────────────────────

def _cubic_with_zero_operator_on(domain):
    # f = exp(z) solves f^3 + (f(z+1) - e*f) = exp(3z)
    e = domain.exp(domain.one)
    L = LinOp(
        domain,
        [OpTerm(domain.one, 0, ExpPoly.constant(domain, 1)), OpTerm(domain.zero, 0, ExpPoly.constant(domain, -e))],
    )
    return Equation(n=3, L=L, q=ZPoly.constant(domain, 1), p=ZPoly(domain, [0, 3]))


def test_cubic_solution_with_vanishing_operator_is_not_flagged(domain):
    eq = _cubic_with_zero_operator_on(domain)
    verdict = verify(eq, ExpPoly.exp(ZPoly.z(domain)))
    assert verdict.tag is VerdictTag.VERIFIED
    assert verdict.applied_L_zero
    assert not verdict.soundness_flag


def test_soundness_flag_for_a_contradicting_cubic(domain, caplog):
    # f = exp(z) solves f^3 + exp(2z)*f = 2*exp(3z), and L(z,f) = exp(3z) is not zero
    L = LinOp(domain, [OpTerm(domain.zero, 0, ExpPoly.exp(ZPoly(domain, [0, 2])))])
    eq = Equation(n=3, L=L, q=ZPoly.constant(domain, 2), p=ZPoly(domain, [0, 3]))
    f = ExpPoly.exp(ZPoly.z(domain))
    with caplog.at_level("WARNING"):
        verdict = verify(eq, f)
    assert verdict.tag is VerdictTag.VERIFIED
    assert verdict.soundness_flag
    assert "soundness" in caplog.text
    with pytest.raises(SoundnessViolation):
        verify(eq, f, strict=True)


def test_n_below_two_is_rejected(domain):
    with pytest.raises(InvalidEquation):
        Equation(n=1, L=LinOp.zero(domain), q=ZPoly.constant(domain, 1), p=ZPoly.z(domain))


def test_build_pq_needs_nonzero_q(domain):
    eq = Equation(n=2, L=LinOp.identity(domain), q=ZPoly(domain), p=ZPoly.z(domain))
    with pytest.raises(InvalidEquation):
        build_pq(eq)


def test_build_pq_operators(domain):
    # q = 1, p = z, L = f: P = 2D - id and Q = L - L' = f - f'
    eq = Equation(n=2, L=LinOp.identity(domain), q=ZPoly.constant(domain, 1), p=ZPoly.z(domain))
    pq = build_pq(eq)
    one = ExpPoly.constant(domain, 1)
    assert pq.P == LinOp(domain, [OpTerm(domain.zero, 1, one * 2), OpTerm(domain.zero, 0, -one)])
    assert pq.Qop == LinOp(domain, [OpTerm(domain.zero, 0, one), OpTerm(domain.zero, 1, -one)])
    assert pq.cleared == ZPoly.constant(domain, 1)


def test_wrong_sign_of_the_polynomial_part_fails(load):
    loaded = load("example31.eq")
    verdict = verify(loaded.require_equation(), lowered(loaded, "exp(z) + z"))
    assert verdict.tag is VerdictTag.NOT_A_SOLUTION
    assert not verdict.witness.is_zero()
