from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from expdiff.algebra.scalars import ScalarDomain, gauss_sqrt, reduce_pi
from expdiff.errors import (
    DomainMismatch,
    NotAPerfectSquare,
    NotInvertible,
    UnsupportedExponent,
    UnsupportedRootOfUnity,
)
from expdiff.numeric.growth import NumericContext, eval_scalar

from strategies import DOMAIN, ETA, scalars

ETA_VALUE = "0.3719051718"


# ── construction ──────────────────────────────────────────────────────────────

def test_reserved_and_duplicate_parameter_names_are_rejected():
    with pytest.raises(ValueError):
        ScalarDomain(("pi",))
    with pytest.raises(ValueError):
        ScalarDomain(("eta", "eta"))
    with pytest.raises(ValueError):
        ScalarDomain(("2x",))


def test_rational_and_int_compare_equal(domain):
    assert domain.rational(3) == 3
    assert domain.rational(Fraction(1, 2)) == Fraction(1, 2)
    assert domain.rational(1, 1) != 1


def test_zero_has_no_terms(domain):
    x = domain.param("eta") * domain.exp(domain.one)
    assert (x - x).is_zero()
    assert len(x - x) == 0
    assert not domain.zero


def test_exp_of_sum_splits_into_product(domain):
    eta = domain.param("eta")
    assert domain.exp(eta + 1) == domain.exp(eta) * domain.exp(domain.one)
    assert domain.exp(eta) * domain.exp(-eta) == 1


def test_distinct_exponentials_do_not_merge(domain):
    s = domain.exp(domain.one) + domain.exp(domain.param("eta"))
    assert len(s) == 2
    assert not s.is_plain()


def test_exponent_must_be_exp_free(domain):
    with pytest.raises(UnsupportedExponent):
        domain.exp(domain.exp(domain.one))


def test_domains_do_not_mix(domain):
    with pytest.raises(DomainMismatch):
        domain.one + ScalarDomain(("eta",)).one


# ── roots of unity ────────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "s, expected",
    [
        (1, -1),
        (Fraction(1, 2), (0, 1)),
        (Fraction(3, 2), (0, -1)),
        (2, 1),
        (-1, -1),
        (Fraction(-1, 2), (0, -1)),
    ],
)
def test_half_integer_multiples_of_i_pi_reduce(domain, s, expected):
    arg = domain.pi * domain.i * s
    value = domain.rational(*expected) if isinstance(expected, tuple) else domain.rational(expected)
    assert domain.exp(arg) == value
    assert domain.exp(arg).is_plain()


def test_real_part_survives_reduction(domain):
    arg = domain.pi * domain.i * 2 + domain.pi + 1
    assert domain.exp(arg) == domain.exp(domain.pi + 1)


def test_reduce_pi_is_idempotent(domain):
    arg = (domain.pi * domain.i * Fraction(5, 2) + domain.param("eta")).plain_value()
    coeff = domain.field.one
    once = reduce_pi(domain, arg, coeff)
    twice = reduce_pi(domain, *once)
    assert once == twice


def test_other_roots_of_unity_are_kept_but_cannot_merge(domain):
    cube = domain.exp(domain.pi * domain.i * Fraction(2, 3))
    assert cube.has_unreduced_root()
    assert len(cube) == 1
    with pytest.raises(UnsupportedRootOfUnity):
        cube + 1
    with pytest.raises(UnsupportedRootOfUnity):
        cube * (domain.exp(domain.one) + 1)


def test_single_term_products_with_other_roots_of_unity(domain):
    third = domain.exp(domain.pi * domain.i * Fraction(1, 3))
    doubled = third * 2
    assert len(doubled) == 1 and not doubled.is_zero()
    assert third * third == domain.exp(domain.pi * domain.i * Fraction(2, 3))
    assert third * third * third == -1
    assert third * third.invert() == 1
    assert third + third == doubled
    assert (third - third).is_zero()


# ── inversion and square roots ────────────────────────────────────────────────

def test_invert_single_term(domain):
    x = domain.param("eta") * domain.exp(domain.one) * 3
    assert x * x.invert() == 1
    assert x / x == 1


def test_invert_rejects_zero_and_sums(domain):
    with pytest.raises(NotInvertible):
        domain.zero.invert()
    with pytest.raises(NotInvertible):
        (domain.one + domain.exp(domain.one)).invert()


@pytest.mark.parametrize(
    "value, root",
    [((4, 0), (2, 0)), ((-4, 0), (0, 2)), ((0, 2), (1, 1)), ((Fraction(9, 4), 0), (Fraction(3, 2), 0))],
)
def test_gaussian_square_roots(domain, value, root):
    s = domain.rational(*value)
    r, minus_r = s.sqrt()
    assert r * r == s
    assert minus_r == -r
    assert r in (domain.rational(*root), -domain.rational(*root))


def test_square_root_of_parameter_and_exponential(domain):
    eta = domain.param("eta")
    r, _ = (eta * eta * domain.exp(eta) * 4).sqrt()
    assert r * r == eta * eta * domain.exp(eta) * 4
    assert r in (2 * eta * domain.exp(eta / 2), -2 * eta * domain.exp(eta / 2))


def test_non_squares_are_reported(domain):
    with pytest.raises(NotAPerfectSquare):
        domain.rational(2).sqrt()
    with pytest.raises(NotAPerfectSquare):
        domain.param("eta").sqrt()
    with pytest.raises(NotAPerfectSquare):
        (domain.one + domain.exp(domain.one)).sqrt()


def test_gauss_sqrt_returns_none_outside_q_i():
    domain = ScalarDomain()
    c = domain.rational(3).plain_value().numer.LC
    assert gauss_sqrt(c) is None


# ── field laws ────────────────────────────────────────────────────────────────

@given(scalars(), scalars(), scalars())
def test_ring_laws(x, y, w):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + w == x + (y + w)
    assert (x * y) * w == x * (y * w)
    assert x * (y + w) == x * y + x * w
    assert x - x == DOMAIN.zero
    assert x * DOMAIN.one == x


@settings(max_examples=50)
@given(scalars(), st.integers(0, 2 ** 32 - 1))
def test_structural_nonzero_agrees_with_numeric_value(x, seed):
    rng = np.random.default_rng(seed)
    etas = rng.uniform(1, 2, size=20) + 1j * rng.uniform(0, 1, size=20)
    values = [abs(eval_scalar(x, NumericContext(bindings={"eta": complex(eta)}))) for eta in etas]
    if x.is_zero():
        assert all(v == 0 for v in values)
    else:
        assert all(v > 1e-20 for v in values)


@given(scalars(), scalars())
def test_evaluation_is_a_ring_homomorphism(x, y):
    ctx = NumericContext(bindings={"eta": ETA_VALUE})
    with mp.workprec(ctx.precision):
        assert abs(eval_scalar(x * y, ctx) - eval_scalar(x, ctx) * eval_scalar(y, ctx)) < 1e-50
        assert abs(eval_scalar(x + y, ctx) - eval_scalar(x, ctx) - eval_scalar(y, ctx)) < 1e-50


def test_eta_strategy_generator_is_a_parameter():
    assert ETA.is_plain()
    assert ETA != DOMAIN.one
