import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from expdiff.algebra.exppoly import ExpOrder, ExpPoly, ZPoly
from expdiff.errors import DomainMismatch, InvalidShift, UnsupportedExponent, ZeroFunction
from expdiff.numeric.growth import NumericContext, eval_numeric

from strategies import DOMAIN, ETA, exppolys, shifts, zpolys


def z(domain):
    return ZPoly.z(domain)


# ── ZPoly ─────────────────────────────────────────────────────────────────────

def test_zpoly_trims_and_reports_degree(domain):
    p = ZPoly(domain, [1, 2, 0, 0])
    assert p.degree == 1
    assert ZPoly(domain).degree == -1
    assert ZPoly(domain, [0, 0]).is_zero()


def test_zpoly_shift_by_horner(domain):
    p = z(domain) ** 2
    eta = domain.param("eta")
    assert p.shift(eta) == ZPoly(domain, [eta * eta, 2 * eta, 1])
    assert p.shift(0) == p


def test_zpoly_derivative(domain):
    p = ZPoly(domain, [5, 3, 0, 2])
    assert p.derivative() == ZPoly(domain, [3, 0, 6])


# ── canonical form ────────────────────────────────────────────────────────────

def test_constant_of_exponent_moves_into_coefficient(domain):
    f = ExpPoly.exp(ZPoly(domain, [1, 1]))
    (exponent, coeff), = f.items()
    assert exponent == z(domain)
    assert coeff == ZPoly.constant(domain, domain.exp(domain.one))


def test_like_exponents_merge_and_cancel(domain):
    e = ExpPoly.exp(z(domain))
    assert (e + e) == ExpPoly.term(ZPoly.constant(domain, 2), z(domain))
    assert (e - e).is_zero()


def test_exponent_coefficients_must_be_exp_free(domain):
    tower = ZPoly(domain, [0, domain.exp(domain.one)])
    with pytest.raises(UnsupportedExponent):
        ExpPoly.exp(tower)


def test_polynomial_view(domain):
    f = ExpPoly.polynomial(ZPoly(domain, [1, 1]))
    assert f.is_polynomial()
    assert f.as_polynomial() == ZPoly(domain, [1, 1])
    g = f + ExpPoly.exp(z(domain))
    assert not g.is_polynomial()
    assert g.polynomial_part() == ZPoly(domain, [1, 1])
    with pytest.raises(ValueError):
        g.as_polynomial()


def test_order_is_largest_exponent_degree(domain):
    f = ExpPoly.exp(z(domain) ** 3) + ExpPoly.z(domain)
    assert f.order() == ExpOrder(3, 0)
    assert ExpPoly.z(domain).order() == ExpOrder(0)
    with pytest.raises(ZeroFunction):
        ExpPoly.zero(domain).order()


def test_shift_of_exponential_picks_up_constant_factor(domain):
    eta = domain.param("eta")
    f = ExpPoly.term(z(domain), z(domain))
    shifted = f.shift(eta)
    expected = ExpPoly.term(ZPoly(domain, [eta, 1]) * domain.exp(eta), z(domain))
    assert shifted == expected


def test_shift_by_full_turn_is_identity_on_exp(domain):
    turn = domain.pi * domain.i * 2
    f = ExpPoly.exp(z(domain))
    assert f.shift(turn) == f


def test_shift_must_be_exp_free(domain):
    with pytest.raises(InvalidShift):
        ExpPoly.z(domain).shift(domain.exp(domain.one))


def test_domains_do_not_mix(domain):
    from expdiff.algebra.scalars import ScalarDomain

    with pytest.raises(DomainMismatch):
        ExpPoly.z(domain) + ExpPoly.z(ScalarDomain(("eta",)))


def test_derivative_of_product_term(domain):
    f = ExpPoly.term(z(domain), z(domain) ** 2)
    expected = ExpPoly.term(ZPoly(domain, [1, 0, 2]), z(domain) ** 2)
    assert f.derivative() == expected
    assert f.nth_derivative(0) == f


def test_power_matches_repeated_product(domain):
    f = ExpPoly.exp(z(domain)) - ExpPoly.z(domain)
    assert f ** 3 == f * f * f
    assert f ** 0 == ExpPoly.constant(domain, 1)


# ── properties ────────────────────────────────────────────────────────────────

@given(exppolys(), exppolys(), exppolys())
def test_ring_laws(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f - f).is_zero()


@given(exppolys(), exppolys())
def test_leibniz_rule(f, g):
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


@given(exppolys(), shifts())
def test_shift_commutes_with_derivative(f, c):
    assert f.shift(c).derivative() == f.derivative().shift(c)


@given(exppolys(), shifts(), shifts())
def test_shifts_compose(f, c1, c2):
    assert f.shift(c1).shift(c2) == f.shift(c1 + c2)


@given(exppolys(), exppolys(), shifts())
def test_shift_is_a_ring_homomorphism(f, g, c):
    assert (f * g).shift(c) == f.shift(c) * g.shift(c)


@given(zpolys(max_degree=3), shifts())
def test_zpoly_shift_inverts(p, c):
    assert p.shift(c).shift(-c) == p


def test_strategy_domain_has_eta():
    assert ETA in [DOMAIN.param(name) for name in DOMAIN.params]


def test_mixed_formal_and_full_turn_shift(domain):
    eta = domain.param("eta")
    f = ExpPoly.exp(z(domain)) + ExpPoly.z(domain)
    assert f.shift(eta + domain.pi * domain.i * 2) == f.shift(eta) + 2 * domain.pi * domain.i


@settings(max_examples=50)
@given(exppolys(), st.integers(0, 2 ** 32 - 1))
def test_zero_test_agrees_with_numeric_values(f, seed):
    rng = np.random.default_rng(seed)
    eta = complex(rng.uniform(1, 2), rng.uniform(0, 1))
    ctx = NumericContext(bindings={"eta": eta})
    points = rng.uniform(-2, 2, size=(20, 2))
    values = [abs(eval_numeric(f, complex(x, y), ctx)) for x, y in points]
    if f.is_zero():
        assert all(v == 0 for v in values)
    else:
        assert all(v > 1e-20 for v in values)


@given(exppolys(), exppolys())
def test_order_of_product_is_the_larger_order(f, g):
    assume(not f.is_zero() and not g.is_zero())
    product = (f * g).order().order
    larger = max(f.order().order, g.order().order)
    assert product <= larger
    if f.order().order != g.order().order:
        assert product == larger


@given(exppolys(max_terms=2), st.integers(2, 3))
def test_powers_keep_the_order(f, n):
    assume(not f.is_zero())
    assert (f ** n).order() == f.order()
