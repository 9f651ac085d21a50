import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from ajdkit.polyalg import (Basis, BasisMismatch, MalformedIntegrand, Poly, Q, UnboundSymbol,
                            evaluate, integrate_exp_poly, integrate_inner)

B = Basis.of([("x", "param"), ("y", "param"), ("z", "param")])
OTHER = Basis.of([("x", "param"), ("w", "param")])
INNER = Basis.of(
    [("eT", "outer_exp"), ("t", "outer_time"), ("eS", "inner_exp"), ("s", "inner_time"),
     ("kinv", "rate_inv"), ("a", "param")],
    {"eT": ("exp", "k", "t"), "eS": ("exp", "k", "s"), "kinv": ("inv", "k")},
)

coefs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
monos = st.tuples(*(st.integers(0, 3) for _ in range(3)))
polys = st.dictionaries(monos, coefs, max_size=5).map(
    lambda d: Poly(B, {m: Q(c.numerator, c.denominator) for m, c in d.items()}))
points = st.fixed_dictionaries({n: st.floats(-1.5, 1.5) for n in ("x", "y", "z")})


@given(polys, polys)
def test_addition_and_multiplication_commute(p, q):
    assert p + q == q + p
    assert p * q == q * p


@given(polys, polys, polys)
@settings(max_examples=50)
def test_ring_associativity_and_distributivity(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@given(polys)
def test_identities_and_inverse(p):
    assert p + Poly.zero(B) == p
    assert p * Poly.one(B) == p
    assert (p - p).is_zero()
    assert p ** 2 == p * p


@given(polys, polys, points)
def test_evaluate_is_a_ring_homomorphism(p, q, pt):
    lhs = evaluate(p * q, pt)
    rhs = evaluate(p, pt) * evaluate(q, pt)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)
    assert evaluate(p + q, pt) == pytest.approx(evaluate(p, pt) + evaluate(q, pt), rel=1e-9, abs=1e-9)


@given(polys)
def test_json_and_row_round_trip(p):
    assert Poly.from_json(p.to_json()) == p
    assert Poly.from_rows(B, p.to_rows()) == p


@given(st.integers(-3, 3), st.integers(0, 4), st.floats(0.2, 3.0), st.floats(0.05, 2.0))
@settings(max_examples=60)
def test_exp_poly_integral_matches_quadrature(n, j, k, t):
    got = evaluate(integrate_exp_poly(n, j), {"k": k, "t": t})
    ref, _ = quad(lambda s: math.exp(n * k * s) * s ** j, 0.0, t, epsabs=0, epsrel=1e-12)
    assert got == pytest.approx(ref, rel=1e-8, abs=1e-12)


@given(st.integers(-2, 3), st.integers(0, 3), st.floats(0.3, 2.0), st.floats(0.2, 1.5))
@settings(max_examples=40)
def test_exp_poly_integral_derivative_recovers_integrand(n, j, k, t):
    h = 1e-5
    F = integrate_exp_poly(n, j)
    deriv = (evaluate(F, {"k": k, "t": t + h}) - evaluate(F, {"k": k, "t": t - h})) / (2 * h)
    assert deriv == pytest.approx(math.exp(n * k * t) * t ** j, rel=1e-6)


def test_integral_vanishes_at_zero():
    for n in range(-2, 3):
        for j in range(4):
            assert evaluate(integrate_exp_poly(n, j), {"k": 1.7, "t": 0.0}) == pytest.approx(0.0, abs=1e-12)


def test_integrate_inner_keeps_outer_symbols_as_constants():
    p = Poly.monomial(INNER, 3, eT=-1, eS=2, s=1, a=1)
    got = integrate_inner(p)
    k, t, a = 0.8, 1.3, 0.7
    ref, _ = quad(lambda s: 3 * math.exp(-k * t) * math.exp(2 * k * s) * s * a, 0, t, epsrel=1e-13)
    assert evaluate(got, {"k": k, "t": t, "a": a}) == pytest.approx(ref, rel=1e-10)
    with pytest.raises(MalformedIntegrand):
        integrate_inner(p, strict=True)


def test_errors():
    with pytest.raises(TypeError):
        Poly.monomial(B, 0.5, x=1)
    with pytest.raises(BasisMismatch):
        Poly.symbol(B, "x") + Poly.symbol(OTHER, "x")
    with pytest.raises(BasisMismatch):
        Poly.symbol(B, "nope")
    with pytest.raises(UnboundSymbol):
        evaluate(Poly.symbol(B, "x"), {"y": 1.0})
    with pytest.raises(ValueError):
        evaluate(Poly.symbol(INNER, "eT"), {"k": 1.0, "t": 1.0, "eT": 5.0})


def test_evaluate_resolves_linked_symbols():
    p = Poly.monomial(INNER, 2, eT=-3, kinv=2)
    k, t = 1.1, 0.9
    assert evaluate(p, {"k": k, "t": t}) == pytest.approx(2 * math.exp(-3 * k * t) / k ** 2, rel=1e-14)
