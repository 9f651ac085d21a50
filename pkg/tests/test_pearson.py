"""Pearson fitting: closed-form closures, recovery on family members, sampling and serialization."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special, stats

from ajdkit.pearson import (
    BoundaryMassWarning, PearsonCoeffs, PearsonFit, QuadraticTerm, SingularSystemError, build_support,
    fit_coefficients, fit_density, fit_density_raw, gap_report, partial_fractions,
)

from .conftest import CASE1, CASE2


def quiet_fit(*args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fit_density(*args, **kw)


def quiet_fit_raw(*args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fit_density_raw(*args, **kw)


GAUSS = [1.0, 0.0, 1.0, 0.0, 3.0]


@pytest.fixture(scope="module")
def gauss():
    return quiet_fit(0.0, GAUSS, 2)


@pytest.fixture(scope="module")
def case_fits():
    out = {}
    for name, c in (("case1", CASE1), ("case2", CASE2)):
        cen = [1.0, 0.0] + c
        out[name] = {n: quiet_fit(0.0, cen[:2 * n + 1], n) for n in (2, 3, 4)}
    return out


# ---------------------------------------------------------------------------
# closures


def test_gaussian_coefficients():
    c = fit_coefficients([0.0, 1.0, 0.0, 3.0], 2)
    assert c.a == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(c.c, (1.0, 0.0, 0.0), atol=1e-12)


def test_gaussian_density(gauss):
    x = np.linspace(-6.5, 6.5, 2001)
    assert np.max(np.abs(gauss.pdf(x) - stats.norm.pdf(x))) < 1e-9
    assert gauss.logC == pytest.approx(0.5 * math.log(2 * math.pi), abs=1e-10)
    lu = gauss.log_unnormalized(np.array([0.0, 1.0]))
    assert lu[0] - lu[1] == pytest.approx(0.5, abs=1e-12)


def test_exponential_coefficients():
    c = fit_coefficients([1.0, 2.0, 6.0, 24.0], 2)
    assert c.a == pytest.approx(0.0, abs=1e-10)
    assert np.allclose(c.c, (0.0, 1.0, 0.0), atol=1e-10)


def test_exponential_normalization():
    f = quiet_fit(1.0, [1.0, 0.0, 1.0, 2.0, 9.0], 2, l=1, u=39)
    lo, hi = f.support
    assert lo == pytest.approx(0.0, abs=1e-9) and hi == pytest.approx(40.0, abs=1e-9)
    # C relative to the density's value at the left edge is the truncated mass 1 - e^{-40}
    assert math.exp(f.logC - float(f.log_unnormalized(lo))) == pytest.approx(1 - math.exp(-(hi - lo)), abs=1e-12)
    lu = f.log_unnormalized(np.array([2.0, 3.0]))
    assert lu[0] - lu[1] == pytest.approx(1.0, abs=1e-12)


def test_quadratic_term_for_cauchy_type_denominator():
    pf = partial_fractions(PearsonCoeffs(2, 0.0, (1.0, 0.0, 1.0)))
    assert not pf.linear
    (term,) = pf.quadratic
    assert isinstance(term, QuadraticTerm)
    assert term.p == pytest.approx(0.0, abs=1e-14) and term.q == pytest.approx(1.0, abs=1e-14)
    assert term.residues[0] == pytest.approx(0.5, abs=1e-14)
    # -(x)/(1+x^2) integrates to -0.5 log(1+x^2)
    x = np.array([0.3, 2.0])
    assert np.allclose(pf.antiderivative(x) - pf.antiderivative(0.0), -0.5 * np.log1p(x * x), atol=1e-12)


def test_symmetric_input_gives_symmetric_fit():
    f = quiet_fit(0.0, [1.0, 0.0, 1.0, 0.0, 4.0, 0.0, 30.0], 3)
    x = np.linspace(0.1, 5.0, 50)
    assert np.allclose(f.pdf(x), f.pdf(-x), rtol=1e-10, atol=0)
    assert f.quantile(0.5) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("skew, expect", [(0.0, (-7.0, 7.0)), (-0.8, (-9.0, 7.0)), (0.8, (-7.0, 9.0))])
def test_build_support_defaults(skew, expect):
    assert build_support(0.0, 1.0, skew) == expect


def test_build_support_cut_at_root():
    lo, hi = build_support(0.0, 1.0, 0.0, real_roots=(3.0,))
    assert lo == -7.0 and 3.0 - 1e-5 < hi < 3.0


# ---------------------------------------------------------------------------
# moment recovery on members of the Pearson family

# on [0, 1]; the exponents make the log-derivative numerator linear
FAMILY = {
    2: lambda x: x ** 2 * (1 - x) ** 4,
    3: lambda x: x ** 2 * (1 - x) ** 3 * (2 + x) ** -5.0,
    4: lambda x: x ** 2 * (1 - x) ** 3 * (2 + x) ** -18.0 * (3 + x) ** 13.0,
}


def _quad_moments(p, n):
    z = integrate.quad(p, 0, 1, epsabs=0, epsrel=1e-12)[0]
    raw = [integrate.quad(lambda x: x ** k * p(x), 0, 1, epsabs=0, epsrel=1e-12)[0] / z for k in range(2 * n + 1)]
    m = raw[1]
    cen = [integrate.quad(lambda x: (x - m) ** k * p(x), 0, 1, epsabs=0, epsrel=1e-12)[0] / z
           for k in range(2 * n + 1)]
    return raw, cen, z


@pytest.mark.parametrize("n", [2, 3, 4])
def test_recovery_on_family_member(n):
    raw, cen, z = _quad_moments(FAMILY[n], n)
    f = quiet_fit_raw(raw, n)
    assert f.n == n
    assert 0.0 < f.support[0] < 1e-5 and 1 - 1e-5 < f.support[1] < 1.0
    for k in range(2, 2 * n + 1):
        assert abs(f.moment(k, central=True) - cen[k]) <= 5e-4 * abs(cen[k]) + 1e-12
    x = np.linspace(0.05, 0.95, 19)
    assert np.max(np.abs(f.pdf(x) - FAMILY[n](x) / z)) < 1e-9


@settings(max_examples=15, deadline=None)
@given(st.floats(2.0, 8.0), st.floats(2.0, 8.0))
def test_beta_recovery(a, b):
    d = stats.beta(a, b)
    raw = [1.0] + [float(d.moment(k)) for k in range(1, 5)]
    f = quiet_fit_raw(raw, 2)
    m = raw[1]
    cen = [float(d.expect(lambda x: (x - m) ** k)) for k in range(5)]
    for k in (2, 3, 4):
        assert abs(f.moment(k, central=True) - cen[k]) <= 5e-4 * cen[2] ** (k / 2)


@pytest.mark.parametrize("case", [CASE1, CASE2], ids=["case1", "case2"])
def test_second_order_recovery_with_wide_support(case):
    # the default truncation loses tail mass; a wide support restores the moments
    cen = [1.0, 0.0] + case[:3]
    f = quiet_fit(0.0, cen, 2, l=120, u=120)
    for k in (2, 3, 4):
        assert abs(f.moment(k, central=True) - cen[k]) <= 5e-4 * abs(cen[k])


def test_degenerate_refit_keeps_requested_order():
    c = fit_coefficients([0.0, 1.0, 0.0, 3.0, 0.0, 15.0], 3)
    assert c.n == 2 and c.requested_n == 3


def test_singular_system():
    with pytest.raises(SingularSystemError) as exc:
        fit_coefficients([0.0, 0.0, 0.0, 0.0], 2)
    assert exc.value.cond > 1e12 or not math.isfinite(exc.value.cond)


def test_boundary_mass_warning():
    with pytest.warns(BoundaryMassWarning):
        fit_density(0.0, GAUSS, 2, l=1, u=1)


# ---------------------------------------------------------------------------
# benchmark moment sets


@pytest.mark.parametrize("case", ["case1", "case2"])
def test_gaps_shrink_with_order(case_fits, case):
    (_, _, g23), (_, _, g34) = gap_report(case_fits[case])
    assert g34 < g23


def test_case1_order4_coefficients_frozen(case_fits):
    c = case_fits["case1"][4].coeffs
    assert c.n == 4 and c.requested_n is None
    assert c.a == pytest.approx(-0.4606281851387733, rel=1e-9)
    expect = (0.6784469296502159, -0.5031531068073236, 0.12747205499769218, 0.015278987568284714,
              0.0006240439191332751)
    assert np.allclose(c.c, expect, rtol=1e-9, atol=0)


@pytest.mark.parametrize("case", ["case1", "case2"])
def test_cdf_endpoints_and_monotone(case_fits, case):
    f = case_fits[case][4]
    lo, hi = f.support
    assert f.cdf(lo) == 0.0 and f.cdf(hi) == 1.0
    assert f.grid_cdf[0] == 0.0 and f.grid_cdf[-1] == pytest.approx(1.0, abs=1e-12)
    x = np.linspace(lo, hi, 5001)
    assert np.all(np.diff(f.cdf(x)) >= 0)
    q = f.quantile(np.linspace(0, 1, 5001))
    assert np.all(np.diff(q) >= 0)


@pytest.mark.parametrize("case", ["case1", "case2"])
def test_interpolated_cdf_matches_quadrature(case_fits, case):
    f = case_fits[case][4]
    xs = np.random.default_rng(1).uniform(*f.support, 25)
    exact = np.array([f.expect(np.ones_like, hi=x) for x in xs])
    assert np.max(np.abs(exact - f.cdf(xs))) < 1e-8


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-6, 1 - 1e-6))
def test_quantile_round_trip(p):
    f = _CASE1_N4
    assert abs(float(f.cdf(f.quantile(p))) - p) < 1e-8


_CASE1_N4 = quiet_fit(0.0, [1.0, 0.0] + CASE1, 4)


def test_quantile_rejects_bad_probabilities(gauss):
    with pytest.raises(ValueError):
        gauss.quantile(1.5)


def test_json_round_trip(case_fits):
    f = case_fits["case2"][3]
    g = PearsonFit.from_json(f.to_json())
    x = np.linspace(*f.support, 777)
    assert np.max(np.abs(g.pdf(x) - f.pdf(x))) <= 1e-15 * np.max(f.pdf(x))
    assert np.array_equal(g.quantile(np.linspace(0, 1, 99)), f.quantile(np.linspace(0, 1, 99)))
    assert g.coeffs == f.coeffs and g.support == f.support


def test_samples_match_moments(case_fits):
    f = case_fits["case1"][4]
    y = f.sample(np.random.default_rng(5), 1_000_000)
    cen = [1.0, 0.0] + CASE1
    d = y - y.mean()
    for k in (2, 3, 4):
        dk = d ** k
        se = dk.std() / math.sqrt(y.size)
        assert abs(dk.mean() - cen[k]) < 4 * se
        assert abs(dk.mean() - f.moment(k, central=True)) < 4 * se


def test_sample_seed_determinism(gauss):
    assert np.array_equal(gauss.sample(3, 1000), gauss.sample(3, 1000))
    assert gauss.sample(3, 0).size == 0


def test_gamma_shape_normalization():
    # type III member: the density is a shifted gamma, compare pdfs directly
    k = 4.0
    d = stats.gamma(k)
    raw = [1.0] + [float(special.poch(k, j)) for j in range(1, 5)]
    f = quiet_fit_raw(raw, 2, u=40)
    x = np.linspace(0.5, 15, 30)
    assert np.allclose(f.pdf(x), d.pdf(x), rtol=1e-8, atol=1e-14)
