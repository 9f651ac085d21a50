"""Two-factor stochastic volatility and SV with normal jumps in the return.

Two-factor moments are assembled from single-factor Itô moments.  Given both
variance paths, ``I*_t`` is centred normal with variance ``IV_1 + IV_2``, and the
two factors are independent, so every joint moment of
``(IE_1, I_1, IE_2, I_2, I*)`` factorizes into single-rate pieces.  This keeps
all intermediate results inside the basis with ``1/k1`` and ``1/k2`` only.

SVJ moments convolve the Heston return with a compound Poisson sum of normals.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial

from . import heston
from .cpp import moments_from_cumulants, normal_raw_moment
from .heston import (DEFAULT_MAX_ORDER, HESTON_BASIS, FactorNames, ItoMoments, _check_order,
                     expect_state)
from .polyalg import Basis, Poly, Q

TWO_FACTOR_BASIS = Basis.of(
    [("eT1", "outer_exp"), ("eT2", "outer_exp"), ("t", "outer_time"),
     ("eS1", "inner_exp"), ("eS2", "inner_exp"), ("s", "inner_time"),
     ("k1inv", "rate_inv"), ("k2inv", "rate_inv"),
     ("theta1", "param"), ("theta2", "param"), ("sigma_v1", "param"), ("sigma_v2", "param"),
     ("mu", "param"), ("vbar10", "state"), ("vbar20", "state")],
    {"eT1": ("exp", "k1", "t"), "eT2": ("exp", "k2", "t"), "eS1": ("exp", "k1", "s"),
     "eS2": ("exp", "k2", "s"), "k1inv": ("inv", "k1"), "k2inv": ("inv", "k2")},
)

FACTORS = (
    FactorNames("eT1", "eS1", "t", "s", "k1inv", "theta1", "sigma_v1", "vbar10"),
    FactorNames("eT2", "eS2", "t", "s", "k2inv", "theta2", "sigma_v2", "vbar20"),
)

_ITO_2F = tuple(ItoMoments(TWO_FACTOR_BASIS, f) for f in FACTORS)


def _m(coef=1, **exps) -> Poly:
    return Poly.monomial(TWO_FACTOR_BASIS, coef, **exps)


def _iv_parts(i: int) -> tuple[Poly, Poly, Poly]:
    """``IV_i = c + alpha IE_i + beta I_i`` given ``v_{i,0}``."""
    f = FACTORS[i]
    ttilde = _m(**{f.kinv: 1}) - _m(**{f.kinv: 1, f.eT: -1})
    c = _m(**{f.theta: 1, f.t: 1}) + ttilde * _m(**{f.vbar0: 1})
    alpha = _m(-1, **{f.sigma_v: 1, f.kinv: 1, f.eT: -1})
    beta = _m(**{f.sigma_v: 1, f.kinv: 1})
    return c, alpha, beta


@lru_cache(maxsize=None)
def _factor_iv_moment(i: int, p: int, q: int, a: int) -> Poly:
    """``E[IE_i^p I_i^q IV_i^a | v_{i,0}]``."""
    c, alpha, beta = _iv_parts(i)
    ito = _ITO_2F[i]
    out = Poly.zero(TWO_FACTOR_BASIS)
    for x in range(a + 1):
        for y in range(a - x + 1):
            z = a - x - y
            mom = ito(p + y, q + z, 0)
            if mom.is_zero():
                continue
            w = factorial(a) // (factorial(x) * factorial(y) * factorial(z))
            out = out + mom * (c ** x * alpha ** y * beta ** z) * w
    return out


def _double_factorial_odd(n: int) -> int:
    """``(n-1)!!`` for even ``n``: the n-th moment of a standard normal."""
    out = 1
    for j in range(n - 1, 0, -2):
        out *= j
    return out


@lru_cache(maxsize=None)
def cond_joint_moment_2f(m1: int, m2: int, m3: int, m4: int, m5: int) -> Poly:
    """``E[IE_1^m1 I_1^m2 IE_2^m3 I_2^m4 (I*)^m5 | v_{1,0}, v_{2,0}]``."""
    if min(m1, m2, m3, m4, m5) < 0:
        raise ValueError("negative moment index")
    if m5 % 2:
        return Poly.zero(TWO_FACTOR_BASIS)
    n = m5 // 2
    out = Poly.zero(TWO_FACTOR_BASIS)
    for a in range(n + 1):
        left = _factor_iv_moment(0, m1, m2, a)
        if left.is_zero():
            continue
        right = _factor_iv_moment(1, m3, m4, n - a)
        if right.is_zero():
            continue
        out = out + left * right * comb(n, a)
    return out * _double_factorial_odd(m5)


@lru_cache(maxsize=None)
def _factor_x_iv(i: int, p: int, a: int) -> Poly:
    """``E[X_i^p IV_i^a | v_{i,0}]`` with ``X_i = (sigma_i/2k_i)(e^{-k_i t} IE_i - I_i)``."""
    f = FACTORS[i]
    half = _m(Q(1, 2), **{f.sigma_v: 1, f.kinv: 1})
    out = Poly.zero(TWO_FACTOR_BASIS)
    for j in range(p + 1):
        mom = _factor_iv_moment(i, j, p - j, a)
        if mom.is_zero():
            continue
        sign = -1 if (p - j) % 2 else 1
        out = out + mom.mul_monomial(sign * comb(p, j), _shift(f.eT, -j))
    return out * half ** p


def _shift(name: str, e: int) -> tuple[int, ...]:
    v = [0] * len(TWO_FACTOR_BASIS)
    v[TWO_FACTOR_BASIS.index(name)] = e
    return tuple(v)


@lru_cache(maxsize=None)
def _cond_central_2f(m: int) -> Poly:
    out = Poly.zero(TWO_FACTOR_BASIS)
    for c in range(0, m + 1, 2):
        h = c // 2
        rest = m - c
        acc = Poly.zero(TWO_FACTOR_BASIS)
        for p in range(rest + 1):
            for a in range(h + 1):
                left = _factor_x_iv(0, p, a)
                if left.is_zero():
                    continue
                right = _factor_x_iv(1, rest - p, h - a)
                if right.is_zero():
                    continue
                acc = acc + left * right * (comb(rest, p) * comb(h, a))
        out = out + acc * (comb(m, c) * _double_factorial_odd(c))
    return out


def _vbar_moment_factor(i: int):
    f = FACTORS[i]
    return lambda j: heston.vbar_stationary_moment(j, TWO_FACTOR_BASIS, f)


@lru_cache(maxsize=None)
def _uncond_central_2f(m: int) -> Poly:
    shift = Poly.zero(TWO_FACTOR_BASIS)
    for f in FACTORS:
        shift = shift - heston.centering_shift(TWO_FACTOR_BASIS, f) * _m(**{f.vbar0: 1})
    total = Poly.zero(TWO_FACTOR_BASIS)
    for i in range(m + 1):
        total = total + _cond_central_2f(i) * shift ** (m - i) * comb(m, i)
    total = expect_state(total, "vbar10", _vbar_moment_factor(0))
    return expect_state(total, "vbar20", _vbar_moment_factor(1))


def central_moment_y_2f(m: int, mode: str = "unconditional", *, max_order: int = DEFAULT_MAX_ORDER) -> Poly:
    """Central moment of the two-factor SV return (conditional on both initial variances, or stationary)."""
    _check_order(m, max_order)
    if mode == "conditional":
        return _cond_central_2f(m)
    if mode == "unconditional":
        return _uncond_central_2f(m)
    raise ValueError(f"unknown mode {mode!r}")


def cond_mean_y_2f() -> Poly:
    out = _m(1, mu=1, t=1)
    for f in FACTORS:
        out = out - _m(Q(1, 2), **{f.theta: 1, f.t: 1})
        out = out - heston.centering_shift(TWO_FACTOR_BASIS, f) * _m(**{f.vbar0: 1})
    return out


def raw_moment_y_2f(m: int, mode: str = "conditional", *, max_order: int = DEFAULT_MAX_ORDER) -> Poly:
    _check_order(m, max_order)
    mean = cond_mean_y_2f()
    out = Poly.zero(TWO_FACTOR_BASIS)
    for i in range(m + 1):
        out = out + _cond_central_2f(i) * mean ** (m - i) * comb(m, i)
    if mode == "conditional":
        return out
    if mode == "unconditional":
        out = expect_state(out, "vbar10", _vbar_moment_factor(0))
        return expect_state(out, "vbar20", _vbar_moment_factor(1))
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# SVJ

SVJ_BASIS = HESTON_BASIS.extend([("lambda", "param"), ("mu_s", "param"), ("sigma_s", "param")])


def svj_normal_raw_moment(r: int) -> Poly:
    return normal_raw_moment(r, SVJ_BASIS)


def _lam_t() -> Poly:
    return Poly.monomial(SVJ_BASIS, 1, **{"lambda": 1, "t": 1})


@lru_cache(maxsize=None)
def _cpp_moments(m: int, centered: bool) -> tuple[Poly, ...]:
    lt = _lam_t()

    def kappa(r: int) -> Poly:
        if centered and r == 1:
            return Poly.zero(SVJ_BASIS)
        return lt * svj_normal_raw_moment(r)

    return tuple(moments_from_cumulants(kappa, m, SVJ_BASIS))


def cpp_moment(m: int, *, centered: bool = False) -> Poly:
    """``E[J_t^m]`` for ``J_t`` a compound Poisson sum of ``N(mu_s, sigma_s^2)`` jumps at rate ``lambda``.

    Cumulants are ``lambda t E[j^r]``; moments follow from the complete Bell
    polynomial recurrence.  ``centered=True`` gives ``E[(J_t - E J_t)^m]``.
    """
    if m < 0:
        raise ValueError("negative order")
    return _cpp_moments(m, centered)[m]


def _embed(p: Poly) -> Poly:
    return p.embed(SVJ_BASIS)


@lru_cache(maxsize=None)
def _svj_raw(m: int, mode: str) -> Poly:
    out = Poly.zero(SVJ_BASIS)
    for i in range(m + 1):
        out = out + _embed(heston.raw_moment_y(i, mode)) * cpp_moment(m - i) * comb(m, i)
    return out


@lru_cache(maxsize=None)
def _svj_central(m: int, mode: str) -> Poly:
    out = Poly.zero(SVJ_BASIS)
    for i in range(m + 1):
        out = out + _embed(heston.central_moment_y(i, mode)) * cpp_moment(m - i, centered=True) * comb(m, i)
    return out


def svj_moment(m: int, mode: str = "conditional", *, max_order: int = DEFAULT_MAX_ORDER) -> Poly:
    """Raw moment ``E[y_t^m (| v0)]`` of the SVJ return, by binomial convolution of raw moments."""
    _check_order(m, max_order)
    if mode not in ("conditional", "unconditional"):
        raise ValueError(f"unknown mode {mode!r}")
    return _svj_raw(m, mode)


def svj_central_moment(m: int, mode: str = "conditional", *, max_order: int = DEFAULT_MAX_ORDER) -> Poly:
    """Central moment of the SVJ return: Heston central moments convolved with centred jump moments."""
    _check_order(m, max_order)
    if mode not in ("conditional", "unconditional"):
        raise ValueError(f"unknown mode {mode!r}")
    return _svj_central(m, mode)


def recenter(raw: list[Poly], mean: Poly) -> list[Poly]:
    """Central moments from raw moments ``raw[0..m]`` and the mean, by binomial expansion."""
    out = []
    neg = -mean
    for m in range(len(raw)):
        acc = Poly.zero(mean.basis)
        for i in range(m + 1):
            acc = acc + raw[i] * neg ** (m - i) * comb(m, i)
        out.append(acc)
    return out
