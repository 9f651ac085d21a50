"""Conditional and unconditional moments of the Heston return.

The return over ``(0, t]`` splits into Itô integrals driven by the variance
Brownian motion (``IE_t`` weighted by ``e^{ks}``, plain ``I_t``) and by an
independent one (``I*_t``).  Their joint conditional moments given ``v0`` follow
from a recursion in which each moment is a time integral of lower-order ones;
everything is kept as exact :class:`~ajdkit.polyalg.Poly` objects.

Conditional work uses ``vbar0 = v0 - theta`` as the state symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

from .polyalg import Basis, Poly, Q, integrate_inner

DEFAULT_MAX_ORDER = 8

_TIME = [
    ("eT", "outer_exp"), ("t", "outer_time"), ("eS", "inner_exp"), ("s", "inner_time"),
    ("kinv", "rate_inv"),
]
_LINKS = {"eT": ("exp", "k", "t"), "eS": ("exp", "k", "s"), "kinv": ("inv", "k")}

HESTON_BASIS = Basis.of(
    _TIME + [("theta", "param"), ("sigma_v", "param"), ("rho", "param"), ("mu", "param"),
             ("vbar0", "state")],
    _LINKS,
)

# column order of the published coefficient tables: e^{-kt}, t, 1/k, theta, sigma_v, rho
TABLE_BASIS = Basis.of(
    [("eT", "outer_exp"), ("t", "outer_time"), ("kinv", "rate_inv"), ("theta", "param"),
     ("sigma_v", "param"), ("rho", "param")],
    {"eT": ("exp", "k", "t"), "kinv": ("inv", "k")},
)


class TableEncodingError(ValueError):
    pass


@dataclass(frozen=True)
class FactorNames:
    """Symbol names one variance factor uses inside a shared basis."""

    eT: str = "eT"
    eS: str = "eS"
    t: str = "t"
    s: str = "s"
    kinv: str = "kinv"
    theta: str = "theta"
    sigma_v: str = "sigma_v"
    vbar0: str = "vbar0"


def _check_order(m: int, max_order: int) -> None:
    if m < 0:
        raise ValueError("moment order must be non-negative")
    if m > max_order:
        raise ValueError(f"order {m} exceeds max order {max_order}; pass max_order= to raise it")


class ItoMoments:
    """Memoized ``E[IE_t^m1 I_t^m2 I*_t^m3 | v0]`` for one CIR factor.

    The memo is filled on demand; only indices reachable from a request are
    derived.  One writer at a time; finished Polys are immutable.
    """

    def __init__(self, basis: Basis = HESTON_BASIS, names: FactorNames = FactorNames()):
        self.basis = basis
        self.names = names
        self._memo: dict[tuple[int, int, int], Poly] = {(0, 0, 0): Poly.one(basis)}
        n = len(basis)
        idx = basis.index
        self._swap = [(names.eT, names.eS), (names.t, names.s)]

        def shift(e: int, factor: str) -> tuple[int, ...]:
            v = [0] * n
            v[idx(names.eS)] = e
            v[idx(factor)] += 1
            return tuple(v)

        th, sg, vb = names.theta, names.sigma_v, names.vbar0
        # (e^{ks} power, dIE, dI, dI*, factor) per recursion family
        self._f = [(shift(1, vb), -2, 0), (shift(2, th), -2, 0), (shift(1, sg), -1, 0)]
        self._g = [(shift(-1, vb), 0, -2), (shift(0, th), 0, -2), (shift(-1, sg), 1, -2)]
        self._h = [(shift(0, vb), -1, -1), (shift(1, th), -1, -1), (shift(0, sg), 0, -1)]
        self._q = [(shift(-1, vb), 0, 0), (shift(0, th), 0, 0), (shift(-1, sg), 1, 0)]

    def __call__(self, m1: int, m2: int, m3: int) -> Poly:
        key = (m1, m2, m3)
        got = self._memo.get(key)
        if got is None:
            got = self._derive(m1, m2, m3)
            self._memo[key] = got
        return got

    def _derive(self, m1: int, m2: int, m3: int) -> Poly:
        if m1 < 0 or m2 < 0 or m3 < 0:
            raise ValueError("negative moment index")
        if m3 % 2 or m1 + m2 + m3 == 1:
            return Poly.zero(self.basis)
        integrand = Poly.zero(self.basis)
        families = (
            (Q(m1 * (m1 - 1), 2), self._f, 0),
            (Q(m2 * (m2 - 1), 2), self._g, 0),
            (Q(m1 * m2), self._h, 0),
            (Q(m3 * (m3 - 1), 2), self._q, -2),
        )
        for weight, rows, d3 in families:
            if not weight:
                continue
            for shift, d1, d2 in rows:
                a, b, c = m1 + d1, m2 + d2, m3 + d3
                if a < 0 or b < 0 or c < 0:
                    continue
                inner = self(a, b, c)
                if inner.is_zero():
                    continue
                integrand = integrand + inner.swap(self._swap).mul_monomial(weight, shift)
        n = self.names
        return integrate_inner(integrand, outer_exp=n.eT, outer_time=n.t, inner_exp=n.eS,
                               inner_time=n.s, rate_inv=n.kinv, strict=True)


_ENGINE = ItoMoments()


def cond_ieii_moment(m1: int, m2: int, m3: int) -> Poly:
    """``E[IE_t^m1 I_t^m2 (I*_t)^m3 | v0]`` over :data:`HESTON_BASIS`."""
    return _ENGINE(m1, m2, m3)


def _sym(name: str, power: int = 1, coef=1, basis: Basis = HESTON_BASIS) -> Poly:
    return Poly.monomial(basis, coef, **{name: power})


def v_stationary_moment(m: int, basis: Basis = HESTON_BASIS, names: FactorNames = FactorNames()) -> Poly:
    """Raw moment ``E[v^m]`` of the stationary gamma law of a CIR factor."""
    out = Poly.one(basis)
    theta = Poly.symbol(basis, names.theta)
    step = Poly.monomial(basis, Q(1, 2), **{names.sigma_v: 2, names.kinv: 1})
    for j in range(m):
        out = out * (theta + step.scale(j))
    return out


def vbar_stationary_moment(j: int, basis: Basis = HESTON_BASIS, names: FactorNames = FactorNames()) -> Poly:
    """``E[(v0 - theta)^j]`` under the stationary gamma law."""
    neg_theta = Poly.monomial(basis, -1, **{names.theta: 1})
    out = Poly.zero(basis)
    for i in range(j + 1):
        out = out + v_stationary_moment(i, basis, names) * neg_theta ** (j - i) * comb(j, i)
    return out


def expect_state(p: Poly, state: str, moment) -> Poly:
    """Replace each power ``state^j`` by ``moment(j)`` (expectation over the initial state)."""
    out = Poly.zero(p.basis)
    for j, coef in p.collect(state).items():
        out = out + coef * moment(j)
    return out


def centering_shift(basis: Basis = HESTON_BASIS, names: FactorNames = FactorNames()) -> Poly:
    """``beta_t = (1 - e^{-kt}) / (2k)``."""
    return Poly.monomial(basis, Q(1, 2), **{names.kinv: 1}) - Poly.monomial(
        basis, Q(1, 2), **{names.kinv: 1, names.eT: -1})


@lru_cache(maxsize=None)
def _cond_central(m: int) -> Poly:
    b = HESTON_BASIS
    a_ie = _sym("sigma_v", 1, Q(1, 2)) * _sym("kinv") * _sym("eT", -1)
    a_i = _sym("rho") - _sym("sigma_v", 1, Q(1, 2)) * _sym("kinv")
    a_star2 = Poly.one(b) - _sym("rho", 2)
    out = Poly.zero(b)
    for c in range(0, m + 1, 2):
        for a in range(m - c + 1):
            bb = m - a - c
            mom = cond_ieii_moment(a, bb, c)
            if mom.is_zero():
                continue
            w = factorial(m) // (factorial(a) * factorial(bb) * factorial(c))
            out = out + mom * (a_ie ** a * a_i ** bb * a_star2 ** (c // 2)) * w
    return out


@lru_cache(maxsize=None)
def _uncond_central(m: int) -> Poly:
    shift = -(centering_shift() * _sym("vbar0"))
    total = Poly.zero(HESTON_BASIS)
    for i in range(m + 1):
        total = total + _cond_central(i) * shift ** (m - i) * comb(m, i)
    return expect_state(total, "vbar0", vbar_stationary_moment)


def central_moment_y(m: int, mode: str = "unconditional", *, max_order: int = DEFAULT_MAX_ORDER) -> Poly:
    """Central moment of the Heston return.

    ``conditional``: ``E[(y_t - E[y_t|v0])^m | v0]``, a polynomial in ``vbar0``.
    ``unconditional``: ``E[(y_t - E[y_t])^m]`` with ``v0`` drawn from the
    stationary law; no state symbol remains.
    """
    _check_order(m, max_order)
    if mode == "conditional":
        return _cond_central(m)
    if mode == "unconditional":
        return _uncond_central(m)
    raise ValueError(f"unknown mode {mode!r}")


def cond_mean_y(basis: Basis = HESTON_BASIS) -> Poly:
    """``E[y_t | v0] = (mu - theta/2) t - beta_t vbar0``."""
    mu = Poly.monomial(basis, 1, mu=1, t=1)
    th = Poly.monomial(basis, Q(-1, 2), theta=1, t=1)
    return mu + th - centering_shift(basis) * Poly.symbol(basis, "vbar0")


@lru_cache(maxsize=None)
def _cond_raw(m: int) -> Poly:
    mean = cond_mean_y()
    out = Poly.zero(HESTON_BASIS)
    for i in range(m + 1):
        out = out + _cond_central(i) * mean ** (m - i) * comb(m, i)
    return out


def raw_moment_y(m: int, mode: str = "conditional", *, max_order: int = DEFAULT_MAX_ORDER) -> Poly:
    """Raw moment ``E[y_t^m | v0]`` (conditional) or ``E[y_t^m]`` (unconditional)."""
    _check_order(m, max_order)
    if mode == "conditional":
        return _cond_raw(m)
    if mode == "unconditional":
        return expect_state(_cond_raw(m), "vbar0", vbar_stationary_moment)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# coefficient-table encoding: row = (i1..i6, numerator, denominator) with
# monomial e^{-i1 kt} t^i2 k^{-i3} theta^i4 sigma_v^i5 rho^i6


def table_encode(p: Poly) -> list[tuple[int, ...]]:
    if p.basis != TABLE_BASIS:
        try:
            p = p.restrict(TABLE_BASIS)
        except ValueError as exc:
            raise TableEncodingError(str(exc)) from None
    rows = []
    for mono, c in p.items():
        e, t, k, th, sg, rh = mono
        rows.append((-e, t, k, th, sg, rh, int(c.numerator), int(c.denominator)))
    return sorted(rows)


def table_decode(rows) -> Poly:
    terms: dict = {}
    for row in rows:
        row = tuple(int(v) for v in row)
        if len(row) != 8:
            raise TableEncodingError(f"row {row} does not have 8 columns")
        i1, i2, i3, i4, i5, i6, num, den = row
        mono = (-i1, i2, i3, i4, i5, i6)
        terms[mono] = terms.get(mono, 0) + Q(num, den)
    return Poly(TABLE_BASIS, terms)


def table_csv(p: Poly) -> str:
    lines = ["i1,i2,i3,i4,i5,i6,i7,i8"]
    lines += [",".join(str(v) for v in r) for r in table_encode(p)]
    return "\n".join(lines) + "\n"
