"""SVCJ moments: contemporaneous jumps in return and variance.

Variance jumps are exponential with mean ``mu_v``; a return jump given the
variance jump ``J`` is ``N(mu_s + rho_J J, sigma_s^2)``, so the return jump sum
splits as ``rho_J IZ + IZ*`` where ``IZ*`` has independent ``N(mu_s, sigma_s^2)``
jumps on the same arrival times.

Conditional work uses ``vbar0 = v0 - theta``.  The stationary pipeline uses
``u0 = v0 - E[v]`` with ``E[v] = theta + lambda mu_v / k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, factorial

from .cpp import JointMoments, normal_raw_moment
from .heston import DEFAULT_MAX_ORDER, HESTON_BASIS, _check_order, centering_shift
from .polyalg import Basis, Poly, Q, integrate_inner


class CancellationError(ArithmeticError):
    """The stationary fixed-point solve left a time-dependent residue."""


SVCJ_BASIS = HESTON_BASIS.extend(
    [("lambda", "param"), ("mu_v", "param"), ("mu_s", "param"), ("sigma_s", "param"),
     ("rho_J", "param")]
)

# same symbols with the state re-based to u0 = v0 - E[v]
SVCJ_STATIONARY_BASIS = Basis.of(
    [(("u0" if s == "vbar0" else s), r) for s, r in zip(SVCJ_BASIS.symbols, SVCJ_BASIS.roles)],
    SVCJ_BASIS.link_map,
)

# the two-index variance recursion lives here
VARIANCE_BASIS = Basis.of(
    [("eT", "outer_exp"), ("t", "outer_time"), ("eS", "inner_exp"), ("s", "inner_time"),
     ("kinv", "rate_inv"), ("theta", "param"), ("sigma_v", "param"), ("lambda", "param"),
     ("mu_v", "param"), ("u0", "state")],
    {"eT": ("exp", "k", "t"), "eS": ("exp", "k", "s"), "kinv": ("inv", "k")},
)

STATIONARY_V_BASIS = Basis.of(
    [("kinv", "rate_inv"), ("theta", "param"), ("sigma_v", "param"), ("lambda", "param"),
     ("mu_v", "param")],
    {"kinv": ("inv", "k")},
)

_SWAP = [("eT", "eS"), ("t", "s")]


def _m(basis: Basis, coef=1, **exps) -> Poly:
    return Poly.monomial(basis, coef, **exps)


def _shift(basis: Basis, **exps) -> tuple[int, ...]:
    v = [0] * len(basis)
    for name, e in exps.items():
        v[basis.index(name)] += e
    return tuple(v)


# ---------------------------------------------------------------------------
# jump increments on (s, t]


@dataclass(frozen=True)
class SpanScaled:
    """``numerator / (t - s)`` when ``over_span`` is set, else just ``numerator``.

    Uniform-arrival expectations carry a ``1/(t-s)`` that only cancels once the
    Poisson rate ``lambda (t - s)`` multiplies in; keeping it as a flag avoids
    rational functions inside :class:`Poly`.
    """

    numerator: Poly
    over_span: bool

    def times_span(self) -> Poly:
        if self.over_span:
            return self.numerator
        b = self.numerator.basis
        return self.numerator * (_m(b, 1, t=1) - _m(b, 1, s=1))


def single_jump_mixed_moment(a: int, b: int, c: int, basis: Basis = SVCJ_BASIS) -> SpanScaled:
    """``E[(e^{k s_i} J_i)^a J_i^b (J*_i)^c]`` for one jump arriving uniformly on ``(s, t]``."""
    if (a, b, c) == (0, 0, 0):
        raise ValueError("the (0, 0, 0) mixed moment is not a jump moment")
    if min(a, b, c) < 0:
        raise ValueError("negative index")
    jump = _m(basis, factorial(a + b), mu_v=a + b) * normal_raw_moment(c, basis)
    if a == 0:
        return SpanScaled(jump, False)
    arrival = _m(basis, Q(1, a), eT=a, kinv=1) - _m(basis, Q(1, a), eS=a, kinv=1)
    return SpanScaled(arrival * jump, True)


def _triple_cumulant(nu: tuple[int, int, int]) -> Poly:
    lam = _m(SVCJ_BASIS, 1, **{"lambda": 1})
    return lam * single_jump_mixed_moment(*nu).times_span()


_TRIPLE = JointMoments(_triple_cumulant, SVCJ_BASIS)


def cpp_triple_moment(a: int, b: int, c: int) -> Poly:
    """``E[IEZ_{s,t}^a IZ_{s,t}^b (IZ*_{s,t})^c]`` from the joint cumulants of the three sums."""
    if min(a, b, c) < 0:
        raise ValueError("negative index")
    return _TRIPLE((a, b, c))


@lru_cache(maxsize=None)
def _triple_from_zero(a: int, b: int, c: int) -> Poly:
    return cpp_triple_moment(a, b, c).substitute("eS", 1).substitute("s", 0)


# ---------------------------------------------------------------------------
# six-index conditional joint moment


class SvcjMoments:
    """Memoized ``E[IE^m1 I^m2 I*^m3 IEZ^m4 IZ^m5 IZ*^m6 | v0]`` at time ``t``.

    Each moment with ``m1 + m2 + m3 >= 2`` is the time integral of the Itô drift
    of the diffusive block multiplied by the jump block; the jump block at
    ``t`` is split binomially into its value at ``s`` and the independent
    increment on ``(s, t]``.
    """

    def __init__(self):
        b = SVCJ_BASIS
        self._memo: dict[tuple[int, ...], Poly] = {}
        sh = lambda e, f: _shift(b, eS=e, **{f: 1}) if f else _shift(b, eS=e)  # noqa: E731
        # (shift monomial, dIE, dI, dI*, dIEZ) per family: vbar0, theta, sigma_v, IEZ rows
        self._families = (
            ("f", [(sh(1, "vbar0"), -2, 0, 0, 0), (sh(2, "theta"), -2, 0, 0, 0),
                   (sh(1, "sigma_v"), -1, 0, 0, 0), (sh(1, None), -2, 0, 0, 1)]),
            ("g", [(sh(-1, "vbar0"), 0, -2, 0, 0), (sh(0, "theta"), 0, -2, 0, 0),
                   (sh(-1, "sigma_v"), 1, -2, 0, 0), (sh(-1, None), 0, -2, 0, 1)]),
            ("h", [(sh(0, "vbar0"), -1, -1, 0, 0), (sh(1, "theta"), -1, -1, 0, 0),
                   (sh(0, "sigma_v"), 0, -1, 0, 0), (sh(0, None), -1, -1, 0, 1)]),
            ("q", [(sh(-1, "vbar0"), 0, 0, -2, 0), (sh(0, "theta"), 0, 0, -2, 0),
                   (sh(-1, "sigma_v"), 1, 0, -2, 0), (sh(-1, None), 0, 0, -2, 1)]),
        )

    def __call__(self, m1, m2, m3, m4, m5, m6) -> Poly:
        key = (m1, m2, m3, m4, m5, m6)
        got = self._memo.get(key)
        if got is None:
            got = self._derive(*key)
            self._memo[key] = got
        return got

    def _weights(self, m1, m2, m3):
        return {"f": Q(m1 * (m1 - 1), 2), "g": Q(m2 * (m2 - 1), 2), "h": Q(m1 * m2),
                "q": Q(m3 * (m3 - 1), 2)}

    def _derive(self, m1, m2, m3, m4, m5, m6) -> Poly:
        if min(m1, m2, m3, m4, m5, m6) < 0:
            raise ValueError("negative moment index")
        b = SVCJ_BASIS
        if m3 % 2:
            return Poly.zero(b)
        order = m1 + m2 + m3
        if order == 0:
            return _triple_from_zero(m4, m5, m6)
        if order == 1:
            return Poly.zero(b)
        weights = self._weights(m1, m2, m3)
        total = Poly.zero(b)
        for i1, i2, i3 in product(range(m4 + 1), range(m5 + 1), range(m6 + 1)):
            inc = cpp_triple_moment(m4 - i1, m5 - i2, m6 - i3)
            if inc.is_zero():
                continue
            bracket = Poly.zero(b)
            for fam, rows in self._families:
                w = weights[fam]
                if not w:
                    continue
                for shift, d1, d2, d3, dz in rows:
                    a1, a2, a3 = m1 + d1, m2 + d2, m3 + d3
                    if min(a1, a2, a3) < 0:
                        continue
                    inner = self(a1, a2, a3, i1 + dz, i2, i3)
                    if inner.is_zero():
                        continue
                    bracket = bracket + inner.swap(_SWAP).mul_monomial(w, shift)
            if bracket.is_zero():
                continue
            w = comb(m4, i1) * comb(m5, i2) * comb(m6, i3)
            total = total + (bracket * inc) * w
        return integrate_inner(total)


_ENGINE = SvcjMoments()


def cond_joint_moment_svcj(m1: int, m2: int, m3: int, m4: int, m5: int, m6: int) -> Poly:
    """Conditional joint moment of the six SVCJ building blocks given ``v0`` (in ``vbar0``)."""
    return _ENGINE(m1, m2, m3, m4, m5, m6)


# ---------------------------------------------------------------------------
# return moments


def _component_weights() -> tuple[Poly, ...]:
    b = SVCJ_BASIS
    half_sk = _m(b, Q(1, 2), sigma_v=1, kinv=1)
    return (
        half_sk * _m(b, 1, eT=-1),                # IE
        _m(b, 1, rho=1) - half_sk,                # I
        None,                                     # I*: sqrt(1 - rho^2), even powers only
        _m(b, Q(1, 2), kinv=1, eT=-1),            # IEZ
        _m(b, 1, rho_J=1) - _m(b, Q(1, 2), kinv=1),  # IZ
        Poly.one(b),                              # IZ*
    )


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _stochastic_power(m: int) -> Poly:
    """``E[(sum_i w_i X_i)^m | v0]`` over the six building blocks."""
    b = SVCJ_BASIS
    w = _component_weights()
    star2 = Poly.one(b) - _m(b, 1, rho=2)
    out = Poly.zero(b)
    for idx in _compositions(m, 6):
        if idx[2] % 2:
            continue
        mom = cond_joint_moment_svcj(*idx)
        if mom.is_zero():
            continue
        coef = factorial(m)
        term = Poly.one(b)
        for i, e in enumerate(idx):
            coef //= factorial(e)
            if e:
                term = term * (star2 ** (e // 2) if i == 2 else w[i] ** e)
        out = out + mom * term * coef
    return out


def jump_mean() -> Poly:
    """Expected value of the jump part of the return, ``E[(1/2k) e^{-kt} IEZ + (rho_J - 1/2k) IZ + IZ*]``."""
    return _stochastic_power(1)


def cond_mean_y_svcj() -> Poly:
    """``E[y_t | v0] = (mu - theta/2) t - vbar0 beta_t + jump mean``."""
    b = SVCJ_BASIS
    beta = centering_shift(b)
    return (_m(b, 1, mu=1, t=1) - _m(b, Q(1, 2), theta=1, t=1) - beta * _m(b, 1, vbar0=1)
            + jump_mean())


@lru_cache(maxsize=None)
def _cond_central_svcj(m: int) -> Poly:
    neg = -jump_mean()
    out = Poly.zero(SVCJ_BASIS)
    for j in range(m + 1):
        out = out + _stochastic_power(j) * neg ** (m - j) * comb(m, j)
    return out


@lru_cache(maxsize=None)
def _cond_raw_svcj(m: int) -> Poly:
    mean = cond_mean_y_svcj()
    out = Poly.zero(SVCJ_BASIS)
    for j in range(m + 1):
        out = out + _cond_central_svcj(j) * mean ** (m - j) * comb(m, j)
    return out


def cond_return_moment_svcj(m: int, *, central: bool = False, max_order: int = DEFAULT_MAX_ORDER) -> Poly:
    """``E[y_t^m | v0]`` (or the centred ``E[(y_t - E[y_t|v0])^m | v0]``) as a Poly in ``vbar0``."""
    _check_order(m, max_order)
    return _cond_central_svcj(m) if central else _cond_raw_svcj(m)


# ---------------------------------------------------------------------------
# stationary variance moments


def _vb(coef=1, **exps) -> Poly:
    return Poly.monomial(VARIANCE_BASIS, coef, **exps)


def _mean_variance(basis: Basis) -> Poly:
    return Poly.monomial(basis, 1, theta=1) + Poly.monomial(basis, 1, **{"lambda": 1, "mu_v": 1, "kinv": 1})


class _CentredIezMoments:
    """``E[IEZbar_{s,t}^r]`` for the centred weighted jump sum on ``(s, t]``."""

    def __init__(self):
        def kappa(r: int) -> Poly:
            if r == 1:
                return Poly.zero(VARIANCE_BASIS)
            return (_vb(Q(factorial(r), r), eT=r, kinv=1, mu_v=r, **{"lambda": 1})
                    - _vb(Q(factorial(r), r), eS=r, kinv=1, mu_v=r, **{"lambda": 1}))

        self._kappa = kappa
        self._cache: dict[int, list[Poly]] = {}

    def __call__(self, r: int) -> Poly:
        from .cpp import moments_from_cumulants
        if r not in self._cache:
            moms = moments_from_cumulants(self._kappa, r, VARIANCE_BASIS)
            for i, p in enumerate(moms):
                self._cache[i] = p
        return self._cache[r]


_IEZBAR = _CentredIezMoments()


class VarianceMoments:
    """Memoized ``E[IE_t^m1 IEZbar_t^m2 | v0]`` expressed in ``u0 = v0 - E[v]``."""

    def __init__(self):
        b = VARIANCE_BASIS
        self._memo: dict[tuple[int, int], Poly] = {}
        self._ev = _mean_variance(b)
        self._rows = (
            (_vb(1, eS=1, u0=1), -2, 0),
            (self._ev * _vb(1, eS=2), -2, 0),
            (_vb(1, eS=1, sigma_v=1), -1, 0),
            (_vb(1, eS=1), -2, 1),
        )

    def __call__(self, m1: int, m2: int) -> Poly:
        key = (m1, m2)
        got = self._memo.get(key)
        if got is None:
            got = self._derive(m1, m2)
            self._memo[key] = got
        return got

    def _derive(self, m1: int, m2: int) -> Poly:
        b = VARIANCE_BASIS
        if m1 < 0 or m2 < 0:
            raise ValueError("negative moment index")
        if m1 == 0:
            return _IEZBAR(m2).substitute("eS", 1).substitute("s", 0)
        if m1 == 1:
            return Poly.zero(b)
        weight = Q(m1 * (m1 - 1), 2)
        total = Poly.zero(b)
        for i in range(m2 + 1):
            inc = _IEZBAR(m2 - i)
            if inc.is_zero():
                continue
            bracket = Poly.zero(b)
            for factor, d1, dz in self._rows:
                inner = self(m1 + d1, i + dz)
                if inner.is_zero():
                    continue
                bracket = bracket + inner.swap(_SWAP) * factor
            if bracket.is_zero():
                continue
            total = total + bracket * inc * (comb(m2, i) * weight)
        return integrate_inner(total)


_VAR_ENGINE = VarianceMoments()


def cond_variance_central_moment(m: int) -> Poly:
    """``E[(v_t - E[v])^m | v0]`` as a Poly in ``u0`` over :data:`VARIANCE_BASIS`."""
    b = VARIANCE_BASIS
    out = Poly.zero(b)
    for m1 in range(m + 1):
        for m2 in range(m - m1 + 1):
            m3 = m - m1 - m2
            mom = _VAR_ENGINE(m1, m2)
            if mom.is_zero():
                continue
            w = factorial(m) // (factorial(m1) * factorial(m2) * factorial(m3))
            out = out + mom * _vb(w, sigma_v=m1, u0=m3)
    return out.mul_monomial(1, _shift(b, eT=-m))


@lru_cache(maxsize=None)
def _stationary_central(m: int) -> Poly:
    b = VARIANCE_BASIS
    if m == 0:
        return Poly.one(b)
    if m == 1:
        return Poly.zero(b)
    cond = cond_variance_central_moment(m).collect("u0")
    lead = cond.get(m, Poly.zero(b))
    if lead != _vb(1, eT=-m):
        raise CancellationError(f"leading u0 coefficient of order {m} is not e^(-{m}kt)")
    rhs = Poly.zero(b)
    for j, c in cond.items():
        if j < m:
            rhs = rhs + c * _stationary_central(j)
    # (1 - e^{-mkt}) X = rhs with X free of time: X is the time-free part of rhs
    ie, it = b.index("eT"), b.index("t")
    x = Poly(b, {mono: c for mono, c in rhs.items() if mono[ie] == 0 and mono[it] == 0})
    if (Poly.one(b) - _vb(1, eT=-m)) * x != rhs:
        raise CancellationError(f"time dependence does not cancel in stationary moment {m}")
    return x


def v_uncond_central_moment(m: int) -> Poly:
    """Stationary central moment ``E[(v - E[v])^m]`` of the jump-augmented variance."""
    if m < 0:
        raise ValueError("negative order")
    return _stationary_central(m).restrict(STATIONARY_V_BASIS)


def v_mean() -> Poly:
    """``E[v] = theta + lambda mu_v / k``."""
    return _mean_variance(STATIONARY_V_BASIS)


_REBASE_BASIS = SVCJ_BASIS.extend([("u0", "param")])


def rebase_to_u0(p: Poly) -> Poly:
    """Rewrite a ``vbar0`` polynomial in ``u0 = v0 - E[v]`` (``vbar0 = u0 + lambda mu_v / k``)."""
    w = p.embed(_REBASE_BASIS)
    sub = Poly.monomial(_REBASE_BASIS, 1, u0=1) + Poly.monomial(
        _REBASE_BASIS, 1, **{"lambda": 1, "mu_v": 1, "kinv": 1})
    return w.substitute("vbar0", sub).restrict(SVCJ_STATIONARY_BASIS)


def _expect_u0(p: Poly) -> Poly:
    out = Poly.zero(SVCJ_STATIONARY_BASIS)
    for j, coef in rebase_to_u0(p).collect("u0").items():
        out = out + coef * v_uncond_central_moment(j).embed(SVCJ_STATIONARY_BASIS)
    return out


@lru_cache(maxsize=None)
def _uncond_raw(m: int) -> Poly:
    return _expect_u0(_cond_raw_svcj(m))


@lru_cache(maxsize=None)
def _uncond_central(m: int) -> Poly:
    # E[(y - E y)^m] with E y = E[E[y|v0]]; expand around the conditional mean
    b = SVCJ_BASIS
    shift = -(centering_shift(b) * (_m(b, 1, vbar0=1) - _m(b, 1, **{"lambda": 1, "mu_v": 1, "kinv": 1})))
    total = Poly.zero(b)
    for j in range(m + 1):
        total = total + _cond_central_svcj(j) * shift ** (m - j) * comb(m, j)
    return _expect_u0(total)


def uncond_return_moment_svcj(m: int, *, central: bool = False, max_order: int = DEFAULT_MAX_ORDER) -> Poly:
    """Stationary moment of the SVCJ return, no state symbol left (over :data:`SVCJ_STATIONARY_BASIS`)."""
    _check_order(m, max_order)
    return _uncond_central(m) if central else _uncond_raw(m)
