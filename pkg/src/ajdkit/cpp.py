"""Compound-Poisson moment machinery: normal raw moments and cumulant-to-moment maps."""

from __future__ import annotations

from itertools import product
from math import comb
from typing import Callable

from .polyalg import Basis, Poly


def normal_raw_moment(r: int, basis: Basis, mean: str = "mu_s", sd: str = "sigma_s") -> Poly:
    """``E[X^r]`` for ``X ~ N(mean, sd^2)`` via ``m_r = mean m_{r-1} + (r-1) sd^2 m_{r-2}``."""
    if r < 0:
        raise ValueError("negative order")
    mu = Poly.symbol(basis, mean)
    var = Poly.symbol(basis, sd, 2)
    prev, cur = Poly.zero(basis), Poly.one(basis)
    for i in range(1, r + 1):
        prev, cur = cur, mu * cur + var * prev * (i - 1)
    return cur


def moments_from_cumulants(kappa: Callable[[int], Poly], m: int, basis: Basis) -> list[Poly]:
    """Raw moments ``[M_0..M_m]`` from cumulants, ``M_n = sum_r C(n-1, r-1) kappa_r M_{n-r}``."""
    out = [Poly.one(basis)]
    cache = {}
    for n in range(1, m + 1):
        acc = Poly.zero(basis)
        for r in range(1, n + 1):
            if r not in cache:
                cache[r] = kappa(r)
            if cache[r].is_zero():
                continue
            acc = acc + cache[r] * out[n - r] * comb(n - 1, r - 1)
        out.append(acc)
    return out


class JointMoments:
    """Multivariate moments from joint cumulants.

    Uses ``M(nu) = sum_{mu <= nu - e_j} C(nu - e_j, mu) kappa(nu - mu) M(mu)``
    with ``j`` the first non-zero coordinate of ``nu``; results are memoized.
    """

    def __init__(self, kappa: Callable[[tuple[int, ...]], Poly], basis: Basis):
        self.kappa = kappa
        self.basis = basis
        self._memo: dict[tuple[int, ...], Poly] = {}
        self._kmemo: dict[tuple[int, ...], Poly] = {}

    def _k(self, nu):
        got = self._kmemo.get(nu)
        if got is None:
            got = self.kappa(nu)
            self._kmemo[nu] = got
        return got

    def __call__(self, nu: tuple[int, ...]) -> Poly:
        nu = tuple(nu)
        got = self._memo.get(nu)
        if got is not None:
            return got
        if not any(nu):
            res = Poly.one(self.basis)
        else:
            j = next(i for i, v in enumerate(nu) if v)
            reduced = list(nu)
            reduced[j] -= 1
            res = Poly.zero(self.basis)
            for mu in product(*(range(v + 1) for v in reduced)):
                kap = self._k(tuple(a - b for a, b in zip(nu, mu)))
                if kap.is_zero():
                    continue
                w = 1
                for a, b in zip(reduced, mu):
                    w *= comb(a, b)
                res = res + kap * self(mu) * w
        self._memo[nu] = res
        return res
