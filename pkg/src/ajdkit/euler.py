"""Full-truncation Euler Monte Carlo for the four models (the validation oracle).

Paths run in fixed-size batches, each with its own Philox stream keyed by
``(seed, stream, batch)``, so results do not depend on the worker count.

Given a discretized variance path, the return's exposure to the Brownian
motion independent of the variance is exactly ``N(0, sum v_i dt)``; it is
drawn once per path at the end instead of once per step.  Jumps in the return
do not feed back into the variance, so their totals are also added at the end.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .models import public_mode
from .params import SvcjParams, SvjParams, TwoFactorParams

BURN_IN_DT = 0.01
MIN_BURN_IN_YEARS = 50.0


@dataclass(frozen=True)
class EulerConfig:
    dt: float = 1e-3
    n_paths: int = 100_000
    seed: int = 0
    truncation: bool = True
    batch: int = 1 << 15
    chunk_steps: int = 64
    threads: int = 1
    stream: int = 0  # extra RNG key, e.g. the replication index

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if self.n_paths < 0:
            raise ValueError("n_paths must be >= 0")
        if not self.truncation:
            raise ValueError("only the full-truncation scheme is implemented")


def _rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


@dataclass
class _Factor:
    k: float
    theta: float
    sigma: float
    rho: float
    mu: float
    v: np.ndarray
    jump_rate: float = 0.0
    jump_mean: float = 0.0


def _variance_jumps(rng, n_paths, horizon, steps, dt, rate, scale):
    """Jump step indices, path indices and sizes of an exponential compound Poisson on ``(0, horizon]``."""
    counts = rng.poisson(rate * horizon, n_paths)
    total = int(counts.sum())
    paths = np.repeat(np.arange(n_paths), counts)
    times = rng.random(total) * horizon
    step_idx = np.minimum((times / dt).astype(np.int64), steps - 1)
    sizes = rng.exponential(scale, total)
    return counts, paths, step_idx, sizes


def _advance(rng, factors, x, iv, horizon, dt, chunk, jumps=None):
    """Run every factor over ``horizon`` with ``dt`` steps; ``jumps[i]`` feeds factor ``i``."""
    steps = max(1, int(round(horizon / dt)))
    dt = horizon / steps
    n = x.shape[0]
    for start in range(0, steps, chunk):
        cs = min(chunk, steps - start)
        for i, f in enumerate(factors):
            z = rng.standard_normal((cs, n))
            jm = _EMPTY
            has = False
            if jumps is not None and jumps[i] is not None:
                paths, idx, sizes = jumps[i]
                sel = (idx >= start) & (idx < start + cs)
                if np.any(sel):
                    jm = np.zeros((cs, n))
                    np.add.at(jm, (idx[sel] - start, paths[sel]), sizes[sel])
                    has = True
            _kernels.cir_chunk(f.v, x, iv, z, jm, has, dt, f.k, f.theta, f.sigma, f.rho, f.mu)
    return steps


_EMPTY = np.zeros((1, 1))


def _burn_in(rng, factors, n, chunk):
    """Run variance factors to stationarity from their long-run mean."""
    scratch_x = np.zeros(n)
    scratch_iv = np.zeros(n)
    years = max(MIN_BURN_IN_YEARS, max(20.0 / f.k for f in factors))
    jumps = []
    steps = int(round(years / BURN_IN_DT))
    for f in factors:
        if f.jump_rate > 0:
            _, paths, idx, sizes = _variance_jumps(rng, n, years, steps, years / steps, f.jump_rate, f.jump_mean)
            jumps.append((paths, idx, sizes))
        else:
            jumps.append(None)
    _advance(rng, factors, scratch_x, scratch_iv, years, BURN_IN_DT, chunk, jumps)


def _simulate_batch(params, t, cfg: EulerConfig, mode: str, batch: int, n: int) -> np.ndarray:
    rng = _rng(cfg.seed, 7, cfg.stream, batch)
    mode = public_mode(mode)
    x = np.zeros(n)
    iv = np.zeros(n)
    if isinstance(params, TwoFactorParams):
        factors = [
            _Factor(params.k1, params.theta1, params.sigma_v1, 0.0, params.mu,
                    np.full(n, params.theta1 if params.v10 is None else params.v10)),
            _Factor(params.k2, params.theta2, params.sigma_v2, 0.0, 0.0,
                    np.full(n, params.theta2 if params.v20 is None else params.v20)),
        ]
        rho = 0.0
    else:
        rho = params.rho
        lam = getattr(params, "lam", 0.0) if isinstance(params, SvcjParams) else 0.0
        start = params.mean_variance if params.v0 is None else params.v0
        factors = [_Factor(params.k, params.theta, params.sigma_v, rho, params.mu, np.full(n, float(start)),
                           lam, getattr(params, "mu_v", 0.0))]
    if mode == "steady-state":
        for f in factors:
            f.v[:] = f.theta + (f.jump_rate * f.jump_mean / f.k)
        _burn_in(rng, factors, n, cfg.chunk_steps)
    elif mode != "conditional":
        raise ValueError(f"unknown mode {mode!r}")
    elif isinstance(params, TwoFactorParams):
        if params.v10 is None or params.v20 is None:
            raise ValueError("conditional simulation needs both initial variances")
    elif params.v0 is None:
        raise ValueError("conditional simulation needs v0")

    jumps = None
    ret_jump = np.zeros(n)
    if isinstance(params, SvcjParams) and params.lam > 0:
        steps = max(1, int(round(t / cfg.dt)))
        counts, paths, idx, sizes = _variance_jumps(rng, n, t, steps, t / steps, params.lam, params.mu_v)
        jumps = [(paths, idx, sizes)]
        ret = params.rho_J * sizes + params.mu_s + params.sigma_s * rng.standard_normal(sizes.size)
        np.add.at(ret_jump, paths, ret)
    _advance(rng, factors, x, iv, t, cfg.dt, cfg.chunk_steps, jumps)
    x += math.sqrt(max(0.0, 1.0 - rho * rho)) * np.sqrt(iv) * rng.standard_normal(n)
    if isinstance(params, SvjParams) and params.lam > 0:
        counts = rng.poisson(params.lam * t, n)
        x += counts * params.mu_s + np.sqrt(counts) * params.sigma_s * rng.standard_normal(n)
    x += ret_jump
    return x


def simulate_terminal_returns(params, t: float, cfg: EulerConfig, mode: str = "conditional") -> np.ndarray:
    """Terminal log-returns ``y_t = log s_t - log s_0`` of ``cfg.n_paths`` Euler paths."""
    if not t > 0:
        raise ValueError("t must be > 0")
    if cfg.dt > t:
        raise ValueError("dt must not exceed t")
    sizes = [min(cfg.batch, cfg.n_paths - s) for s in range(0, cfg.n_paths, cfg.batch)]
    jobs = list(enumerate(sizes))
    if cfg.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            parts = list(pool.map(lambda j: _simulate_batch(params, t, cfg, mode, *j), jobs))
    else:
        parts = [_simulate_batch(params, t, cfg, mode, *j) for j in jobs]
    return np.concatenate(parts) if parts else np.empty(0)


@dataclass
class MomentEstimate:
    """Sample moments with standard errors.  ``central[k]`` for ``k >= 2``; ``raw[k]`` for ``k >= 1``."""

    n: int
    mean: float
    mean_se: float
    central: dict[int, float] = field(default_factory=dict)
    central_se: dict[int, float] = field(default_factory=dict)
    raw: dict[int, float] = field(default_factory=dict)
    raw_se: dict[int, float] = field(default_factory=dict)

    def value(self, k: int) -> float:
        return self.mean if k == 1 else self.central[k]

    def se(self, k: int) -> float:
        return self.mean_se if k == 1 else self.central_se[k]


def sample_moments(y: np.ndarray, max_order: int = 4) -> MomentEstimate:
    """Central moments with delta-method standard errors.

    The influence function of the k-th central moment is
    ``(y - m)^k - mu_k - k mu_{k-1} (y - m)``.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    m = float(np.mean(y))
    d = y - m
    est = MomentEstimate(n, m, float(np.std(y, ddof=1) / math.sqrt(n)))
    powers = {0: np.ones_like(d), 1: d}
    for k in range(2, max_order + 1):
        powers[k] = powers[k - 1] * d
    mu = {k: float(np.mean(powers[k])) for k in powers}
    for k in range(2, max_order + 1):
        infl = powers[k] - mu[k] - k * mu[k - 1] * d
        est.central[k] = mu[k]
        est.central_se[k] = float(np.std(infl, ddof=1) / math.sqrt(n))
    yk = np.ones_like(y)
    for k in range(1, max_order + 1):
        yk = yk * y
        est.raw[k] = float(np.mean(yk))
        est.raw_se[k] = float(np.std(yk, ddof=1) / math.sqrt(n))
    return est


def euler_oracle_moments(params, t: float, cfg: EulerConfig, mode: str = "conditional",
                         max_order: int = 4) -> MomentEstimate:
    return sample_moments(simulate_terminal_returns(params, t, cfg, mode), max_order)


def step_size_check(params, t: float, cfg: EulerConfig, mode: str = "conditional",
                    max_order: int = 4) -> dict[int, float]:
    """``|moment(dt) - moment(dt/2)| / SE`` per order, same seed for both runs."""
    a = euler_oracle_moments(params, t, cfg, mode, max_order)
    half = replace(cfg, dt=cfg.dt / 2)
    b = euler_oracle_moments(params, t, half, mode, max_order)
    return {k: abs(a.value(k) - b.value(k)) / math.hypot(a.se(k), b.se(k)) for k in range(1, max_order + 1)}


def variance_paths_stationary(params, cfg: EulerConfig) -> np.ndarray:
    """Stationary draws of the variance after the burn-in (single-factor models)."""
    out = []
    for batch, s in enumerate(range(0, cfg.n_paths, cfg.batch)):
        n = min(cfg.batch, cfg.n_paths - s)
        rng = _rng(cfg.seed, 11, cfg.stream, batch)
        lam = params.lam if isinstance(params, SvcjParams) else 0.0
        f = _Factor(params.k, params.theta, params.sigma_v, 0.0, 0.0,
                    np.full(n, params.mean_variance), lam, getattr(params, "mu_v", 0.0))
        _burn_in(rng, [f], n, cfg.chunk_steps)
        out.append(f.v.copy())
    return np.concatenate(out) if out else np.empty(0)


__all__ = [
    "EulerConfig", "MomentEstimate", "simulate_terminal_returns", "sample_moments",
    "euler_oracle_moments", "step_size_check", "variance_paths_stationary",
]
