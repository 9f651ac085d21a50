"""European call pricing from a fitted density, inverse-transform sampling and RMSE experiments."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .euler import EulerConfig, simulate_terminal_returns
from .models import public_mode
from .pearson import NORM_RTOL, PearsonFit
from .quadrature import integrate

SAMPLE_BATCH = 1 << 16


@dataclass(frozen=True)
class PricingSpec:
    s0: float
    K: float
    t: float
    r: float
    model: object = None
    mode: str = "conditional"

    def __post_init__(self):
        if not (self.s0 > 0 and self.K > 0):
            raise ValueError("s0 and K must be > 0")
        if not self.t > 0:
            raise ValueError("t must be > 0")
        object.__setattr__(self, "mode", public_mode(self.mode))

    @property
    def log_strike(self) -> float:
        return math.log(self.K / self.s0)

    @property
    def discount(self) -> float:
        return math.exp(-self.r * self.t)


@dataclass(frozen=True)
class PriceResult:
    price: float
    error: float

    def __float__(self) -> float:
        return self.price


def _integral(f, a, b, kink):
    res = integrate(f, a, b, breakpoints=(kink,), rtol=NORM_RTOL, atol=1e-300)
    return res.value, res.error


def forward_factor(fit: PearsonFit) -> float:
    """``E[e^y]`` under the fitted density."""
    lo, hi = fit.support
    return integrate(lambda y: np.exp(y) * fit.pdf(y), lo, hi, rtol=NORM_RTOL).value


def call_price(fit: PearsonFit, spec: PricingSpec) -> PriceResult:
    """``e^{-rt} E[(s0 e^y - K)^+]`` with the payoff kink as a panel boundary."""
    ys = spec.log_strike
    lo, hi = fit.support
    if ys >= hi:
        return PriceResult(0.0, 0.0)
    if ys <= lo:
        # never out of the money: the payoff is linear over the whole support
        return PriceResult(spec.discount * (spec.s0 * forward_factor(fit) - spec.K), 0.0)
    v, err = _integral(lambda y: (spec.s0 * np.exp(y) - spec.K) * fit.pdf(y), ys, hi, ys)
    return PriceResult(spec.discount * v, spec.discount * err)


def put_price(fit: PearsonFit, spec: PricingSpec) -> PriceResult:
    ys = spec.log_strike
    lo, hi = fit.support
    if ys <= lo:
        return PriceResult(0.0, 0.0)
    if ys >= hi:
        return PriceResult(spec.discount * (spec.K - spec.s0 * forward_factor(fit)), 0.0)
    v, err = _integral(lambda y: (spec.K - spec.s0 * np.exp(y)) * fit.pdf(y), lo, ys, ys)
    return PriceResult(spec.discount * v, spec.discount * err)


def price_from_density(fit: PearsonFit, spec: PricingSpec) -> float:
    return call_price(fit, spec).price


def parity_residual(fit: PearsonFit, spec: PricingSpec) -> float:
    """``C - P - e^{-rt}(s0 E[e^y] - K)`` from a single fitted density."""
    c = call_price(fit, spec).price
    p = put_price(fit, spec).price
    return c - p - spec.discount * (spec.s0 * forward_factor(fit) - spec.K)


# ---------------------------------------------------------------------------
# sampling


def _batch_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


def _draw(fit: PearsonFit, n: int, seed: int, stream: int) -> np.ndarray:
    parts = []
    for b, start in enumerate(range(0, n, SAMPLE_BATCH)):
        size = min(SAMPLE_BATCH, n - start)
        parts.append(fit.quantile(_batch_rng(seed, stream, b).random(size)))
    return np.concatenate(parts) if parts else np.empty(0)


def _map(fn, items, threads: int):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def simulate_returns(fit: PearsonFit, N: int, seed: int, *, threads: int = 1) -> np.ndarray:
    """``N`` inverse-transform draws of the return; streams are keyed by ``(seed, batch)``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if N == 0:
        return np.empty(0)
    starts = list(range(0, N, SAMPLE_BATCH))
    parts = _map(lambda ib: fit.quantile(_batch_rng(seed, 0, ib[0]).random(min(SAMPLE_BATCH, N - ib[1]))),
                 list(enumerate(starts)), threads)
    return np.concatenate(parts)


def discounted_payoffs(y: np.ndarray, spec: PricingSpec) -> np.ndarray:
    return spec.discount * np.maximum(spec.s0 * np.exp(y) - spec.K, 0.0)


@dataclass
class RmseReport:
    G: int
    N: int
    rmse: float
    seconds: float
    price_estimates: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.G <= 0 or self.N <= 0:
            raise ValueError("G and N must be > 0")


def rmse_experiment(fit: PearsonFit, spec: PricingSpec, reference_price: float, G: int, N: int, seed: int,
                    *, threads: int = 1) -> RmseReport:
    """``G`` independent Monte-Carlo prices from ``N`` samples each; RMSE against ``reference_price``.

    Replication ``g`` draws from streams keyed by ``(seed, g + 1, batch)``.
    """
    if G <= 0 or N <= 0:
        raise ValueError("G and N must be > 0")
    t0 = time.perf_counter()
    est = _map(lambda g: float(np.mean(discounted_payoffs(_draw(fit, N, seed, g + 1), spec))),
               list(range(G)), threads)
    seconds = time.perf_counter() - t0
    rmse = math.sqrt(sum((e - reference_price) ** 2 for e in est) / G)
    return RmseReport(G, N, rmse, seconds, est)


def rmse_slope(reports) -> float:
    """Least-squares slope of log RMSE against log N."""
    x = np.log([r.N for r in reports])
    y = np.log([r.rmse for r in reports])
    return float(np.polyfit(x, y, 1)[0])


def reports_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "rmse", "seconds"])
    for r in reports:
        w.writerow([r.N, repr(r.rmse), f"{r.seconds:.6f}"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Euler reference prices


@dataclass(frozen=True)
class ReferencePrice:
    price: float
    se: float
    replications: int
    n_paths: int


def steady_state_price_reference(spec: PricingSpec, replications: int = 1,
                                 cfg: EulerConfig = EulerConfig()) -> ReferencePrice:
    """Two-step benchmark: stabilize the variance by burn-in, then price by Euler paths.

    Each replication uses its own RNG stream; the payoffs are pooled for the
    mean and standard error.
    """
    if spec.mode != "steady-state":
        raise ValueError("steady_state_price_reference needs a steady-state pricing spec")
    if replications < 1:
        raise ValueError("replications must be >= 1")
    pay = [discounted_payoffs(simulate_terminal_returns(spec.model, spec.t, replace(cfg, stream=rep),
                                                        "steady-state"), spec)
           for rep in range(replications)]
    allp = np.concatenate(pay)
    return ReferencePrice(float(np.mean(allp)), float(np.std(allp, ddof=1) / math.sqrt(allp.size)),
                          replications, allp.size)


def euler_price(spec: PricingSpec, cfg: EulerConfig = EulerConfig()) -> ReferencePrice:
    """Euler Monte-Carlo price in either mode (reference for tests)."""
    p = discounted_payoffs(simulate_terminal_returns(spec.model, spec.t, cfg, spec.mode), spec)
    return ReferencePrice(float(np.mean(p)), float(np.std(p, ddof=1) / math.sqrt(p.size)), 1, p.size)
