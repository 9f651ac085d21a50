"""Generalized Pearson densities fitted to a moment sequence.

A density solves ``p'(x)/p(x) = -(a + x) / sum_i c_i x^i``.  Multiplying by
``x^m`` and integrating by parts (boundary terms assumed to vanish) turns the
ODE into a linear system in ``(a, c_0..c_n)`` driven by the first ``2n``
moments.  The log-density is then integrated in closed form through a
partial-fraction expansion, and only the normalizing constant needs
quadrature.

Fitting happens in the standardized frame ``z = (x - mean) / sd``; the fitted
object maps back to ``x`` on every call.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import CubicHermiteSpline

from . import _kernels
from .quadrature import QuadratureError, integrate

GRID_POINTS = 4096
DEFAULT_ORDER = 4
DEFAULT_TAIL = 7.0
SKEW_WIDEN = 2.0
SKEW_LIMIT = 0.5
ROOT_MERGE_RTOL = 1e-8
MAX_MULTIPLICITY = 3
COND_LIMIT = 1e12
DEGENERATE_RTOL = 1e-10
SUPPORT_MARGIN = 1e-6
NORM_RTOL = 1e-10
BOUNDARY_MASS = 1e-6


class PearsonError(ArithmeticError):
    """Base class for numerical failures while fitting."""


class SingularSystemError(PearsonError):
    def __init__(self, cond: float):
        super().__init__(f"moment system is singular or ill-conditioned (condition estimate {cond:.3e})")
        self.cond = cond


class RootFindingError(PearsonError):
    pass


class SupportError(PearsonError):
    pass


class BoundaryMassWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# coefficients


@dataclass(frozen=True)
class PearsonCoeffs:
    """``p'/p = -(a + x) / (c_0 + c_1 x + ... + c_n x^n)``."""

    n: int
    a: float
    c: tuple[float, ...]
    requested_n: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("order must be >= 1")
        if len(self.c) != self.n + 1:
            raise ValueError("need n + 1 denominator coefficients")
        if not any(self.c):
            raise ValueError("denominator coefficients are all zero")

    def ratio(self, x):
        """``(a + x) / C(x)``, the negative log-derivative of the density."""
        x = np.asarray(x, dtype=float)
        return (self.a + x) / P.polyval(x, self.c)

    def translate(self, h: float) -> "PearsonCoeffs":
        """Coefficients in the variable ``y = x + h``."""
        new = np.zeros(self.n + 1)
        for i, ci in enumerate(self.c):
            for j in range(i + 1):
                new[j] += ci * comb(i, j) * (-h) ** (i - j)
        return PearsonCoeffs(self.n, self.a - h, tuple(float(v) for v in new), self.requested_n)

    def rescale(self, s: float) -> "PearsonCoeffs":
        """Coefficients in the variable ``y = s x`` (``s > 0``)."""
        return PearsonCoeffs(self.n, self.a * s, tuple(float(ci * s ** (2 - i)) for i, ci in enumerate(self.c)),
                             self.requested_n)


def moment_system(moments, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Matrix and right-hand side of the linear system for ``(a, c_0..c_n)``.

    ``moments`` holds ``mu_1..mu_2n`` (``mu_0 = 1`` is implied).  Row ``m``
    (``m = 0..n+1``) reads ``-a mu_m + sum_i (i+m) c_i mu_{i+m-1} = mu_{m+1}``.
    """
    mu = np.concatenate([[1.0], np.asarray(moments, dtype=float)])
    if len(mu) < 2 * n + 1:
        raise ValueError(f"order {n} needs {2 * n} moments, got {len(mu) - 1}")
    A = np.zeros((n + 2, n + 2))
    rhs = np.zeros(n + 2)
    for m in range(n + 2):
        A[m, 0] = -mu[m]
        for i in range(n + 1):
            if i + m >= 1:
                A[m, 1 + i] = (i + m) * mu[i + m - 1]
        rhs[m] = mu[m + 1]
    return A, rhs


def fit_coefficients(moments, n: int, *, min_order: int = 2) -> PearsonCoeffs:
    """Solve the moment system for order ``n`` in the frame the moments are given in.

    A vanishing leading coefficient (relative ``1e-10``) triggers a refit at
    ``n - 1`` down to ``min_order``; ``requested_n`` keeps the original order.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    requested = n
    while True:
        A, rhs = moment_system(moments, n)
        with np.errstate(all="ignore"):
            cond = float(np.linalg.cond(A))
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SingularSystemError(cond)
        sol = np.linalg.solve(A, rhs)
        a, c = float(sol[0]), tuple(float(v) for v in sol[1:])
        scale = max(abs(v) for v in c)
        if n > min_order and abs(c[-1]) < DEGENERATE_RTOL * scale:
            n -= 1
            continue
        return PearsonCoeffs(n, a, c, requested if requested != n else None)


# ---------------------------------------------------------------------------
# partial fractions


@dataclass(frozen=True)
class LinearTerm:
    """``sum_j residues[j-1] / (x - root)^j`` for a real root."""

    root: float
    residues: tuple[float, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.residues)


@dataclass(frozen=True)
class QuadraticTerm:
    """A conjugate root pair ``x^2 + p x + q``; residues belong to the root with positive imaginary part."""

    p: float
    q: float
    residues: tuple[complex, ...]

    @property
    def root(self) -> complex:
        return complex(-self.p / 2, math.sqrt(self.q - self.p * self.p / 4))

    @property
    def multiplicity(self) -> int:
        return len(self.residues)


@dataclass(frozen=True)
class PartialFractionForm:
    """``(a + x)/C(x) = poly(x) + linear terms + quadratic terms``."""

    poly: tuple[float, ...]
    linear: tuple[LinearTerm, ...]
    quadratic: tuple[QuadraticTerm, ...]

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = P.polyval(x, self.poly) if self.poly else np.zeros_like(x)
        for t in self.linear:
            for j, A in enumerate(t.residues, 1):
                out = out + A / (x - t.root) ** j
        for t in self.quadratic:
            r = t.root
            for j, A in enumerate(t.residues, 1):
                out = out + 2.0 * np.real(A / (x - r) ** j)
        return out

    def antiderivative(self, x):
        """``-integral`` of the ratio: the un-normalized log-density (up to a constant)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        if self.poly:
            out = out - P.polyval(x, P.polyint(self.poly))
        for t in self.linear:
            d = x - t.root
            for j, A in enumerate(t.residues, 1):
                if j == 1:
                    out = out - A * np.log(np.abs(d))
                else:
                    out = out - A * d ** (1 - j) / (1 - j)
        for t in self.quadratic:
            r = t.root
            alpha, beta = r.real, r.imag
            for j, A in enumerate(t.residues, 1):
                if j == 1:
                    out = out - (A.real * np.log(x * x + t.p * x + t.q)
                                 - 2.0 * A.imag * np.arctan((x - alpha) / beta))
                else:
                    out = out - 2.0 * np.real(A * (x - r) ** (1 - j) / (1 - j))
        return out

    @property
    def real_roots(self) -> tuple[float, ...]:
        return tuple(t.root for t in self.linear)


def _taylor(coefs, r, order):
    """First ``order`` Taylor coefficients of the polynomial ``coefs`` (ascending) about ``r``."""
    out = []
    cur = np.asarray(coefs, dtype=complex)
    for j in range(order):
        out.append(P.polyval(r, cur) if cur.size else 0.0)
        cur = P.polyder(cur) / (j + 1) if cur.size > 1 else np.zeros(0, dtype=complex)
    return np.array(out, dtype=complex)


def _series_div(num, den, order):
    q = np.zeros(order, dtype=complex)
    for i in range(order):
        acc = num[i] - sum(q[j] * den[i - j] for j in range(i))
        q[i] = acc / den[0]
    return q


def _cluster(roots):
    groups: list[list[complex]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for g in groups:
            c = np.mean(g)
            if abs(r - c) < ROOT_MERGE_RTOL * max(1.0, abs(c)):
                g.append(r)
                break
        else:
            groups.append([r])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def _trim(c, rtol=1e-14):
    c = list(c)
    scale = max(abs(v) for v in c)
    while len(c) > 1 and abs(c[-1]) <= rtol * scale:
        c.pop()
    return c


def partial_fractions(coeffs: PearsonCoeffs, *, residue_tol: float = 1e-10) -> PartialFractionForm:
    """Expand ``(a + x)/C(x)`` over the roots of ``C`` (companion-matrix eigenvalues).

    Roots within relative ``1e-8`` merge into one of higher multiplicity;
    roots whose residues all vanish (a factor shared with the numerator) are
    dropped.
    """
    den = _trim(coeffs.c)
    num = [coeffs.a, 1.0]
    quo, rem = P.polydiv(num, den)
    quo = _trim(quo, 0.0) if np.any(quo) else []
    poly = tuple(float(v) for v in quo) if len(quo) and any(quo) else ()
    if len(den) == 1:
        return PartialFractionForm(tuple(float(v) / den[0] for v in num), (), ())
    with np.errstate(all="ignore"):
        roots = np.roots(den[::-1])
    if not np.all(np.isfinite(roots)):
        raise RootFindingError("companion eigenvalues did not converge")
    groups = _cluster(list(roots))
    lead = den[-1]
    linear, quadratic = [], []
    seen_conj = set()
    for idx, (r, mult) in enumerate(groups):
        if mult > MAX_MULTIPLICITY:
            raise RootFindingError(f"root {r} has multiplicity {mult} > {MAX_MULTIPLICITY}")
        is_real = abs(r.imag) <= ROOT_MERGE_RTOL * max(1.0, abs(r))
        if not is_real and r.imag < 0:
            continue
        if is_real:
            r = complex(r.real, 0.0)
        others = np.array([lead], dtype=complex)
        for jdx, (s, ms) in enumerate(groups):
            if jdx == idx:
                continue
            for _ in range(ms):
                others = P.polymul(others, [-s, 1.0])
        nt = _taylor(rem, r, mult)
        dt = _taylor(others, r, mult)
        g = _series_div(nt, dt, mult)
        residues = g[::-1]  # residues[j-1] multiplies 1/(x-r)^j
        if np.all(np.abs(residues) < residue_tol * max(1.0, abs(r))):
            continue
        if is_real:
            linear.append(LinearTerm(float(r.real), tuple(float(v.real) for v in residues)))
        else:
            key = (round(r.real, 12), round(abs(r.imag), 12))
            if key in seen_conj:
                continue
            seen_conj.add(key)
            quadratic.append(QuadraticTerm(float(-2 * r.real), float(abs(r) ** 2),
                                           tuple(complex(v) for v in residues)))
    form = PartialFractionForm(poly, tuple(linear), tuple(quadratic))
    _check_reconstruction(coeffs, form)
    return form


def _check_reconstruction(coeffs: PearsonCoeffs, form: PartialFractionForm, tol: float = 1e-9) -> None:
    probes = np.linspace(-3.0, 3.0, 32) + 0.0123
    roots = np.array(form.real_roots)
    if roots.size:
        keep = np.min(np.abs(probes[:, None] - roots[None, :]), axis=1) > 1e-3
        probes = probes[keep]
    den = P.polyval(probes, coeffs.c)
    probes = probes[np.abs(den) > 1e-12 * max(abs(v) for v in coeffs.c)]
    exact = coeffs.ratio(probes)
    approx = form.evaluate(probes)
    scale = max(1.0, float(np.max(np.abs(exact)))) if exact.size else 1.0
    err = float(np.max(np.abs(exact - approx))) / scale if exact.size else 0.0
    if err > tol:
        raise RootFindingError(f"partial-fraction reconstruction error {err:.3e} exceeds {tol:g}")


# ---------------------------------------------------------------------------
# support


def build_support(mean: float, sd: float, skew: float, l: float | None = None, u: float | None = None,
                  real_roots=()) -> tuple[float, float]:
    """``[mean - l sd, mean + u sd]``, default ``l = u = 7`` widened by 2 on the long-tail side.

    Real denominator roots (in ``x`` units) inside the interval cut it short by
    a relative margin; a root within one ``sd`` of the mean is an error.
    """
    if not sd > 0 or not math.isfinite(sd):
        raise SupportError(f"standard deviation must be positive, got {sd}")
    if l is None:
        l = DEFAULT_TAIL + (SKEW_WIDEN if skew < -SKEW_LIMIT else 0.0)
    if u is None:
        u = DEFAULT_TAIL + (SKEW_WIDEN if skew > SKEW_LIMIT else 0.0)
    lo, hi = mean - l * sd, mean + u * sd
    for r in real_roots:
        if not lo < r < hi:
            continue
        dist = r - mean
        if abs(dist) <= sd:
            raise SupportError(f"denominator root {r:.6g} lies within one sd of the mean")
        if dist < 0:
            lo = r + SUPPORT_MARGIN * abs(dist)
        else:
            hi = r - SUPPORT_MARGIN * abs(dist)
    return lo, hi


# ---------------------------------------------------------------------------
# fitted density


def _monotone_slopes(x, F, d):
    """Fritsch-Carlson limiting of exact-pdf slopes so the Hermite interpolant stays monotone."""
    d = d.copy()
    h = np.diff(x)
    delta = np.diff(F) / h
    flat = delta <= 0
    d[:-1][flat] = 0.0
    d[1:][flat] = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.where(flat, 0.0, d[:-1] / delta)
        beta = np.where(flat, 0.0, d[1:] / delta)
    r2 = alpha * alpha + beta * beta
    over = r2 > 9.0
    if np.any(over):
        tau = 3.0 / np.sqrt(r2[over])
        idx = np.nonzero(over)[0]
        d[idx] = np.minimum(d[idx], tau * alpha[over] * delta[over])
        d[idx + 1] = np.minimum(d[idx + 1], tau * beta[over] * delta[over])
    return d


@dataclass
class PearsonFit:
    """A normalized Pearson density in the return variable ``x``.

    ``coeffs`` and ``pf`` live in the standardized frame ``z = (x - mean)/sd``;
    ``centred_coeffs`` gives the same ODE in ``x - mean``.
    """

    coeffs: PearsonCoeffs
    pf: PartialFractionForm
    mean: float
    sd: float
    support: tuple[float, float]
    logC: float
    grid_x: np.ndarray
    grid_cdf: np.ndarray
    grid_pdf: np.ndarray
    input_moments: tuple[float, ...]
    _spline: CubicHermiteSpline = field(default=None, repr=False, compare=False)
    _slopes: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.grid_x = np.asarray(self.grid_x, dtype=float)
        self.grid_cdf = np.asarray(self.grid_cdf, dtype=float)
        self.grid_pdf = np.asarray(self.grid_pdf, dtype=float)
        self._slopes = _monotone_slopes(self.grid_x, self.grid_cdf, self.grid_pdf)
        self._spline = CubicHermiteSpline(self.grid_x, self.grid_cdf, self._slopes, extrapolate=False)

    @property
    def n(self) -> int:
        return self.coeffs.n

    @property
    def centred_coeffs(self) -> PearsonCoeffs:
        return self.coeffs.rescale(self.sd)

    # densities --------------------------------------------------------------
    def log_unnormalized(self, x):
        """Closed-form log of the un-normalized density at ``x`` (inside the support)."""
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        if np.any((x < lo) | (x > hi)):
            raise ValueError("point outside the support")
        return _log_unnormalized(self.pf, self.mean, self.sd, x)

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = (x >= lo) & (x <= hi)
        out = np.full(x.shape, -np.inf)
        if np.any(inside):
            out[inside] = _log_unnormalized(self.pf, self.mean, self.sd, x[inside]) - self.logC
        return out

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        out = np.where(x <= lo, 0.0, 1.0)
        inside = (x > lo) & (x < hi)
        if np.any(inside):
            out = out.astype(float)
            out[inside] = np.clip(self._spline(x[inside]), 0.0, 1.0)
        return out

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
            raise ValueError("probabilities must lie in [0, 1]")
        flat = np.atleast_1d(p).ravel()
        out = _kernels.hermite_quantile(flat, self.grid_x, self.grid_cdf, self._slopes)
        return out.reshape(p.shape) if p.ndim else float(out[0])

    def sample(self, rng, size: int) -> np.ndarray:
        """Inverse-transform draws; ``rng`` is a :class:`numpy.random.Generator` or an int seed."""
        if not isinstance(rng, np.random.Generator):
            rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(rng)))
        if size == 0:
            return np.empty(0)
        return self.quantile(rng.random(size))

    def expect(self, g, *, breakpoints=(), rtol: float = NORM_RTOL, lo: float | None = None,
               hi: float | None = None) -> float:
        """``E[g(X)]`` restricted to ``[lo, hi]`` (default: the support) by adaptive quadrature."""
        a, b = self.support
        a = a if lo is None else max(a, lo)
        b = b if hi is None else min(b, hi)
        if b <= a:
            return 0.0
        return integrate(lambda x: g(x) * self.pdf(x), a, b, breakpoints=breakpoints, rtol=rtol,
                         atol=1e-300).value

    def moment(self, k: int, *, central: bool = False) -> float:
        c = self.mean if central else 0.0
        return self.expect(lambda x: (x - c) ** k)

    # serialization ------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "coeffs": {"n": self.coeffs.n, "a": self.coeffs.a, "c": list(self.coeffs.c),
                       "requested_n": self.coeffs.requested_n},
            "pf": {
                "poly": list(self.pf.poly),
                "linear": [{"root": t.root, "residues": list(t.residues)} for t in self.pf.linear],
                "quadratic": [{"p": t.p, "q": t.q, "residues": [[v.real, v.imag] for v in t.residues]}
                              for t in self.pf.quadratic],
            },
            "mean": self.mean,
            "sd": self.sd,
            "support": list(self.support),
            "logC": self.logC,
            "grid": {"x": self.grid_x.tolist(), "cdf": self.grid_cdf.tolist(), "pdf": self.grid_pdf.tolist()},
            "input_moments": list(self.input_moments),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "PearsonFit":
        c = d["coeffs"]
        coeffs = PearsonCoeffs(c["n"], c["a"], tuple(c["c"]), c.get("requested_n"))
        pfd = d["pf"]
        pf = PartialFractionForm(
            tuple(pfd["poly"]),
            tuple(LinearTerm(t["root"], tuple(t["residues"])) for t in pfd["linear"]),
            tuple(QuadraticTerm(t["p"], t["q"], tuple(complex(a, b) for a, b in t["residues"]))
                  for t in pfd["quadratic"]),
        )
        g = d["grid"]
        return cls(coeffs, pf, d["mean"], d["sd"], tuple(d["support"]), d["logC"],
                   np.array(g["x"]), np.array(g["cdf"]), np.array(g["pdf"]), tuple(d["input_moments"]))

    @classmethod
    def from_json(cls, text: str) -> "PearsonFit":
        return cls.from_dict(json.loads(text))


def _log_unnormalized(pf: PartialFractionForm, mean: float, sd: float, x):
    return pf.antiderivative((np.asarray(x, dtype=float) - mean) / sd)


def _log_max(pf, mean, sd, lo, hi) -> float:
    xs = np.linspace(lo, hi, 8193)
    vals = _log_unnormalized(pf, mean, sd, xs)
    return float(np.max(vals[np.isfinite(vals)]))


def normalize(pf: PartialFractionForm, mean: float, sd: float, support, *, rtol: float = NORM_RTOL) -> float:
    """``log C`` with ``C = integral of exp(log p~)`` over the support (max subtracted first)."""
    lo, hi = support
    peak = _log_max(pf, mean, sd, lo, hi)
    res = integrate(lambda x: np.exp(_log_unnormalized(pf, mean, sd, x) - peak), lo, hi, rtol=rtol)
    if not res.value > 0 or not math.isfinite(res.value):
        raise QuadratureError("normalizing integral is not positive and finite")
    return peak + math.log(res.value)


_CELL_NODES, _CELL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _cdf_table(pf, mean, sd, support, logC, points: int = GRID_POINTS):
    lo, hi = support
    x = np.linspace(lo, hi, points)
    a, b = x[:-1], x[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    pts = mid[:, None] + half[:, None] * _CELL_NODES[None, :]
    vals = np.exp(_log_unnormalized(pf, mean, sd, pts.ravel()) - logC).reshape(pts.shape)
    cells = (vals @ _CELL_WEIGHTS) * half
    F = np.concatenate([[0.0], np.cumsum(cells)])
    total = F[-1]
    if abs(total - 1.0) > 1e-8:
        raise QuadratureError(f"CDF table total {total!r} differs from 1 (normalization inconsistent)")
    F = F / total
    pdf = np.exp(_log_unnormalized(pf, mean, sd, x) - logC) / total
    return x, F, pdf


def standardized_moments(mean: float, central) -> tuple[float, list[float]]:
    """``(sd, [mu~_0..mu~_K])`` standardized moments from central moments ``central[k]``, ``k = 0..K``."""
    var = float(central[2])
    if not var > 0:
        raise SupportError("variance must be positive")
    sd = math.sqrt(var)
    out = [1.0, 0.0] + [float(central[k]) / sd ** k for k in range(2, len(central))]
    return sd, out


def central_from_raw(raw) -> tuple[float, list[float]]:
    """``(mean, [mu_0..mu_K central])`` from raw moments ``raw[0..K]`` with ``raw[0] = 1``."""
    raw = [float(v) for v in raw]
    mean = raw[1]
    out = []
    for m in range(len(raw)):
        out.append(sum(comb(m, i) * raw[i] * (-mean) ** (m - i) for i in range(m + 1)))
    return mean, out


def fit_density(mean: float, central, n: int = DEFAULT_ORDER, *, l: float | None = None,
                u: float | None = None) -> PearsonFit:
    """Fit, expand, truncate and normalize.

    ``central[k]`` is the k-th central moment for ``k = 0..2n`` (entries 0 and 1
    are ignored).
    """
    central = list(central)
    if len(central) < 2 * n + 1:
        raise ValueError(f"order {n} needs central moments up to {2 * n}")
    sd, z_moms = standardized_moments(mean, central[:2 * n + 1])
    coeffs = fit_coefficients(z_moms[1:], n)
    pf = partial_fractions(coeffs)
    skew = z_moms[3] if len(z_moms) > 3 else 0.0
    roots_x = [mean + sd * r for r in pf.real_roots]
    support = build_support(mean, sd, skew, l, u, roots_x)
    logC = normalize(pf, mean, sd, support)
    gx, gF, gp = _cdf_table(pf, mean, sd, support, logC)
    fit = PearsonFit(coeffs, pf, mean, sd, support, logC, gx, gF, gp,
                     tuple([mean] + [float(v) for v in central[2:2 * n + 1]]))
    edge = max(gp[0], gp[-1])
    if edge > BOUNDARY_MASS * float(np.max(gp)):
        warnings.warn(f"fitted density keeps mass at the support edge ({edge:.3g}); "
                      "the vanishing-boundary assumption may not hold", BoundaryMassWarning, stacklevel=2)
    return fit


def fit_density_raw(raw, n: int = DEFAULT_ORDER, **kw) -> PearsonFit:
    """As :func:`fit_density` but from raw moments ``raw[0..2n]`` (``raw[0] = 1``)."""
    mean, central = central_from_raw(raw)
    return fit_density(mean, central, n, **kw)


def sup_gap(f1: PearsonFit, f2: PearsonFit, points: int = 20001) -> float:
    """Sup-norm distance between two fitted pdfs over the union of their supports."""
    lo = min(f1.support[0], f2.support[0])
    hi = max(f1.support[1], f2.support[1])
    x = np.linspace(lo, hi, points)
    return float(np.max(np.abs(f1.pdf(x) - f2.pdf(x))))


def gap_report(fits: dict[int, PearsonFit]) -> list[tuple[int, int, float]]:
    orders = sorted(fits)
    return [(a, b, sup_gap(fits[a], fits[b])) for a, b in zip(orders, orders[1:])]
