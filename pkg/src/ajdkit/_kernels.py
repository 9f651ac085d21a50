"""Hot loops: inverse-Hermite quantile lookup and the Euler variance step.

Each kernel has a numba version and a pure-numpy version with identical
arithmetic.  ``AJDKIT_DISABLE_NUMBA=1`` in the environment (read at import)
selects numpy; numpy is also used when numba is not importable.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False

ENV_FLAG = "AJDKIT_DISABLE_NUMBA"
USE_NUMBA = _HAVE_NUMBA and os.environ.get(ENV_FLAG, "") not in ("1", "true", "yes")
BACKEND = "numba" if USE_NUMBA else "numpy"

_NEWTON_ITERS = 60
_TOL = 1e-15


# ---------------------------------------------------------------------------
# quantile of a cubic Hermite CDF interpolant


def _hermite_quantile_py(u, xg, fg, dg, out):
    n = xg.shape[0]
    for j in range(u.shape[0]):
        target = u[j]
        i = np.searchsorted(fg, target, side="right") - 1
        if i < 0:
            i = 0
        if i > n - 2:
            i = n - 2
        x0 = xg[i]
        h = xg[i + 1] - x0
        f0 = fg[i]
        f1 = fg[i + 1]
        df = f1 - f0
        if df <= 0.0:
            out[j] = x0 + 0.5 * h
            continue
        m0 = dg[i] * h
        m1 = dg[i + 1] * h
        lo = 0.0
        hi = 1.0
        s = (target - f0) / df
        if s < 0.0:
            s = 0.0
        if s > 1.0:
            s = 1.0
        for _ in range(_NEWTON_ITERS):
            s2 = s * s
            s3 = s2 * s
            val = ((2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * m0
                   + (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * m1) - target
            if val > 0.0:
                hi = s
            else:
                lo = s
            der = (6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * f1 + (3 * s2 - 2 * s) * m1
            if der > 0.0:
                step = val / der
                nxt = s - step
            else:
                step = 1.0
                nxt = lo - 1.0
            if nxt <= lo or nxt >= hi:
                nxt = 0.5 * (lo + hi)
            if abs(nxt - s) < _TOL or hi - lo < _TOL:
                s = nxt
                break
            s = nxt
        out[j] = x0 + s * h
    return out


def hermite_quantile_numpy(u, xg, fg, dg):
    """Vectorized numpy version: Newton with bisection safeguard on every cell at once."""
    u = np.asarray(u, dtype=float)
    n = xg.shape[0]
    i = np.clip(np.searchsorted(fg, u, side="right") - 1, 0, n - 2)
    x0 = xg[i]
    h = xg[i + 1] - x0
    f0 = fg[i]
    f1 = fg[i + 1]
    df = f1 - f0
    flat = df <= 0.0
    m0 = dg[i] * h
    m1 = dg[i + 1] * h
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.clip(np.where(flat, 0.5, (u - f0) / np.where(flat, 1.0, df)), 0.0, 1.0)
    active = ~flat
    for _ in range(_NEWTON_ITERS):
        if not active.any():
            break
        s2 = s * s
        s3 = s2 * s
        val = ((2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * m0
               + (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * m1) - u
        hi = np.where(active & (val > 0.0), s, hi)
        lo = np.where(active & ~(val > 0.0), s, lo)
        der = (6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * f1 + (3 * s2 - 2 * s) * m1
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = np.where(der > 0.0, s - val / np.where(der > 0.0, der, 1.0), lo - 1.0)
        bad = (nxt <= lo) | (nxt >= hi)
        nxt = np.where(bad, 0.5 * (lo + hi), nxt)
        done = (np.abs(nxt - s) < _TOL) | (hi - lo < _TOL)
        s = np.where(active, nxt, s)
        active = active & ~done
    return x0 + s * h


def hermite_quantile_python(u, xg, fg, dg):
    """Scalar reference loop (the numba kernel body, run by the interpreter)."""
    u = np.asarray(u, dtype=float)
    return _hermite_quantile_py(u, xg, fg, dg, np.empty_like(u))


# ---------------------------------------------------------------------------
# full-truncation Euler step for a square-root variance factor


def _cir_chunk_py(v, x, iv, z, jumps, has_jumps, dt, k, theta, sigma, rho, mu):
    sq = np.sqrt(dt)
    nsteps, npaths = z.shape
    for j in range(nsteps):
        for p in range(npaths):
            vp = v[p]
            if vp < 0.0:
                vp = 0.0
            s = np.sqrt(vp)
            dw = sq * z[j, p]
            x[p] += (mu - 0.5 * vp) * dt + rho * s * dw
            iv[p] += vp * dt
            nv = v[p] + k * (theta - vp) * dt + sigma * s * dw
            if has_jumps:
                nv += jumps[j, p]
            v[p] = nv


def cir_chunk_numpy(v, x, iv, z, jumps, has_jumps, dt, k, theta, sigma, rho, mu):
    """Advance ``len(z)`` Euler steps in place (numpy, vectorized over paths)."""
    sq = np.sqrt(dt)
    for j in range(z.shape[0]):
        vp = np.maximum(v, 0.0)
        s = np.sqrt(vp)
        dw = sq * z[j]
        x += (mu - 0.5 * vp) * dt + rho * s * dw
        iv += vp * dt
        nv = v + k * (theta - vp) * dt + sigma * s * dw
        if has_jumps:
            nv += jumps[j]
        v[:] = nv


if USE_NUMBA:
    _hq_nb = numba.njit(cache=True, nogil=True)(_hermite_quantile_py)
    _cir_nb = numba.njit(cache=True, nogil=True)(_cir_chunk_py)

    def hermite_quantile_numba(u, xg, fg, dg):
        u = np.ascontiguousarray(u, dtype=np.float64)
        return _hq_nb(u, xg, fg, dg, np.empty_like(u))

    def cir_chunk_numba(v, x, iv, z, jumps, has_jumps, dt, k, theta, sigma, rho, mu):
        _cir_nb(v, x, iv, z, jumps, has_jumps, float(dt), float(k), float(theta), float(sigma),
                float(rho), float(mu))

    hermite_quantile = hermite_quantile_numba
    cir_chunk = cir_chunk_numba
else:  # pragma: no cover - depends on environment
    hermite_quantile_numba = None
    cir_chunk_numba = None
    hermite_quantile = hermite_quantile_numpy
    cir_chunk = cir_chunk_numpy
