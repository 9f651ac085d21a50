"""Time the numba kernels against their pure-numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--paths N] [--steps S] [--samples Q]
Writes a small CSV (kernel, backend, seconds, speedup) to stdout.
"""

from __future__ import annotations

import argparse
import time
import warnings

import numpy as np

from ajdkit import _kernels
from ajdkit.pearson import fit_density


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_euler(paths: int, steps: int, repeat: int):
    rng = np.random.default_rng(0)
    z = rng.standard_normal((steps, paths))
    empty = np.zeros((1, 1))

    def run(kernel):
        v = np.full(paths, 0.010201)
        x = np.zeros(paths)
        iv = np.zeros(paths)
        kernel(v, x, iv, z, empty, False, 1e-3, 6.21, 0.019, 0.61, -0.7, 0.0319)
        return x

    out = {"numpy": _best(lambda: run(_kernels.cir_chunk_numpy), repeat)}
    if _kernels.cir_chunk_numba is not None:
        run(_kernels.cir_chunk_numba)  # compile
        out["numba"] = _best(lambda: run(_kernels.cir_chunk_numba), repeat)
        assert np.allclose(run(_kernels.cir_chunk_numba), run(_kernels.cir_chunk_numpy), rtol=0, atol=1e-12)
    return out


def bench_quantile(samples: int, repeat: int):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fit = fit_density(0.0, [1.0, 0.0, 1.0, 0.0, 3.0], 2)
    u = np.random.default_rng(1).random(samples)
    args = (fit.grid_x, fit.grid_cdf, fit._slopes)
    out = {"numpy": _best(lambda: _kernels.hermite_quantile_numpy(u, *args), repeat)}
    if _kernels.hermite_quantile_numba is not None:
        _kernels.hermite_quantile_numba(u[:10], *args)
        out["numba"] = _best(lambda: _kernels.hermite_quantile_numba(u, *args), repeat)
    return out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=100_000)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    print("kernel,backend,seconds,speedup")
    for name, res in (("euler_step", bench_euler(a.paths, a.steps, a.repeat)),
                      ("hermite_quantile", bench_quantile(a.samples, a.repeat))):
        for backend, sec in res.items():
            print(f"{name},{backend},{sec:.4f},{res['numpy'] / sec:.2f}")


if __name__ == "__main__":
    main()
