"""Command-line front end: derive, density, price, simulate, bench.

Artifacts go to ``{out}/{model}/{mode}/``.  Exit codes: 0 success, 2 invalid
input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import heston, models
from .config import ConfigError, RunConfig
from .params import ParameterError
from .pearson import PearsonError, PearsonFit, fit_density, gap_report
from .polyalg import Poly, evaluate
from .pricing import call_price, reports_csv, rmse_experiment, rmse_slope, simulate_returns
from .quadrature import QuadratureError
from .svcj import CancellationError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3


def _outdir(cfg: RunConfig, out: str | None) -> Path:
    d = Path(out or cfg.out) / cfg.model / cfg.mode
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def moment_poly(cfg: RunConfig, m: int) -> Poly:
    """The order-``m`` artifact: 1, the mean, or the m-th central moment."""
    if m == 0:
        return Poly.one(models.central_moment(cfg.model, 2, cfg.mode).basis)
    if m == 1:
        return models.mean(cfg.model, cfg.mode)
    return models.central_moment(cfg.model, m, cfg.mode, max_order=max(cfg.max_order, m))


def _load_or_derive(cfg: RunConfig, m: int, d: Path) -> Poly:
    cached = d / f"moment_{m}.json"
    if cached.exists():
        return Poly.from_json(cached.read_text())
    return moment_poly(cfg, m)


def cmd_derive(cfg: RunConfig, args) -> int:
    d = _outdir(cfg, args.out)
    orders = [args.order] if args.order is not None else range(cfg.max_order + 1)
    for m in orders:
        if m < 0 or m > heston.DEFAULT_MAX_ORDER:
            raise ConfigError(f"order {m} outside 0..{heston.DEFAULT_MAX_ORDER}")
        p = moment_poly(cfg, m)
        _write(d / f"moment_{m}.csv", p.to_csv())
        _write(d / f"moment_{m}.json", p.to_json() + "\n")
        if cfg.model == "heston" and cfg.mode == "steady-state" and m >= 2:
            _write(d / f"table_{m}.csv", heston.table_csv(p))
        print(f"moment {m}: {len(p)} terms -> {d / f'moment_{m}.csv'}")
    return EXIT_OK


def numeric_moments(cfg: RunConfig, top: int, d: Path) -> tuple[float, list[float]]:
    b = models.bindings(cfg.params, cfg.t)
    mean = evaluate(_load_or_derive(cfg, 1, d), b)
    central = [1.0, 0.0] + [evaluate(_load_or_derive(cfg, m, d), b) for m in range(2, top + 1)]
    return mean, central


def _orders(cfg: RunConfig, args) -> list[int]:
    if args.pearson_n is not None:
        if 2 * args.pearson_n > heston.DEFAULT_MAX_ORDER or args.pearson_n < 1:
            raise ConfigError(f"pearson order must lie in 1..{heston.DEFAULT_MAX_ORDER // 2}")
        return [args.pearson_n]
    return list(cfg.pearson_n)


def _fit(cfg: RunConfig, n: int, d: Path, moments=None) -> PearsonFit:
    mean, central = moments or numeric_moments(cfg, 2 * n, d)
    return fit_density(mean, central[:2 * n + 1], n, l=cfg.l, u=cfg.u)


def _provenance(cfg: RunConfig, n: int) -> str:
    doc = cfg.to_dict()
    keep = {k: doc[k] for k in ("model", "params", "t", "mode") if k in doc}
    keep["support"] = doc.get("support")
    keep["pearson_n"] = n
    return json.dumps(keep, sort_keys=True) + "\n"


def _save_fit(cfg: RunConfig, n: int, fit: PearsonFit, d: Path) -> None:
    _write(d / f"fit_n{n}.json", fit.to_json() + "\n")
    _write(d / f"fit_n{n}.source.json", _provenance(cfg, n))


def _fit_or_load(cfg: RunConfig, n: int, d: Path) -> PearsonFit:
    """Reuse a saved fit only if it was built from the same model, parameters and support."""
    path = d / f"fit_n{n}.json"
    src = d / f"fit_n{n}.source.json"
    if path.exists() and src.exists() and src.read_text() == _provenance(cfg, n):
        return PearsonFit.from_json(path.read_text())
    return _fit(cfg, n, d)


def cmd_density(cfg: RunConfig, args) -> int:
    d = _outdir(cfg, args.out)
    orders = _orders(cfg, args)
    moms = numeric_moments(cfg, 2 * max(orders), d)
    fits = {}
    for n in orders:
        fit = _fit(cfg, n, d, moms)
        fits[n] = fit
        _save_fit(cfg, n, fit, d)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "pdf", "cdf"])
        for x, p, c in zip(fit.grid_x, fit.grid_pdf, fit.grid_cdf):
            w.writerow([repr(float(x)), repr(float(p)), repr(float(c))])
        _write(d / f"fit_n{n}_table.csv", buf.getvalue())
        print(f"n={n}: support [{fit.support[0]:.6g}, {fit.support[1]:.6g}] -> {d / f'fit_n{n}.json'}")
    if len(fits) > 1:
        lines = ["n_from,n_to,sup_gap"] + [f"{a},{b},{g!r}" for a, b, g in gap_report(fits)]
        _write(d / "gaps.csv", "\n".join(lines) + "\n")
        for line in lines[1:]:
            print("gap", line)
    return EXIT_OK


def cmd_price(cfg: RunConfig, args) -> int:
    d = _outdir(cfg, args.out)
    n = _orders(cfg, args)[-1]
    res = call_price(_fit_or_load(cfg, n, d), cfg.pricing)
    doc = {"model": cfg.model, "mode": cfg.mode, "pearson_n": n, "price": res.price, "error": res.error}
    if cfg.reference_price is not None:
        doc["reference_price"] = cfg.reference_price
    _write(d / f"price_n{n}.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"price {res.price:.6f} (quadrature error {res.error:.2e})")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, args) -> int:
    d = _outdir(cfg, args.out)
    n = _orders(cfg, args)[-1]
    size = args.samples if args.samples is not None else cfg.experiment.N[0]
    seed = args.seed if args.seed is not None else cfg.experiment.seed
    y = simulate_returns(_fit_or_load(cfg, n, d), size, seed, threads=args.threads)
    path = d / f"samples_n{n}.csv"
    _write(path, "y\n" + "".join(f"{v!r}\n" for v in y.tolist()))
    print(f"{size} samples -> {path} (mean {np.mean(y) if size else float('nan'):.6g})")
    return EXIT_OK


def cmd_bench(cfg: RunConfig, args) -> int:
    if cfg.reference_price is None:
        raise ConfigError("bench needs reference_price in the config")
    d = _outdir(cfg, args.out)
    n = _orders(cfg, args)[-1]
    fit = _fit_or_load(cfg, n, d)
    seed = args.seed if args.seed is not None else cfg.experiment.seed
    reports = [rmse_experiment(fit, cfg.pricing, cfg.reference_price, cfg.experiment.G, N, seed,
                               threads=args.threads) for N in cfg.experiment.N]
    _write(d / "bench.csv", reports_csv(reports))
    for r in reports:
        print(f"N={r.N} rmse={r.rmse:.6f} seconds={r.seconds:.3f}")
    if len(reports) > 1:
        print(f"log-log slope {rmse_slope(reports):.3f}")
    return EXIT_OK


COMMANDS = {"derive": cmd_derive, "density": cmd_density, "price": cmd_price,
            "simulate": cmd_simulate, "bench": cmd_bench}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ajdkit", description="Moment-based densities and option prices for SV models")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="run config JSON")
        p.add_argument("--order", type=int, help="single moment order to derive")
        p.add_argument("--pearson-n", type=int, help="Pearson order (overrides the config list)")
        p.add_argument("--seed", type=int, help="RNG seed (overrides the config)")
        p.add_argument("--threads", type=int, default=1, help="worker cap")
        p.add_argument("--out", help="output root (overrides the config)")
        if name == "simulate":
            p.add_argument("--samples", type=int, help="number of draws")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        cfg = RunConfig.load(args.config)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](cfg, args)
    except (ConfigError, ParameterError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (PearsonError, QuadratureError, CancellationError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
