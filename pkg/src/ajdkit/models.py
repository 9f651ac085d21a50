"""Uniform access to the symbolic return moments of the four model kinds."""

from __future__ import annotations

from dataclasses import dataclass

from . import heston, multi_svj, svcj
from .polyalg import Poly, evaluate

MODES = ("conditional", "steady-state")
_MODE_ALIASES = {"conditional": "conditional", "steady-state": "unconditional", "unconditional": "unconditional",
                 "steady_state": "unconditional"}


def internal_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}") from None


def public_mode(mode: str) -> str:
    return "conditional" if internal_mode(mode) == "conditional" else "steady-state"


def raw_moment(kind: str, m: int, mode: str, *, max_order: int = heston.DEFAULT_MAX_ORDER) -> Poly:
    mode = internal_mode(mode)
    if kind == "heston":
        return heston.raw_moment_y(m, mode, max_order=max_order)
    if kind == "sv2f":
        return multi_svj.raw_moment_y_2f(m, mode, max_order=max_order)
    if kind == "svj":
        return multi_svj.svj_moment(m, mode, max_order=max_order)
    if kind == "svcj":
        if mode == "conditional":
            return svcj.cond_return_moment_svcj(m, max_order=max_order)
        return svcj.uncond_return_moment_svcj(m, max_order=max_order)
    raise ValueError(f"unknown model kind {kind!r}")


def central_moment(kind: str, m: int, mode: str, *, max_order: int = heston.DEFAULT_MAX_ORDER) -> Poly:
    """``E[(y_t - E y_t)^m]``, where the mean is conditional on ``v0`` in conditional mode."""
    mode = internal_mode(mode)
    if kind == "heston":
        return heston.central_moment_y(m, mode, max_order=max_order)
    if kind == "sv2f":
        return multi_svj.central_moment_y_2f(m, mode, max_order=max_order)
    if kind == "svj":
        return multi_svj.svj_central_moment(m, mode, max_order=max_order)
    if kind == "svcj":
        if mode == "conditional":
            return svcj.cond_return_moment_svcj(m, central=True, max_order=max_order)
        return svcj.uncond_return_moment_svcj(m, central=True, max_order=max_order)
    raise ValueError(f"unknown model kind {kind!r}")


def mean(kind: str, mode: str) -> Poly:
    return raw_moment(kind, 1, mode)


def bindings(params, t: float) -> dict[str, float]:
    b = dict(params.bindings())
    b["t"] = float(t)
    return b


@dataclass(frozen=True)
class NumericMoments:
    """Mean and central moments ``central[0..max_order]`` of the return at fixed parameters."""

    mean: float
    central: tuple[float, ...]

    @property
    def sd(self) -> float:
        return self.central[2] ** 0.5


def numeric_moments(params, t: float, mode: str, max_order: int) -> NumericMoments:
    if internal_mode(mode) == "conditional":
        _require_state(params)
    b = bindings(params, t)
    mu = evaluate(mean(params.kind, mode), b)
    cen = [1.0, 0.0] + [evaluate(central_moment(params.kind, m, mode, max_order=max_order), b)
                        for m in range(2, max_order + 1)]
    return NumericMoments(mu, tuple(cen[:max_order + 1]))


def _require_state(params) -> None:
    if params.kind == "sv2f":
        if params.v10 is None or params.v20 is None:
            raise ValueError("conditional mode needs v10 and v20")
    elif params.v0 is None:
        raise ValueError("conditional mode needs v0")
