"""Run configuration: one JSON document per experiment."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .heston import DEFAULT_MAX_ORDER
from .models import public_mode
from .params import MODEL_TYPES, ParameterError, params_from_dict, params_to_dict
from .pricing import PricingSpec


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    G: int = 100
    N: tuple[int, ...] = (10_000, 40_000, 160_000)
    seed: int = 0

    def __post_init__(self):
        if self.G <= 0 or not self.N or any(n <= 0 for n in self.N):
            raise ConfigError("experiment needs G > 0 and positive N values")


@dataclass(frozen=True)
class RunConfig:
    model: str
    params: object
    t: float
    mode: str = "conditional"
    max_order: int = DEFAULT_MAX_ORDER
    pearson_n: tuple[int, ...] = (4,)
    l: float | None = None
    u: float | None = None
    s0: float = 100.0
    K: float = 100.0
    r: float = 0.0
    reference_price: float | None = None
    experiment: ExperimentSpec = field(default_factory=ExperimentSpec)
    out: str = "out"

    def __post_init__(self):
        if self.model not in MODEL_TYPES:
            raise ConfigError(f"unknown model kind {self.model!r}")
        if not self.t > 0:
            raise ConfigError("t must be > 0")
        try:
            object.__setattr__(self, "mode", public_mode(self.mode))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.mode == "conditional":
            missing = ("v10", "v20") if self.model == "sv2f" else ("v0",)
            for name in missing:
                if getattr(self.params, name) is None:
                    raise ConfigError(f"conditional mode needs {name}")
        if self.max_order < 0:
            raise ConfigError("max_order must be >= 0")
        for n in self.pearson_n:
            if n < 1 or 2 * n > self.max_order:
                raise ConfigError(f"pearson order {n} needs moments up to {2 * n} (max_order={self.max_order})")
        if not (self.s0 > 0 and self.K > 0):
            raise ConfigError("s0 and K must be > 0")

    @property
    def pricing(self) -> PricingSpec:
        return PricingSpec(self.s0, self.K, self.t, self.r, self.params, self.mode)

    def to_dict(self) -> dict:
        d = {
            "model": self.model,
            "params": params_to_dict(self.params),
            "t": self.t,
            "mode": self.mode,
            "max_order": self.max_order,
            "pearson_n": list(self.pearson_n),
            "pricing": {"s0": self.s0, "K": self.K, "r": self.r},
            "experiment": {"G": self.experiment.G, "N": list(self.experiment.N), "seed": self.experiment.seed},
            "out": self.out,
        }
        if self.l is not None or self.u is not None:
            d["support"] = {"l": self.l, "u": self.u}
        if self.reference_price is not None:
            d["reference_price"] = self.reference_price
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {"model", "params", "t", "mode", "max_order", "pearson_n", "support", "pricing",
                 "reference_price", "experiment", "out"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        try:
            model = d["model"]
            params = params_from_dict(model, d["params"])
            t = float(d["t"])
        except KeyError as exc:
            raise ConfigError(f"missing config key {exc}") from None
        except ParameterError as exc:
            raise ConfigError(str(exc)) from None
        pn = d.get("pearson_n", [4])
        pn = (pn,) if isinstance(pn, int) else tuple(int(v) for v in pn)
        sup = d.get("support") or {}
        pr = d.get("pricing") or {}
        ex = d.get("experiment") or {}
        n_list = ex.get("N", ExperimentSpec.N)
        n_list = (n_list,) if isinstance(n_list, int) else tuple(int(v) for v in n_list)
        return cls(
            model=model, params=params, t=t, mode=d.get("mode", "conditional"),
            max_order=int(d.get("max_order", DEFAULT_MAX_ORDER)), pearson_n=pn,
            l=sup.get("l"), u=sup.get("u"),
            s0=float(pr.get("s0", 100.0)), K=float(pr.get("K", 100.0)), r=float(pr.get("r", 0.0)),
            reference_price=d.get("reference_price"),
            experiment=ExperimentSpec(int(ex.get("G", 100)), n_list, int(ex.get("seed", 0))),
            out=d.get("out", "out"),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_json(Path(path).read_text())
