"""Numeric parameter records for the four model variants."""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, fields


class FellerWarning(UserWarning):
    pass


class ParameterError(ValueError):
    pass


def _feller(k: float, theta: float, sigma_v: float, label: str = "") -> None:
    if 2.0 * k * theta <= sigma_v ** 2:
        warnings.warn(
            f"Feller condition violated{label}: 2*k*theta={2 * k * theta:.6g} <= sigma_v^2={sigma_v ** 2:.6g}",
            FellerWarning,
            stacklevel=3,
        )


def _positive(**kw) -> None:
    for name, v in kw.items():
        if not v > 0:
            raise ParameterError(f"{name} must be > 0, got {v}")


@dataclass(frozen=True)
class HestonParams:
    mu: float
    k: float
    theta: float
    sigma_v: float
    rho: float
    v0: float | None = None

    kind = "heston"

    def __post_init__(self):
        _positive(k=self.k, theta=self.theta, sigma_v=self.sigma_v)
        if abs(self.rho) > 1:
            raise ParameterError(f"|rho| must be <= 1, got {self.rho}")
        if self.v0 is not None and self.v0 < 0:
            raise ParameterError("v0 must be >= 0")
        _feller(self.k, self.theta, self.sigma_v)

    def bindings(self) -> dict[str, float]:
        b = {"mu": self.mu, "k": self.k, "theta": self.theta, "sigma_v": self.sigma_v, "rho": self.rho}
        if self.v0 is not None:
            b["vbar0"] = self.v0 - self.theta
        return b

    @property
    def mean_variance(self) -> float:
        return self.theta


@dataclass(frozen=True)
class SvjParams(HestonParams):
    lam: float = 0.0
    mu_s: float = 0.0
    sigma_s: float = 0.0

    kind = "svj"

    def __post_init__(self):
        super().__post_init__()
        if self.lam < 0:
            raise ParameterError("lambda must be >= 0")
        if self.sigma_s < 0:
            raise ParameterError("sigma_s must be >= 0")

    def bindings(self) -> dict[str, float]:
        b = super().bindings()
        b.update({"lambda": self.lam, "mu_s": self.mu_s, "sigma_s": self.sigma_s})
        return b


@dataclass(frozen=True)
class SvcjParams(HestonParams):
    lam: float = 0.0
    mu_v: float = 0.0
    mu_s: float = 0.0
    sigma_s: float = 0.0
    rho_J: float = 0.0

    kind = "svcj"

    def __post_init__(self):
        super().__post_init__()
        if self.lam < 0:
            raise ParameterError("lambda must be >= 0")
        if self.sigma_s < 0:
            raise ParameterError("sigma_s must be >= 0")
        if self.lam > 0 and not self.mu_v > 0:
            raise ParameterError("mu_v must be > 0 when lambda > 0")

    @property
    def mean_variance(self) -> float:
        return self.theta + self.lam * self.mu_v / self.k

    def bindings(self) -> dict[str, float]:
        b = super().bindings()
        b.update({
            "lambda": self.lam, "mu_v": self.mu_v, "mu_s": self.mu_s,
            "sigma_s": self.sigma_s, "rho_J": self.rho_J,
        })
        if self.v0 is not None:
            b["u0"] = self.v0 - self.mean_variance
        return b


@dataclass(frozen=True)
class TwoFactorParams:
    mu: float
    k1: float
    theta1: float
    sigma_v1: float
    k2: float
    theta2: float
    sigma_v2: float
    v10: float | None = None
    v20: float | None = None

    kind = "sv2f"

    def __post_init__(self):
        _positive(k1=self.k1, k2=self.k2)
        # theta2 = sigma_v2 = 0 is the degenerate one-factor case and stays legal
        for name in ("theta1", "sigma_v1", "theta2", "sigma_v2"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0")
        if self.k1 == self.k2:
            raise ParameterError("k1 == k2: the two factors are indistinguishable; use a one-factor model")
        for v in (self.v10, self.v20):
            if v is not None and v < 0:
                raise ParameterError("initial variances must be >= 0")
        if self.theta1 > 0 and self.sigma_v1 > 0:
            _feller(self.k1, self.theta1, self.sigma_v1, " (factor 1)")
        if self.theta2 > 0 and self.sigma_v2 > 0:
            _feller(self.k2, self.theta2, self.sigma_v2, " (factor 2)")

    def bindings(self) -> dict[str, float]:
        b = {
            "mu": self.mu, "k1": self.k1, "k2": self.k2, "theta1": self.theta1,
            "theta2": self.theta2, "sigma_v1": self.sigma_v1, "sigma_v2": self.sigma_v2,
        }
        if self.v10 is not None:
            b["vbar10"] = self.v10 - self.theta1
        if self.v20 is not None:
            b["vbar20"] = self.v20 - self.theta2
        return b


MODEL_TYPES = {"heston": HestonParams, "svj": SvjParams, "svcj": SvcjParams, "sv2f": TwoFactorParams}

# JSON field aliases: configs spell the jump intensity "lambda"
_ALIASES = {"lambda": "lam"}


def params_from_dict(kind: str, d: dict):
    try:
        cls = MODEL_TYPES[kind]
    except KeyError:
        raise ParameterError(f"unknown model kind {kind!r}") from None
    names = {f.name for f in fields(cls)}
    kw = {}
    for key, v in d.items():
        key = _ALIASES.get(key, key)
        if key not in names:
            raise ParameterError(f"unexpected parameter {key!r} for {kind}")
        kw[key] = v
    try:
        return cls(**kw)
    except TypeError as exc:
        raise ParameterError(str(exc)) from None


def params_to_dict(p) -> dict:
    d = asdict(p)
    if "lam" in d:
        d["lambda"] = d.pop("lam")
    return {k: v for k, v in d.items() if v is not None}
