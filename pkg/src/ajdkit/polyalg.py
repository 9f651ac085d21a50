"""Exact-rational multivariate polynomials over a fixed, ordered symbol basis.

Every moment formula in the package is a :class:`Poly`.  A monomial is a
tuple of integer exponents, one per basis symbol; coefficients are exact
rationals (``gmpy2.mpq`` when available, ``fractions.Fraction`` otherwise).

Exponential symbols such as ``eT`` stand for ``e^{kt}`` and may carry a
negative exponent (``e^{-kt}``).  Rate symbols such as ``kinv`` stand for
``1/k`` and only ever appear with non-negative exponents.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from operator import add
from typing import Iterable, Mapping

import numpy as np

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Q

__all__ = [
    "Q",
    "Basis",
    "Poly",
    "BasisMismatch",
    "UnboundSymbol",
    "MalformedIntegrand",
    "integrate_exp_poly",
    "integrate_inner",
    "evaluate",
]

ROLES = (
    "outer_exp",
    "outer_time",
    "inner_exp",
    "inner_time",
    "rate_inv",
    "param",
    "state",
)
_SIGNED_ROLES = ("outer_exp", "inner_exp")


class BasisMismatch(ValueError):
    pass


class UnboundSymbol(KeyError):
    pass


class MalformedIntegrand(ValueError):
    pass


@dataclass(frozen=True)
class Basis:
    """Ordered symbol set shared by all polynomials of one model variant.

    ``links`` records how derived symbols relate to plain numbers so that
    :func:`evaluate` can fill them in or check them: ``{"eT": ("exp", "k", "t"),
    "kinv": ("inv", "k")}``.
    """

    symbols: tuple[str, ...]
    roles: tuple[str, ...]
    links: tuple[tuple[str, tuple[str, ...]], ...] = ()
    _index: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.symbols) != len(self.roles):
            raise ValueError("symbols and roles differ in length")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("duplicate symbol in basis")
        for r in self.roles:
            if r not in ROLES:
                raise ValueError(f"unknown role {r!r}")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    @classmethod
    def of(cls, spec: Iterable[tuple[str, str]], links: Mapping[str, tuple] | None = None):
        spec = list(spec)
        return cls(
            tuple(s for s, _ in spec),
            tuple(r for _, r in spec),
            tuple(sorted((links or {}).items())),
        )

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise BasisMismatch(f"symbol {name!r} not in basis {self.symbols}") from None

    def role(self, name: str) -> str:
        return self.roles[self.index(name)]

    @property
    def link_map(self) -> dict:
        return dict(self.links)

    def extend(self, spec: Iterable[tuple[str, str]], links: Mapping[str, tuple] | None = None) -> "Basis":
        extra = [(s, r) for s, r in spec if s not in self._index]
        merged = dict(self.links)
        merged.update(links or {})
        return Basis.of(list(zip(self.symbols, self.roles)) + extra, merged)

    def zero_monomial(self) -> tuple[int, ...]:
        return (0,) * len(self.symbols)


def _as_q(c) -> Q:
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not allowed in Poly")
    return Q(c)


class Poly:
    """Immutable sparse polynomial ``{monomial: rational}`` over a :class:`Basis`."""

    __slots__ = ("basis", "_terms")

    def __init__(self, basis: Basis, terms: Mapping[tuple, object] | None = None):
        clean = {}
        n = len(basis)
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise ValueError(f"monomial {mono} has wrong length for basis of size {n}")
            for e, role in zip(mono, basis.roles):
                if e < 0 and role not in _SIGNED_ROLES:
                    raise ValueError(f"negative exponent on non-exponential symbol in {mono}")
            c = _as_q(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self.basis = basis
        self._terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, basis: Basis, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.basis = basis
        p._terms = terms
        return p

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, basis: Basis) -> "Poly":
        return cls._raw(basis, {})

    @classmethod
    def constant(cls, basis: Basis, c) -> "Poly":
        c = _as_q(c)
        return cls._raw(basis, {basis.zero_monomial(): c} if c else {})

    @classmethod
    def one(cls, basis: Basis) -> "Poly":
        return cls.constant(basis, 1)

    @classmethod
    def monomial(cls, basis: Basis, coef=1, **exponents: int) -> "Poly":
        mono = [0] * len(basis)
        for name, e in exponents.items():
            mono[basis.index(name)] = e
        return cls(basis, {tuple(mono): coef})

    @classmethod
    def symbol(cls, basis: Basis, name: str, power: int = 1) -> "Poly":
        return cls.monomial(basis, 1, **{name: power})

    # container protocol --------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple, Q]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_terms(self) -> list[tuple[tuple, Q]]:
        return sorted(self._terms.items())

    def __repr__(self):
        if not self._terms:
            return "Poly(0)"
        parts = []
        for mono, c in self.sorted_terms()[:8]:
            factors = [f"{s}^{e}" if e != 1 else s for s, e in zip(self.basis.symbols, mono) if e]
            parts.append(f"{c}*" + "*".join(factors) if factors else f"{c}")
        more = f" + ... ({len(self._terms)} terms)" if len(self._terms) > 8 else ""
        return "Poly(" + " + ".join(parts) + more + ")"

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.basis != self.basis:
                raise BasisMismatch("polynomials live over different bases")
            return other
        return Poly.constant(self.basis, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(self.basis, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.basis, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = _as_q(c)
        if not c:
            return Poly.zero(self.basis)
        return Poly._raw(self.basis, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(map(add, ma, mb))
                out[m] = get(m, 0) + ca * cb
        return Poly._raw(self.basis, {m: c for m, c in out.items() if c})

    def __rmul__(self, other) -> "Poly":
        return self.scale(other)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = Poly.one(self.basis)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.basis == other.basis and self._terms == other._terms
        if isinstance(other, (int, Q)):
            return self == Poly.constant(self.basis, other)
        return NotImplemented

    __hash__ = None

    def mul_monomial(self, coef, shift: tuple[int, ...]) -> "Poly":
        """Multiply by ``coef * x^shift`` without going through a full product."""
        coef = _as_q(coef)
        if not coef:
            return Poly.zero(self.basis)
        return Poly._raw(
            self.basis, {tuple(map(add, m, shift)): c * coef for m, c in self._terms.items()}
        )

    # structure -----------------------------------------------------------
    def degree(self, name: str) -> int:
        i = self.basis.index(name)
        return max((m[i] for m in self._terms), default=0)

    def min_degree(self, name: str) -> int:
        i = self.basis.index(name)
        return min((m[i] for m in self._terms), default=0)

    def collect(self, name: str) -> dict[int, "Poly"]:
        """Split into ``{power: coefficient Poly}`` with respect to one symbol."""
        i = self.basis.index(name)
        groups: dict[int, dict] = {}
        for m, c in self._terms.items():
            e = m[i]
            groups.setdefault(e, {})[m[:i] + (0,) + m[i + 1:]] = c
        return {e: Poly._raw(self.basis, d) for e, d in sorted(groups.items())}

    def free_of(self, *names: str) -> bool:
        idx = [self.basis.index(n) for n in names]
        return all(m[i] == 0 for m in self._terms for i in idx)

    def substitute(self, name: str, value) -> "Poly":
        """Replace ``name`` by an exact number or a Poly over the same basis."""
        groups = self.collect(name)
        if not isinstance(value, Poly):
            value = _as_q(value)
            out = Poly.zero(self.basis)
            for e, coef in groups.items():
                if e < 0:
                    raise ValueError(f"cannot substitute a number into negative power of {name}")
                if e == 0:
                    out = out + coef
                elif value:
                    out = out + coef.scale(value ** e)
            return out
        value = self._coerce(value)
        out = Poly.zero(self.basis)
        power = Poly.one(self.basis)
        current = 0
        for e, coef in groups.items():
            if e < 0:
                raise ValueError(f"cannot substitute into negative power of {name}")
            while current < e:
                power = power * value
                current += 1
            out = out + coef * power
        return out

    def swap(self, pairs: Iterable[tuple[str, str]]) -> "Poly":
        """Exchange exponent slots of symbol pairs (e.g. outer time with inner time)."""
        perm = list(range(len(self.basis)))
        for a, b in pairs:
            ia, ib = self.basis.index(a), self.basis.index(b)
            perm[ia], perm[ib] = ib, ia
        return Poly._raw(self.basis, {tuple(m[j] for j in perm): c for m, c in self._terms.items()})

    def embed(self, basis: Basis) -> "Poly":
        """Re-express over a basis that contains every symbol of this one."""
        pos = [basis.index(s) for s in self.basis.symbols]
        n = len(basis)
        out = {}
        for m, c in self._terms.items():
            new = [0] * n
            for j, e in zip(pos, m):
                new[j] = e
            out[tuple(new)] = c
        return Poly._raw(basis, out)

    def restrict(self, basis: Basis) -> "Poly":
        """Project onto a sub-basis; symbols outside it must have zero exponent."""
        pos = [self.basis.index(s) for s in basis.symbols]
        keep = set(pos)
        out = {}
        for m, c in self._terms.items():
            for j, e in enumerate(m):
                if e and j not in keep:
                    raise BasisMismatch(
                        f"symbol {self.basis.symbols[j]!r} present; cannot restrict to {basis.symbols}"
                    )
            out[tuple(m[j] for j in pos)] = c
        return Poly._raw(basis, out)

    # numerics and I/O ------------------------------------------------------
    def evaluate(self, bindings: Mapping[str, float]) -> float:
        return evaluate(self, bindings)

    def to_rows(self) -> list[tuple]:
        return [m + (int(c.numerator), int(c.denominator)) for m, c in self.sorted_terms()]

    @classmethod
    def from_rows(cls, basis: Basis, rows: Iterable[Iterable[int]]) -> "Poly":
        terms: dict = {}
        for row in rows:
            row = tuple(int(v) for v in row)
            mono, num, den = row[:-2], row[-2], row[-1]
            terms[mono] = terms.get(mono, 0) + Q(num, den)
        return cls(basis, terms)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(self.basis.symbols) + ["num", "den"])
        w.writerows(self.to_rows())
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "symbols": list(self.basis.symbols),
            "roles": list(self.basis.roles),
            "links": {k: list(v) for k, v in self.basis.links},
            "terms": [list(r) for r in self.to_rows()],
        }
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        doc = json.loads(text)
        basis = Basis(
            tuple(doc["symbols"]),
            tuple(doc["roles"]),
            tuple(sorted((k, tuple(v)) for k, v in doc.get("links", {}).items())),
        )
        return cls.from_rows(basis, doc["terms"])


# ---------------------------------------------------------------------------
# closed-form time integrals


@lru_cache(maxsize=None)
def _exp_poly_integral(n: int, j: int) -> tuple[tuple[int, int, int, Q], ...]:
    """Terms ``(exp_power, t_power, kinv_power, coef)`` of the integral of e^{nks} s^j over [0, t]."""
    if j < 0:
        raise MalformedIntegrand("negative power of the integration variable")
    if n == 0:
        return ((0, j + 1, 0, Q(1, j + 1)),)
    terms = []
    falling = 1  # j!/(j-i)!
    for i in range(j + 1):
        if i:
            falling *= j - i + 1
        terms.append((n, j - i, i + 1, Q((-1) ** i * falling, n ** (i + 1))))
    # lower limit: only the s^0 piece of the antiderivative survives at s = 0
    terms.append((0, 0, j + 1, -Q((-1) ** j * falling, n ** (j + 1))))
    return tuple(terms)


_INTEGRAL_BASIS = Basis.of(
    [("eT", "outer_exp"), ("t", "outer_time"), ("kinv", "rate_inv")],
    {"eT": ("exp", "k", "t"), "kinv": ("inv", "k")},
)


def integrate_exp_poly(n: int, j: int, basis: Basis = _INTEGRAL_BASIS, *,
                       exp_symbol: str = "eT", time_symbol: str = "t",
                       rate_inv: str = "kinv") -> Poly:
    """Closed form of the integral of ``e^{nks} s^j`` over ``s`` in ``[0, t]``."""
    ie, it, ik = basis.index(exp_symbol), basis.index(time_symbol), basis.index(rate_inv)
    out = {}
    for a, b, c, coef in _exp_poly_integral(n, j):
        mono = [0] * len(basis)
        mono[ie] += a
        mono[it] += b
        mono[ik] += c
        mono = tuple(mono)
        out[mono] = out.get(mono, 0) + coef
    return Poly(basis, out)


def integrate_inner(p: Poly, *, outer_exp: str = "eT", outer_time: str = "t",
                    inner_exp: str = "eS", inner_time: str = "s", rate_inv: str = "kinv",
                    strict: bool = False) -> Poly:
    """Integrate over the inner time ``s`` from 0 to ``t``.

    Each term ``e^{nks} s^j X`` becomes ``X`` times the closed form of
    :func:`integrate_exp_poly`.  Outer-time symbols in the integrand are
    constants of integration; with ``strict=True`` their presence is an error.
    """
    b = p.basis
    oe, ot, ie, it, ik = (b.index(x) for x in (outer_exp, outer_time, inner_exp, inner_time, rate_inv))
    out: dict = {}
    get = out.get
    for m, c in p._terms.items():
        if strict and (m[oe] or m[ot]):
            raise MalformedIntegrand(f"outer-time symbol present in integrand term {m}")
        n, j = m[ie], m[it]
        base = list(m)
        base[ie] = 0
        base[it] = 0
        for a, bb, cc, coef in _exp_poly_integral(n, j):
            new = base.copy()
            new[oe] += a
            new[ot] += bb
            new[ik] += cc
            key = tuple(new)
            out[key] = get(key, 0) + c * coef
    return Poly._raw(b, {m: c for m, c in out.items() if c})


# ---------------------------------------------------------------------------
# evaluation

_REL_LINK_TOL = 1e-12


def _resolve(basis: Basis, bindings: Mapping[str, float], needed: Iterable[str]) -> dict[str, float]:
    links = basis.link_map
    values = {}
    for name in needed:
        link = links.get(name)
        derived = None
        if link is not None:
            kind, *args = link
            if all(a in bindings for a in args):
                if kind == "exp":
                    derived = math.exp(bindings[args[0]] * bindings[args[1]])
                elif kind == "inv":
                    derived = 1.0 / bindings[args[0]]
        if name in bindings:
            v = float(bindings[name])
            if derived is not None and not math.isclose(v, derived, rel_tol=_REL_LINK_TOL, abs_tol=0.0):
                raise ValueError(f"binding {name}={v} inconsistent with {link} -> {derived}")
            values[name] = v
        elif derived is not None:
            values[name] = derived
        else:
            raise UnboundSymbol(name)
    return values


def evaluate(p: Poly, bindings: Mapping[str, float]) -> float:
    """Numeric value of ``p``; terms are summed in canonical order with ``math.fsum``."""
    if p.is_zero():
        return 0.0
    items = p.sorted_terms()
    exps = np.array([m for m, _ in items], dtype=np.int64)
    used = [i for i in range(exps.shape[1]) if exps[:, i].any()]
    names = [p.basis.symbols[i] for i in used]
    vals = _resolve(p.basis, bindings, names)
    coefs = np.array([float(c) for _, c in items])
    prod = coefs.copy()
    for i, name in zip(used, names):
        prod *= np.float64(vals[name]) ** exps[:, i].astype(np.float64)
    return math.fsum(prod.tolist())
