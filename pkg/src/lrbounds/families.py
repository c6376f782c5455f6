"""Distribution families: parameter names, constraints and the spec record."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

import numpy as np

from .errors import DomainError, UnknownEntryError

__all__ = ["DistributionSpec", "Family", "FAMILIES", "get_family", "validate_spec"]


@dataclass(frozen=True)
class DistributionSpec:
    family: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"family": self.family, "params": _jsonable(dict(self.params))}

    @classmethod
    def from_dict(cls, d: Mapping) -> "DistributionSpec":
        return cls(d["family"], dict(d.get("params", {})))

    def get(self, name: str):
        return self.params[name]


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


@dataclass(frozen=True)
class Family:
    name: str
    scalar_params: tuple[str, ...]
    check: Callable[[Mapping], Optional[str]]
    discrete: bool = False
    vector_params: tuple[str, ...] = ()
    matrix_params: tuple[str, ...] = ()
    defaults: Mapping[str, Any] = field(default_factory=dict)
    optional_params: tuple[str, ...] = ()

    @property
    def param_names(self) -> tuple[str, ...]:
        return self.scalar_params + self.vector_params + self.matrix_params + self.optional_params


def _need(cond: bool, msg: str) -> Optional[str]:
    return None if cond else msg


def _first(*msgs):
    for m in msgs:
        if m:
            return m
    return None


def _chk_normal(p):
    return _need(p["sigma"] > 0, "sigma must be positive")


def _chk_pos(*names):
    def chk(p):
        for k in names:
            if not p[k] > 0:
                return f"{k} must be positive"
        return None
    return chk


def _chk_unit(name, closed_lo=False):
    def chk(p):
        v = p[name]
        ok = (0 <= v < 1) if closed_lo else (0 < v < 1)
        return _need(ok, f"{name} must lie in {'[0, 1)' if closed_lo else '(0, 1)'}")
    return chk


def _chk_bnb(p):
    return _first(
        _need(p["alpha"] > 1, "alpha must exceed 1"),
        _need(p["beta"] > 0, "beta must be positive"),
        _need(p["r"] > 1, "r must exceed 1"),
    )


def _chk_consul(p):
    th, m = p["theta"], p["m"]
    return _first(
        _need(0 <= th < 1, "theta must lie in [0, 1)"),
        _need(1 <= m and m * th < 1, "m must satisfy 1 <= m < 1/theta"),
    )


def _chk_geeta(p):
    th, b = p["theta"], p["beta"]
    return _first(
        _need(0 < th < 1, "theta must lie in (0, 1)"),
        _need(1 < b and b * th < 1, "beta must satisfy 1 < beta < 1/theta"),
    )


def _chk_laglog(p):
    th, b = p["theta"], p["beta"]
    return _need(0 < th <= th * b < 1, "parameters must satisfy 0 < theta <= theta*beta < 1")


def _chk_lagnegbin(p):
    th, a, b = p["theta"], p["alpha"], p["beta"]
    return _first(
        _need(0 < th < 1, "theta must lie in (0, 1)"),
        _need(th < a * th < 1, "alpha must satisfy theta < alpha*theta < 1"),
        _need(b > 0, "beta must be positive"),
    )


def _chk_nakagami(p):
    return _first(_need(p["m"] >= 0.5, "m must be at least 1/2"), _need(p["sigma"] > 0, "sigma must be positive"))


def _chk_pareto(p):
    return _first(_need(p["theta"] > 1, "theta must exceed 1"), _need(p["a"] > 0, "a must be positive"))


def _chk_powerlaw(p):
    return _first(_need(math.isfinite(p["alpha"]), "alpha must be finite"), _need(p["beta"] > 1, "beta must exceed 1"))


def _chk_stirling(p):
    m = p["m"]
    return _first(
        _need(0 < p["theta"] < 1, "theta must lie in (0, 1)"),
        _need(m >= 1 and float(m).is_integer(), "m must be a positive integer"),
    )


def _chk_truncexp(p):
    return _need(p["theta"] != 0 and abs(p["theta"]) < 700, "theta must be nonzero (and |theta| < 700)")


def _chk_none(p):
    return None


def _chk_dcm(p):
    a = np.asarray(p["alphas"], float)
    trials = p.get("trials")
    return _first(
        _need(a.ndim == 1 and a.size >= 2, "alphas needs at least two entries (alpha_0..alpha_k)"),
        _need(bool(np.all(a > 0)), "every alpha must be positive"),
        _need(
            trials is None or (float(trials).is_integer() and trials >= 1),
            "trials must be a positive integer",
        ),
    )


def _chk_img(p):
    dim = p["p"]
    if not (float(dim).is_integer() and dim >= 1):
        return "p must be a positive integer"
    dim = int(dim)
    if not p["alpha"] > (dim - 1) / 2.0:
        return "alpha must exceed (p-1)/2"
    if not p["beta"] > 0:
        return "beta must be positive"
    psi = p.get("psi")
    if psi is not None:
        psi = np.asarray(psi, float)
        if psi.shape != (dim, dim):
            return f"psi must be {dim}x{dim}"
    return None


def _chk_mvn(p):
    mu = np.asarray(p["mu"], float)
    sig = np.asarray(p["sigma"], float)
    return _first(
        _need(mu.ndim == 1 and mu.size >= 1, "mu must be a non-empty vector"),
        _need(sig.shape == (mu.size, mu.size), "sigma must be a square matrix matching mu"),
    )


def _chk_mvp(p):
    b = np.asarray(p["betas"], float)
    return _first(
        _need(p["alpha"] > 0, "alpha must be positive"),
        _need(b.ndim == 1 and b.size >= 1 and bool(np.all(b > 0)), "betas must be a non-empty vector of positive reals"),
    )


_FAMILY_LIST = [
    Family("normal", ("mu", "sigma"), _chk_normal),
    Family("exponential", ("rate",), _chk_pos("rate")),
    Family("bernoulli", ("p",), _chk_unit("p"), discrete=True),
    Family("poisson", ("lam",), _chk_pos("lam"), discrete=True),
    Family("beta", ("alpha", "beta"), _chk_pos("alpha", "beta")),
    Family("beta_negbinom", ("alpha", "beta", "r"), _chk_bnb, discrete=True),
    Family("betaprime", ("alpha", "beta"), _chk_pos("alpha", "beta")),
    Family("borel", ("theta",), _chk_unit("theta"), discrete=True),
    Family("consul", ("theta", "m"), _chk_consul, discrete=True),
    Family("geeta", ("theta", "beta"), _chk_geeta, discrete=True),
    Family("gumbel", ("mu", "beta"), _chk_pos("beta")),
    Family("invgamma", ("alpha", "beta"), _chk_pos("alpha", "beta")),
    Family("invgauss", ("lam", "theta"), _chk_pos("lam", "theta")),
    Family("laglog", ("theta", "beta"), _chk_laglog, discrete=True),
    Family("lagnegbin", ("theta", "alpha", "beta"), _chk_lagnegbin, discrete=True),
    Family("laplace", ("alpha", "beta"), _chk_pos("beta")),
    Family("logarithmic", ("q",), _chk_unit("q"), discrete=True),
    Family("lognormal", ("mu", "sigma"), _chk_normal),
    Family("nakagami", ("m", "sigma"), _chk_nakagami),
    Family("pareto", ("theta", "a"), _chk_pareto),
    Family("powerlaw", ("alpha", "beta"), _chk_powerlaw),
    Family("stirling", ("theta", "m"), _chk_stirling, discrete=True),
    Family("f", ("m", "dof"), _chk_pos("m", "dof")),
    Family("t", ("dof",), _chk_pos("dof")),
    Family("truncexp", ("theta",), _chk_truncexp),
    Family("uniform", (), _chk_none),
    Family("weibull", ("alpha", "beta"), _chk_pos("alpha", "beta")),
    # trials is the multinomial count; bounds take it from the query instead
    Family("dcm", (), _chk_dcm, discrete=True, vector_params=("alphas",),
           defaults={"trials": None}, optional_params=("trials",)),
    Family("img", ("p", "alpha", "beta"), _chk_img, matrix_params=("psi",), defaults={"beta": 2.0, "psi": None}),
    Family("mvn", (), _chk_mvn, vector_params=("mu",), matrix_params=("sigma",)),
    Family("mvp", ("alpha",), _chk_mvp, vector_params=("betas",)),
]

FAMILIES: dict[str, Family] = {f.name: f for f in _FAMILY_LIST}


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownEntryError(f"unknown distribution family {name!r}") from None


def validate_spec(spec: DistributionSpec) -> dict:
    """Check names and constraints; returns the parameter dict with defaults filled."""
    fam = get_family(spec.family)
    params = dict(fam.defaults)
    params.update(spec.params)
    allowed = set(fam.param_names)
    extra = set(spec.params) - allowed
    if extra:
        raise DomainError(f"{spec.family}: unexpected parameter(s) {sorted(extra)}")
    for name in fam.param_names:
        if name not in params:
            raise DomainError(f"{spec.family}: missing parameter {name!r}")
    for name in fam.scalar_params:
        v = params[name]
        if isinstance(v, bool) or not isinstance(v, (int, float, np.integer, np.floating)):
            raise DomainError(f"{spec.family}: parameter {name!r} must be a real number")
        if not math.isfinite(v):
            raise DomainError(f"{spec.family}: parameter {name!r} must be finite, got {v!r}")
        params[name] = float(v)
    msg = fam.check(params)
    if msg:
        raise DomainError(f"{spec.family}: {msg}")
    return params
