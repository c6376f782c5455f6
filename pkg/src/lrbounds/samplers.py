"""Seeded variate generation and log densities for every catalog family.

The base generator is numpy's Philox4x64 counter-based generator keyed by a
SeedSequence built from (seed, stream_id), so a given pair reproduces the
same stream on any platform.  Continuous families use inverse-CDF or standard
transformations; the Lagrangian lattice families are sampled by inverting a
probability table built from their pmf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, UnknownEntryError
from .families import DistributionSpec, validate_spec
from .smallmat import as_symmetric, cholesky
from .specfun import log_beta, log_exprel, log_gamma, log_multivariate_gamma

__all__ = ["RngStream", "SampleBatch", "sample", "log_density", "pmf_table"]

_U64 = (1 << 64) - 1
_TABLE_MASS = 1.0 - 1e-12
_TABLE_CAP = 1 << 24


class RngStream:
    """One independent random stream, identified by (seed, stream_id)."""

    def __init__(self, seed: int, stream_id: int = 0):
        for name, v in (("seed", seed), ("stream_id", stream_id)):
            if isinstance(v, bool) or int(v) != v or not 0 <= v <= _U64:
                raise DomainError(f"{name} must be a 64-bit unsigned integer, got {v!r}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.Philox(seq))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    count: int

    def __post_init__(self):
        if self.count != len(self.values):
            raise ValueError("count must equal the number of values")


# --- pmf tables for the lattice families --------------------------------------------


def _lp_borel(p, x):
    th = p["theta"]
    return (x - 1) * np.log(th * x) - th * x - log_gamma(x + 1)


def _lp_consul(p, x):
    th, m = p["theta"], p["m"]
    # (1/x) C(mx, x-1) (θ/(1-θ))^{x-1} (1-θ)^{mx}
    lc = log_gamma(m * x + 1) - log_gamma(x) - log_gamma(m * x - x + 2)
    odds = (x - 1) * (np.log(th) - math.log1p(-th)) if th > 0 else np.where(x == 1, 0.0, -np.inf)
    return lc - np.log(x) + odds + m * x * math.log1p(-th)


def _lp_geeta(p, x):
    th, b = p["theta"], p["beta"]
    lc = log_gamma(b * x) - log_gamma(x + 1) - log_gamma(b * x - x)
    return lc - np.log(b * x - 1) + (x - 1) * math.log(th) + (b * x - x) * math.log1p(-th)


def _lp_laglog(p, x):
    th, b = p["theta"], p["beta"]
    return (
        x * math.log(th)
        + x * (b - 1) * math.log1p(-th)
        + log_gamma(b * x)
        - log_gamma(x + 1)
        - log_gamma(b * x - x + 1)
        - math.log(-math.log1p(-th))
    )


def _lp_lagnegbin(p, x):
    th, a, b = p["theta"], p["alpha"], p["beta"]
    lc = log_gamma(a * x + b + 1) - log_gamma(x + 1) - log_gamma(a * x + b - x + 1)
    return math.log(b) - np.log(a * x + b) + lc + x * math.log(th) + (b + a * x - x) * math.log1p(-th)


def _lp_logarithmic(p, x):
    q = p["q"]
    return x * math.log(q) - np.log(x) - math.log(-math.log1p(-q))


def _lp_bnb(p, x):
    a, b, r = p["alpha"], p["beta"], p["r"]
    return (
        log_gamma(r + x) - log_gamma(x + 1) - log_gamma(r)
        + log_gamma(a + r) + log_gamma(b + x) + log_gamma(a + b)
        - log_gamma(a + b + r + x) - log_gamma(a) - log_gamma(b)
    )


_LATTICE: dict[str, tuple[Callable, int]] = {
    "borel": (_lp_borel, 1),
    "consul": (_lp_consul, 1),
    "geeta": (_lp_geeta, 1),
    "laglog": (_lp_laglog, 1),
    "lagnegbin": (_lp_lagnegbin, 0),
    "logarithmic": (_lp_logarithmic, 1),
}


def _freeze(params):
    return tuple(sorted((k, v) for k, v in params.items() if isinstance(v, float)))


@lru_cache(maxsize=64)
def _table(family: str, frozen: tuple) -> tuple[np.ndarray, np.ndarray]:
    p = dict(frozen)
    if family == "stirling":
        log_p = _stirling_log_pmf(p["theta"], int(p["m"]))
        return np.arange(int(p["m"]), int(p["m"]) + log_p.size, dtype=float), np.exp(log_p)
    lp, start = _LATTICE[family]
    size = 1024
    while True:
        x = np.arange(start, start + size, dtype=float)
        probs = np.exp(lp(p, x))
        total = math.fsum(probs)
        if total >= _TABLE_MASS:
            return x, probs
        if size >= _TABLE_CAP:
            raise DomainError(
                f"{family}: pmf tail too heavy to tabulate ({total!r} of the mass in {size} points)"
            )
        size *= 4


def _stirling_log_pmf(theta: float, m: int) -> np.ndarray:
    """Stirling pmf as the m-fold convolution of the logarithmic pmf, from x = m."""
    x1, p1 = _table("logarithmic", (("q", theta),))
    dist = p1
    for _ in range(m - 1):
        dist = np.convolve(dist, p1)
        cum = np.cumsum(dist)
        keep = int(np.searchsorted(cum, _TABLE_MASS)) + 1
        dist = dist[:keep]
    with np.errstate(divide="ignore"):
        return np.log(dist)


def pmf_table(spec: DistributionSpec) -> tuple[np.ndarray, np.ndarray]:
    """(support points, probabilities) covering at least 1 - 1e-12 of the mass."""
    p = validate_spec(spec)
    if spec.family not in _LATTICE and spec.family != "stirling":
        raise DomainError(f"no pmf table for family {spec.family!r}")
    x, probs = _table(spec.family, _freeze(p))
    return x.copy(), probs.copy()


def _invert_table(gen, family, p, count):
    x, probs = _table(family, _freeze(p))
    cum = np.cumsum(probs)
    u = gen.random(count) * cum[-1]
    idx = np.minimum(np.searchsorted(cum, u, side="right"), x.size - 1)
    return x[idx]


# --- samplers -------------------------------------------------------------


def _s_powerlaw(gen, p, n):
    a, b = p["alpha"], p["beta"]
    lb = math.log(b)
    u = gen.random(n)
    if a == 1.0:
        return np.exp(u * lb)
    # x = (1 - u(1 - β^{1-α}))^{1/(1-α)}
    return np.exp(np.log1p(u * np.expm1((1.0 - a) * lb)) / (1.0 - a))


def _s_truncexp(gen, p, n):
    th = p["theta"]
    u = gen.random(n)
    return np.log1p(u * math.expm1(th)) / th


def _s_dcm(gen, p, n):
    trials = p.get("trials")
    if trials is None:
        raise DomainError("dcm: sampling needs the number of trials")
    probs = gen.dirichlet(np.asarray(p["alphas"], float), size=n)
    return gen.multinomial(int(trials), probs).astype(float)


def _s_mvn(gen, p, n):
    mu = np.asarray(p["mu"], float)
    factor = cholesky(p["sigma"])
    return mu + gen.standard_normal((n, mu.size)) @ factor.T


def _s_mvp(gen, p, n):
    b = np.asarray(p["betas"], float)
    z = gen.gamma(p["alpha"], 1.0, size=(n, 1))
    e = gen.standard_exponential((n, b.size))
    return b * (1.0 + e / z)


def _img_psi(p):
    dim = int(p["p"])
    psi = p.get("psi")
    return np.eye(dim) if psi is None else as_symmetric(psi)


def img_mean(spec_params) -> np.ndarray:
    """E[X] = (2/β) Ψ/(2α - p - 1)."""
    dim = int(spec_params["p"])
    return 2.0 / spec_params["beta"] * _img_psi(spec_params) / (2.0 * spec_params["alpha"] - dim - 1.0)


def _s_img(gen, p, n):
    # X⁻¹ is Wishart with 2α degrees of freedom and scale (β/2)Ψ⁻¹ (Bartlett factor)
    dim = int(p["p"])
    df = 2.0 * p["alpha"]
    psi = _img_psi(p)
    scale_factor = cholesky(0.5 * p["beta"] * np.linalg.inv(psi))
    a = np.zeros((n, dim, dim))
    for i in range(dim):
        a[:, i, i] = np.sqrt(gen.chisquare(df - i, size=n))
        if i:
            a[:, i, :i] = gen.standard_normal((n, i))
    la = scale_factor @ a
    w = la @ np.transpose(la, (0, 2, 1))
    x = np.linalg.inv(w)
    return 0.5 * (x + np.transpose(x, (0, 2, 1)))


_SAMPLERS: dict[str, Callable] = {
    "normal": lambda g, p, n: g.normal(p["mu"], p["sigma"], n),
    "exponential": lambda g, p, n: g.exponential(1.0 / p["rate"], n),
    "bernoulli": lambda g, p, n: (g.random(n) < p["p"]).astype(float),
    "poisson": lambda g, p, n: g.poisson(p["lam"], n).astype(float),
    "beta": lambda g, p, n: g.beta(p["alpha"], p["beta"], n),
    "beta_negbinom": lambda g, p, n: g.negative_binomial(
        p["r"], g.beta(p["alpha"], p["beta"], n)
    ).astype(float),
    "betaprime": lambda g, p, n: g.standard_gamma(p["alpha"], n) / g.standard_gamma(p["beta"], n),
    "gumbel": lambda g, p, n: p["mu"] - p["beta"] * np.log(g.standard_exponential(n)),
    "invgamma": lambda g, p, n: p["beta"] / g.standard_gamma(p["alpha"], n),
    "invgauss": lambda g, p, n: g.wald(p["theta"], p["lam"], n),
    "laplace": lambda g, p, n: g.laplace(p["alpha"], p["beta"], n),
    "lognormal": lambda g, p, n: np.exp(g.normal(p["mu"], p["sigma"], n)),
    "nakagami": lambda g, p, n: p["sigma"] * np.sqrt(g.standard_gamma(p["m"], n)),
    "pareto": lambda g, p, n: p["a"] * np.exp(g.standard_exponential(n) / p["theta"]),
    "powerlaw": _s_powerlaw,
    "stirling": lambda g, p, n: _invert_table(g, "stirling", p, n),
    "f": lambda g, p, n: g.f(p["m"], p["dof"], n),
    "t": lambda g, p, n: g.standard_t(p["dof"], n),
    "truncexp": _s_truncexp,
    "uniform": lambda g, p, n: g.random(n),
    "weibull": lambda g, p, n: (g.standard_exponential(n) / p["alpha"]) ** (1.0 / p["beta"]),
    "dcm": _s_dcm,
    "img": _s_img,
    "mvn": _s_mvn,
    "mvp": _s_mvp,
}
for _fam in _LATTICE:
    _SAMPLERS[_fam] = (lambda fam: lambda g, p, n: _invert_table(g, fam, p, n))(_fam)


def sample(spec: DistributionSpec, rng: RngStream, count: int) -> SampleBatch:
    """``count`` iid draws; vectors come back as rows, matrices as a (count, p, p) stack."""
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    p = validate_spec(spec)
    try:
        draw = _SAMPLERS[spec.family]
    except KeyError:
        raise UnknownEntryError(f"no sampler for family {spec.family!r}") from None
    values = np.asarray(draw(rng.generator, p, int(count)), dtype=float)
    return SampleBatch(values, int(count))


# --- log densities ----------------------------------------------------------------


def _support(cond: bool, family: str, x) -> None:
    if not cond:
        raise DomainError(f"{family}: {x!r} is outside the support")


def _integer_at_least(x, lo):
    return float(x).is_integer() and x >= lo


def _ld_stirling(p, x):
    m = int(p["m"])
    xs, probs = _table("stirling", _freeze(p))
    k = int(x) - m
    if k >= xs.size or probs[k] == 0.0:
        return -math.inf
    return math.log(probs[k])


def _ld_f(p, x):
    m, d = p["m"], p["dof"]
    return (
        log_gamma(0.5 * (m + d)) - log_gamma(0.5 * m) - log_gamma(0.5 * d)
        + 0.5 * m * math.log(m / d) + (0.5 * m - 1.0) * math.log(x)
        - 0.5 * (m + d) * math.log1p(m * x / d)
    )


def _ld_t(p, x):
    d = p["dof"]
    return (
        log_gamma(0.5 * (d + 1)) - log_gamma(0.5 * d) - 0.5 * math.log(d * math.pi)
        - 0.5 * (d + 1) * math.log1p(x * x / d)
    )


def _ld_powerlaw(p, x):
    a, b = p["alpha"], p["beta"]
    lb = math.log(b)
    # ln C(α), with C(1) = ln β
    return -a * math.log(x) - math.log(lb) - log_exprel(-(a - 1.0) * lb)


def _ld_truncexp(p, x):
    th = p["theta"]
    return math.log(th / math.expm1(th)) + th * x


def _ld_dcm(p, x):
    a = np.asarray(p["alphas"], float)
    xv = np.asarray(x, float)
    _support(xv.shape == a.shape and all(_integer_at_least(v, 0) for v in xv), "dcm", x)
    n = float(xv.sum())
    trials = p.get("trials")
    _support(trials is None or n == trials, "dcm", x)
    return float(
        log_gamma(n + 1) - math.fsum(log_gamma(v + 1) for v in xv)
        + log_gamma(a.sum()) - log_gamma(n + a.sum())
        + math.fsum(log_gamma(v + al) - log_gamma(al) for v, al in zip(xv, a))
    )


def _ld_mvn(p, x):
    mu = np.asarray(p["mu"], float)
    factor = cholesky(p["sigma"])
    xv = np.asarray(x, float)
    _support(xv.shape == mu.shape, "mvn", x)
    w = np.linalg.solve(factor, xv - mu)
    k = mu.size
    return float(-0.5 * k * math.log(2 * math.pi) - np.sum(np.log(np.diag(factor))) - 0.5 * w @ w)


def _ld_mvp(p, x):
    a = p["alpha"]
    b = np.asarray(p["betas"], float)
    xv = np.asarray(x, float)
    _support(xv.shape == b.shape and bool(np.all(xv > b)), "mvp", x)
    k = b.size
    head = math.fsum(math.log(a + i) - math.log(b[i]) for i in range(k))
    return head - (a + k) * math.log(1.0 - k + float(np.sum(xv / b)))


def _ld_img(p, x):
    dim = int(p["p"])
    a, b = p["alpha"], p["beta"]
    psi = _img_psi(p)
    xm = as_symmetric(x)
    _support(xm.shape == (dim, dim), "img", x)
    lx = cholesky(xm)
    log_det_x = 2.0 * float(np.sum(np.log(np.diag(lx))))
    log_det_psi = 2.0 * float(np.sum(np.log(np.diag(cholesky(psi)))))
    tr = float(np.trace(psi @ np.linalg.inv(xm)))
    return (
        a * log_det_psi - dim * a * math.log(b) - log_multivariate_gamma(dim, a)
        - (a + 0.5 * (dim + 1)) * log_det_x - tr / b
    )


def _scalar_ld(family, p, x):
    """Log density of a scalar family at x, support checked."""
    if family in _LATTICE:
        lp, start = _LATTICE[family]
        _support(_integer_at_least(x, start), family, x)
        return float(lp(p, float(x)))
    if family == "normal":
        s = p["sigma"]
        return -0.5 * math.log(2 * math.pi) - math.log(s) - 0.5 * ((x - p["mu"]) / s) ** 2
    if family == "exponential":
        _support(x >= 0, family, x)
        return math.log(p["rate"]) - p["rate"] * x
    if family == "bernoulli":
        _support(x in (0.0, 1.0), family, x)
        return math.log(p["p"]) if x == 1.0 else math.log1p(-p["p"])
    if family == "poisson":
        _support(_integer_at_least(x, 0), family, x)
        return x * math.log(p["lam"]) - p["lam"] - log_gamma(x + 1)
    if family == "beta":
        _support(0 < x < 1, family, x)
        a, b = p["alpha"], p["beta"]
        return (a - 1) * math.log(x) + (b - 1) * math.log1p(-x) - log_beta(a, b)
    if family == "beta_negbinom":
        _support(_integer_at_least(x, 0), family, x)
        return float(_lp_bnb(p, float(x)))
    if family == "betaprime":
        _support(x > 0, family, x)
        a, b = p["alpha"], p["beta"]
        return (a - 1) * math.log(x) - (a + b) * math.log1p(x) - log_beta(a, b)
    if family == "gumbel":
        u = (p["mu"] - x) / p["beta"]
        if u > 709.0:
            return -math.inf
        return -math.log(p["beta"]) + u - math.exp(u)
    if family == "invgamma":
        _support(x > 0, family, x)
        a, b = p["alpha"], p["beta"]
        return a * math.log(b) - log_gamma(a) - (a + 1) * math.log(x) - b / x
    if family == "invgauss":
        _support(x > 0, family, x)
        lam, th = p["lam"], p["theta"]
        return 0.5 * (math.log(lam) - math.log(2 * math.pi) - 3 * math.log(x)) - lam * (x - th) ** 2 / (2 * th * th * x)
    if family == "laplace":
        return -math.log(2 * p["beta"]) - abs(x - p["alpha"]) / p["beta"]
    if family == "lognormal":
        _support(x > 0, family, x)
        s = p["sigma"]
        lx = math.log(x)
        return -lx - 0.5 * math.log(2 * math.pi) - math.log(s) - 0.5 * ((lx - p["mu"]) / s) ** 2
    if family == "nakagami":
        _support(x > 0, family, x)
        m, s = p["m"], p["sigma"]
        return math.log(2) - log_gamma(m) + (2 * m - 1) * math.log(x) - 2 * m * math.log(s) - x * x / (s * s)
    if family == "pareto":
        _support(x > p["a"], family, x)
        th, a = p["theta"], p["a"]
        return math.log(th / a) + (th + 1) * math.log(a / x)
    if family == "powerlaw":
        _support(1 <= x <= p["beta"], family, x)
        return _ld_powerlaw(p, x)
    if family == "stirling":
        _support(_integer_at_least(x, p["m"]), family, x)
        return _ld_stirling(p, x)
    if family == "f":
        _support(x > 0, family, x)
        return _ld_f(p, x)
    if family == "t":
        return _ld_t(p, x)
    if family == "truncexp":
        _support(0 < x < 1, family, x)
        return _ld_truncexp(p, x)
    if family == "uniform":
        _support(0 <= x <= 1, family, x)
        return 0.0
    if family == "weibull":
        _support(x > 0, family, x)
        a, b = p["alpha"], p["beta"]
        return math.log(a * b) + (b - 1) * math.log(x) - a * x ** b
    raise UnknownEntryError(f"no density for family {family!r}")


_MULTI_LD = {"dcm": _ld_dcm, "mvn": _ld_mvn, "mvp": _ld_mvp, "img": _ld_img}


def log_density(spec: DistributionSpec, x) -> float:
    """Log pdf or pmf at one support point; raises DomainError off the support."""
    p = validate_spec(spec)
    if spec.family in _MULTI_LD:
        return _MULTI_LD[spec.family](p, x)
    if not isinstance(x, (int, float, np.integer, np.floating)) or isinstance(x, bool):
        raise DomainError(f"{spec.family}: expected a real number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{spec.family}: {x!r} is outside the support")
    return _scalar_ld(spec.family, p, x)
