"""Orthant and Loewner-order bounds for the multivariate families.

* Dirichlet-compound multinomial: P(X_l <= z_l for all l), one draw of n trials.
* Inverse matrix gamma: P(X ⪯ ρ E[X]).
* Multivariate normal: P(mean of n draws ⪰ z).
* Multivariate Pareto: P(mean of n draws ⪯ z), with three ways to pick θ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .engine import BoundResult
from .errors import DimensionError, DomainError, LRBoundsError
from .numerics import SearchConfig, expand_bracket, find_root_bracketed
from .smallmat import as_symmetric, spd_solve
from .specfun import log_gamma

__all__ = [
    "OrthantQuery",
    "LoewnerQuery",
    "MVP_STRATEGIES",
    "dcm_orthant_bound",
    "img_loewner_bound",
    "mvn_orthant_bound",
    "mvp_orthant_bound",
    "mvp_balanced_theta",
]

MVP_STRATEGIES = ("direct", "balanced_root", "mean_based", "best")
_ORTHANT = ("lower_orthant", "upper_orthant")
_MVN_TOL = 1e-12
_ROOT_CFG = SearchConfig(abs_tol=1e-15, rel_tol=1e-15)


@dataclass(frozen=True)
class OrthantQuery:
    z: tuple
    n: int = 1
    direction: str = "lower_orthant"

    def __post_init__(self):
        z = tuple(float(v) for v in np.atleast_1d(np.asarray(self.z, dtype=float)))
        if not z:
            raise DimensionError("z must have at least one component")
        if not all(math.isfinite(v) for v in z):
            raise DomainError("z must be finite")
        if self.direction not in _ORTHANT:
            raise DomainError(f"unknown orthant direction {self.direction!r}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "n", int(self.n))

    def to_dict(self) -> dict:
        return {"z": list(self.z), "n": self.n, "direction": self.direction}

    @classmethod
    def from_dict(cls, d) -> "OrthantQuery":
        return cls(tuple(d["z"]), d["n"], d["direction"])


@dataclass(frozen=True)
class LoewnerQuery:
    rho: float

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise DomainError(f"rho must lie in (0, 1), got {self.rho!r}")
        object.__setattr__(self, "rho", float(self.rho))

    def to_dict(self) -> dict:
        return {"rho": self.rho}

    @classmethod
    def from_dict(cls, d) -> "LoewnerQuery":
        return cls(d["rho"])


def _vector(v, name) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError(f"{name} must be a non-empty vector")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} must be finite")
    return a


def dcm_orthant_bound(alphas: Sequence[float], n: int, z: Sequence[float]) -> BoundResult:
    """Bound on P(X_l <= z_l, l = 1..k) for one Dirichlet-compound multinomial draw.

    ``alphas`` holds α_0..α_k and ``z`` holds z_1..z_k.  The tilt is θ_0 = α_0,
    θ_l = α_0 z_l/(n - Σz).
    """
    a = _vector(alphas, "alphas")
    zz = _vector(z, "z")
    if a.size != zz.size + 1:
        raise DimensionError(f"alphas has {a.size} entries, so z needs {a.size - 1}, got {zz.size}")
    if not np.all(a > 0):
        raise DomainError("every alpha must be positive")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    a_sum = float(math.fsum(a))
    caps = n * a[1:] / a_sum
    if not np.all(zz > 0):
        return BoundResult.invalid("requires z_l > 0 for every l")
    if not np.all(zz <= caps * (1.0 + 1e-15)):
        bad = int(np.argmax(zz > caps * (1.0 + 1e-15))) + 1
        return BoundResult.invalid(f"requires z_l <= n*alpha_l/sum(alpha); fails at l={bad}")
    rest = n - float(math.fsum(zz))
    if not rest > 0:
        return BoundResult.invalid("requires sum(z) < n")
    theta = np.minimum(a[0] * zz / rest, a[1:])
    t_sum = a[0] + float(math.fsum(theta))
    log_b = (
        log_gamma(a_sum) + log_gamma(n + t_sum) - log_gamma(t_sum) - log_gamma(n + a_sum)
    )
    for zl, al, tl in zip(zz, a[1:], theta):
        log_b += log_gamma(zl + al) + log_gamma(tl) - log_gamma(zl + tl) - log_gamma(al)
    return BoundResult.from_log(log_b, (float(a[0]),) + tuple(float(t) for t in theta))


def img_loewner_bound(p: int, alpha: float, rho: float) -> BoundResult:
    """Bound on P(X ⪯ ρΥ) for an inverse matrix gamma X with mean Υ.

    The scale β and matrix Ψ cancel, so only (p, α, ρ) enter.
    """
    if isinstance(p, bool) or int(p) != p or p < 1:
        raise DomainError(f"p must be a positive integer, got {p!r}")
    if not math.isfinite(alpha):
        raise DomainError("alpha must be finite")
    if not 0.0 < rho < 1.0:
        return BoundResult.invalid("requires 0 < rho < 1")
    excess = 2.0 * alpha - p - 1.0
    if not excess > 0:
        return BoundResult.invalid("requires 2*alpha - p - 1 > 0 so that the mean exists")
    log_b = -p * alpha * math.log(rho) - 0.5 * p * (1.0 / rho - 1.0) * excess
    return BoundResult.from_log(log_b)


def mvn_orthant_bound(mu, sigma, n: int, z) -> BoundResult:
    """Bound on P(mean of n draws ⪰ z) for N(μ, Σ), valid when Σ⁻¹z ⪰ Σ⁻¹μ."""
    m = _vector(mu, "mu")
    zz = _vector(z, "z")
    s = as_symmetric(sigma)
    if not (m.size == zz.size == s.shape[0]):
        raise DimensionError(f"mu ({m.size}), z ({zz.size}) and sigma {s.shape} disagree")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    wz = spd_solve(s, zz)
    wm = spd_solve(s, m)
    slack = _MVN_TOL * np.maximum(1.0, np.maximum(np.abs(wz), np.abs(wm)))
    if np.any(wz - wm < -slack):
        bad = int(np.argmax(wz - wm < -slack)) + 1
        return BoundResult.invalid(f"requires inv(sigma) z >= inv(sigma) mu componentwise; fails at l={bad}")
    per = float(m @ wz - 0.5 * (zz @ wz + m @ wm))
    return BoundResult.from_log(n * per)


def mvp_balanced_theta(alpha: float, betas, z) -> Optional[float]:
    """θ solving Σ_{l<k} 1/(θ+l) = ln(1 - k + Σ z_i/β_i), or None when the proviso fails."""
    b = _vector(betas, "betas")
    zz = _vector(z, "z")
    k = b.size
    rhs = math.log(1.0 - k + float(math.fsum(zz / b)))

    def lhs(t):
        return math.fsum(1.0 / (t + l) for l in range(k))

    if not lhs(alpha) > rhs:
        return None

    def f(t):
        return lhs(t) - rhs

    br = expand_bracket(f, alpha, alpha, math.inf)
    return find_root_bracketed(f, br, _ROOT_CFG)


def _mvp_log(alpha, b, zz, theta, n):
    k = b.size
    log_prod = math.fsum(math.log(alpha + i) - math.log(theta + i) for i in range(k))
    base = 1.0 - k + float(math.fsum(zz / b))
    return n * (log_prod + (theta - alpha) * math.log(base))


def mvp_orthant_bound(
    alpha: float,
    betas,
    z,
    n: int = 1,
    strategy: str = "balanced_root",
    theta: Optional[float] = None,
) -> BoundResult:
    """Bound on P(mean of n draws ⪯ z) for the multivariate Pareto law.

    Strategies pick θ: ``direct`` uses the caller's θ > α, ``balanced_root``
    the root of the balance equation, ``mean_based`` θ = 1 + 1/(s - 1) with s
    the mean of z_i/β_i, and ``best`` the smallest applicable of the three
    (``direct`` only when θ is given).
    """
    if strategy not in MVP_STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}; expected one of {MVP_STRATEGIES}")
    b = _vector(betas, "betas")
    zz = _vector(z, "z")
    if b.size != zz.size:
        raise DimensionError(f"betas has {b.size} entries but z has {zz.size}")
    if not alpha > 0 or not np.all(b > 0):
        raise DomainError("alpha and every beta must be positive")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not np.all(zz > b):
        return BoundResult.invalid("requires z_l > beta_l for every l")

    if strategy == "best":
        picks = ["balanced_root", "mean_based"] + (["direct"] if theta is not None else [])
        results = [(s, mvp_orthant_bound(alpha, b, zz, n, s, theta)) for s in picks]
        valid = [(s, r) for s, r in results if r.valid]
        if not valid:
            return BoundResult.invalid("; ".join(f"{s}: {r.reason}" for s, r in results))
        s, r = min(valid, key=lambda sr: sr[1].log_bound)
        return BoundResult(r.log_bound, r.bound, r.theta_star, True, f"minimum attained by {s}")

    if strategy == "direct":
        if theta is None:
            raise DomainError("strategy 'direct' needs theta")
        if not theta > alpha:
            return BoundResult.invalid("direct strategy requires theta > alpha")
        t = float(theta)
    elif strategy == "balanced_root":
        try:
            t = mvp_balanced_theta(alpha, b, zz)
        except LRBoundsError as exc:
            raise LRBoundsError(f"balance equation could not be solved: {exc}") from exc
        if t is None:
            return BoundResult.invalid(
                "balanced_root requires sum_{l<k} 1/(alpha+l) > ln(1 - k + sum z_i/beta_i)"
            )
    else:
        s = float(np.mean(zz / b))
        if not alpha > 1:
            return BoundResult.invalid("mean_based requires alpha > 1")
        if not s < alpha / (alpha - 1.0):
            return BoundResult.invalid("mean_based requires mean(z_i/beta_i) < alpha/(alpha-1)")
        t = 1.0 + 1.0 / (s - 1.0)
    return BoundResult.from_log(_mvp_log(alpha, b, zz, t, n), t)
