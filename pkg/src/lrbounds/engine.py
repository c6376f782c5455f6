"""Likelihood-ratio bounding machinery.

A bounding function Λ(ϑ) over a parameter set Θ gives P(E) <= inf Λ(ϑ).
Families are handled in the log domain throughout.  The module also carries
the cumulant-generating-function (CGF) route: the classical Chernoff bound
and its Berry-Esseen refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DomainError, LRBoundsError
from .numerics import (
    DEFAULT_SEARCH,
    SearchConfig,
    expand_bracket,
    find_root_bracketed,
    minimize_1d,
)

__all__ = [
    "Interval",
    "LrFamily",
    "BoundResult",
    "CgfModel",
    "DEFAULT_C_BE",
    "infimum_bound",
    "me_bound",
    "chernoff_bound",
    "refined_chernoff_bound",
    "berry_esseen_moment_term",
    "normal_cgf",
    "exponential_cgf",
    "bernoulli_cgf",
    "poisson_cgf",
    "finite_difference_cgf",
]

DEFAULT_C_BE = 0.4748
_CROSS_CHECK_REL = 1e-9
_MAX_LOG = 709.0


@dataclass(frozen=True)
class Interval:
    """Real interval with per-end closedness; infinite ends are always open."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise DomainError("interval ends must not be NaN")
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @property
    def empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def contains(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def interior_point(self) -> float:
        if math.isfinite(self.lo) and math.isfinite(self.hi):
            return 0.5 * (self.lo + self.hi)
        if math.isfinite(self.lo):
            return self.lo + max(1.0, abs(self.lo))
        if math.isfinite(self.hi):
            return self.hi - max(1.0, abs(self.hi))
        return 0.0

    def describe(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclass(frozen=True)
class BoundResult:
    log_bound: float
    bound: float
    theta_star: Optional[float] = None
    valid: bool = True
    reason: str = ""

    @classmethod
    def from_log(cls, log_bound: float, theta_star=None, reason: str = "") -> "BoundResult":
        log_bound = float(log_bound)
        if math.isnan(log_bound):
            raise LRBoundsError("bound evaluated to NaN")
        bound = math.exp(log_bound) if log_bound < _MAX_LOG else math.inf
        return cls(log_bound, bound, theta_star, True, reason)

    @classmethod
    def invalid(cls, reason: str) -> "BoundResult":
        if not reason:
            raise ValueError("an invalid result needs a reason")
        return cls(0.0, 1.0, None, False, reason)

    def to_dict(self) -> dict:
        theta = self.theta_star
        if theta is not None and not isinstance(theta, (int, float)):
            theta = [float(t) for t in theta]
        return {
            "log_bound": self.log_bound,
            "bound": self.bound,
            "theta_star": theta,
            "valid": self.valid,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BoundResult":
        theta = d.get("theta_star")
        if isinstance(theta, list):
            theta = tuple(theta)
        return cls(d["log_bound"], d["bound"], theta, d["valid"], d["reason"])


@dataclass(frozen=True)
class LrFamily:
    """Bounding function family: log Λ on Θ plus an optional closed-form minimizer."""

    theta_domain: Interval
    log_lambda: Callable[[float], float]
    theta_star: Optional[float] = None

    def __post_init__(self):
        if self.theta_star is not None and not self.theta_domain.contains(self.theta_star):
            raise DomainError(
                f"closed-form minimizer {self.theta_star} lies outside {self.theta_domain.describe()}"
            )


def _guarded(f: Callable[[float], float]) -> Callable[[float], float]:
    def g(x):
        try:
            v = f(x)
        except (ValueError, OverflowError, ZeroDivisionError, DomainError):
            return math.inf
        return v if math.isfinite(v) or v == -math.inf else math.inf
    return g


def _finite_window(f: Callable[[float], float], dom: Interval) -> tuple[float, float]:
    """Clip Θ to a finite closed window holding the minimizer of a unimodal f."""
    lo, hi = dom.lo, dom.hi
    span = hi - lo if math.isfinite(hi - lo) else None
    if not dom.lo_closed and math.isfinite(lo):
        lo = lo + (1e-12 * span if span else 1e-12 * max(1.0, abs(lo)))
    if not dom.hi_closed and math.isfinite(hi):
        hi = hi - (1e-12 * span if span else 1e-12 * max(1.0, abs(hi)))
    if math.isfinite(lo) and math.isfinite(hi):
        return lo, hi
    x0 = dom.interior_point()
    f0 = f(x0)
    if math.isinf(hi):
        step = max(1.0, abs(x0))
        prev, f_prev = x0, f0
        for _ in range(60):
            cand = prev + step
            f_cand = f(cand)
            if f_cand > f_prev:
                hi = cand
                break
            prev, f_prev = cand, f_cand
            step *= 2.0
        else:
            hi = prev
    if math.isinf(lo):
        step = max(1.0, abs(x0))
        prev, f_prev = x0, f0
        for _ in range(60):
            cand = prev - step
            f_cand = f(cand)
            if f_cand > f_prev:
                lo = cand
                break
            prev, f_prev = cand, f_cand
            step *= 2.0
        else:
            lo = prev
    return lo, hi


def numerical_infimum(family: LrFamily, cfg: SearchConfig = DEFAULT_SEARCH) -> tuple[float, float]:
    """(argmin, min of log Λ) by bounded minimization over a finite window of Θ."""
    f = _guarded(family.log_lambda)
    lo, hi = _finite_window(f, family.theta_domain)
    return minimize_1d(f, lo, hi, cfg)


def infimum_bound(
    family: LrFamily,
    cfg: SearchConfig = DEFAULT_SEARCH,
    cross_check: bool = False,
) -> BoundResult:
    """inf over Θ of Λ, via the closed-form minimizer when one is supplied."""
    if family.theta_domain.empty:
        return BoundResult.invalid(f"parameter set {family.theta_domain.describe()} is empty")
    if family.theta_star is None:
        x, v = numerical_infimum(family, cfg)
        return BoundResult.from_log(v, x)
    v = family.log_lambda(family.theta_star)
    reason = ""
    if cross_check:
        x_num, v_num = numerical_infimum(family, cfg)
        if v_num < v + math.log1p(-_CROSS_CHECK_REL):
            reason = (
                f"numerical search improves the closed form: log Λ = {v_num!r} at {x_num!r}"
            )
    return BoundResult.from_log(v, family.theta_star, reason)


def me_bound(
    weight_expectation: Callable[[float], float],
    theta_domain: Interval,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> BoundResult:
    """Bound from the expectation of a nonnegative weight function, minimised over ϑ."""

    def log_e(t):
        w = weight_expectation(t)
        if w < 0:
            raise DomainError("weight expectation must be nonnegative")
        return math.log(w) if w > 0 else -math.inf

    if not theta_domain.empty:
        log_e(theta_domain.interior_point())  # surfaces a negative weight instead of masking it
    return infimum_bound(LrFamily(theta_domain, log_e), cfg)


# --- CGF route -----------------------------------------------------------------


@dataclass(frozen=True)
class CgfModel:
    """CGF κ = ln φ together with the moment functions φ^(k)/φ, k = 1..4.

    ``mean_range`` is the open range of κ' over the domain when known.
    """

    domain: Interval
    kappa: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    d3: Callable[[float], float]
    d4: Callable[[float], float]
    mean_range: Optional[tuple[float, float]] = None
    name: str = "custom"

    @classmethod
    def from_cumulants(cls, domain, kappa, k1, k2, k3, k4, mean_range=None, name="custom"):
        """Build moment functions from derivatives of κ."""

        def m2(t):
            c1 = k1(t)
            return k2(t) + c1 * c1

        def m3(t):
            c1, c2 = k1(t), k2(t)
            return k3(t) + 3.0 * c1 * c2 + c1 ** 3

        def m4(t):
            c1, c2, c3 = k1(t), k2(t), k3(t)
            return k4(t) + 4.0 * c1 * c3 + 3.0 * c2 * c2 + 6.0 * c1 * c1 * c2 + c1 ** 4

        return cls(domain, kappa, k1, m2, m3, m4, mean_range, name)


def normal_cgf(mu: float = 0.0, sigma: float = 1.0) -> CgfModel:
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    s2 = sigma * sigma
    return CgfModel.from_cumulants(
        Interval(-math.inf, math.inf),
        lambda t: mu * t + 0.5 * s2 * t * t,
        lambda t: mu + s2 * t,
        lambda t: s2,
        lambda t: 0.0,
        lambda t: 0.0,
        (-math.inf, math.inf),
        "normal",
    )


def exponential_cgf(rate: float = 1.0) -> CgfModel:
    if not rate > 0:
        raise DomainError("rate must be positive")
    r = rate
    return CgfModel.from_cumulants(
        Interval(-math.inf, r, hi_closed=False),
        lambda t: -math.log1p(-t / r),
        lambda t: 1.0 / (r - t),
        lambda t: 1.0 / (r - t) ** 2,
        lambda t: 2.0 / (r - t) ** 3,
        lambda t: 6.0 / (r - t) ** 4,
        (0.0, math.inf),
        "exponential",
    )


def bernoulli_cgf(p: float) -> CgfModel:
    if not 0.0 < p < 1.0:
        raise DomainError("p must lie in (0, 1)")

    def tilted(t):
        # success probability under the exponentially tilted law
        return 1.0 / (1.0 + (1.0 - p) / p * math.exp(-t))

    def kappa(t):
        if t > 0:
            return t + math.log(p) + math.log1p((1.0 - p) / p * math.exp(-t))
        return math.log1p(p * math.expm1(t))

    def k2(t):
        q = tilted(t)
        return q * (1.0 - q)

    def k3(t):
        q = tilted(t)
        return q * (1.0 - q) * (1.0 - 2.0 * q)

    def k4(t):
        q = tilted(t)
        return q * (1.0 - q) * (1.0 - 6.0 * q + 6.0 * q * q)

    return CgfModel.from_cumulants(
        Interval(-math.inf, math.inf), kappa, tilted, k2, k3, k4, (0.0, 1.0), "bernoulli"
    )


def poisson_cgf(lam: float) -> CgfModel:
    if not lam > 0:
        raise DomainError("lam must be positive")

    def k(t):
        return lam * math.exp(t)

    return CgfModel.from_cumulants(
        Interval(-math.inf, math.inf),
        lambda t: lam * math.expm1(t),
        k, k, k, k,
        (0.0, math.inf),
        "poisson",
    )


def finite_difference_cgf(kappa: Callable[[float], float], domain: Interval) -> CgfModel:
    """CgfModel for a user-supplied κ, with derivatives by central differences.

    Step h = 1e-4*max(1, |τ|).  Fourth derivatives from differences are accurate
    to only a few digits, so the refined bound built on this adapter is
    correspondingly rough.
    """

    def h_of(t):
        return 1e-4 * max(1.0, abs(t))

    def k1(t):
        h = h_of(t)
        return (kappa(t + h) - kappa(t - h)) / (2 * h)

    def k2(t):
        h = h_of(t)
        return (kappa(t + h) - 2 * kappa(t) + kappa(t - h)) / (h * h)

    def k3(t):
        h = h_of(t)
        return (kappa(t + 2 * h) - 2 * kappa(t + h) + 2 * kappa(t - h) - kappa(t - 2 * h)) / (2 * h ** 3)

    def k4(t):
        h = h_of(t)
        return (
            kappa(t + 2 * h) - 4 * kappa(t + h) + 6 * kappa(t) - 4 * kappa(t - h) + kappa(t - 2 * h)
        ) / h ** 4

    return CgfModel.from_cumulants(domain, kappa, k1, k2, k3, k4, None, "finite-difference")


def _solve_tilt(cgf: CgfModel, z: float, cfg: SearchConfig) -> tuple[Optional[float], str]:
    if not math.isfinite(z):
        return None, "threshold must be finite"
    if cgf.mean_range is not None:
        lo, hi = cgf.mean_range
        if not lo < z < hi:
            return None, f"z={z!r} is outside the range ({lo:g}, {hi:g}) of the CGF derivative"
    dom = cgf.domain
    start = 0.0 if dom.contains(0.0) else dom.interior_point()

    def f(t):
        return cgf.d1(t) - z

    f0 = f(start)
    if f0 == 0.0:
        return start, ""
    # κ' is increasing, so search only on the side where the root must be
    if f0 < 0:
        b = expand_bracket(f, start, start, dom.hi)
    else:
        b = expand_bracket(f, start, dom.lo, start)
    return find_root_bracketed(f, b, cfg), ""


def chernoff_bound(
    cgf: CgfModel, z: float, n: int, cfg: SearchConfig = DEFAULT_SEARCH
) -> BoundResult:
    """[φ(τ) e^{-zτ}]^n with κ'(τ) = z.

    For z above the mean this bounds P(X̄ >= z) with τ >= 0; below the mean it
    bounds P(X̄ <= z) with τ <= 0.
    """
    _check_n(n)
    try:
        tau, why = _solve_tilt(cgf, z, cfg)
    except LRBoundsError as exc:
        return BoundResult.invalid(f"no tilt solves κ'(τ) = {z!r}: {exc}")
    if tau is None:
        return BoundResult.invalid(why)
    return BoundResult.from_log(n * (cgf.kappa(tau) - z * tau), tau)


def berry_esseen_moment_term(cgf: CgfModel, z: float, tau: float) -> float:
    """The moment ratio (φ[φ'''' - 4zφ'''] + 3φ''²)/(φ'' - z²φ)² minus 3, at τ."""
    m2, m3, m4 = cgf.d2(tau), cgf.d3(tau), cgf.d4(tau)
    den = m2 - z * z
    return (m4 - 4.0 * z * m3 + 3.0 * m2 * m2) / (den * den) - 3.0


def refined_chernoff_bound(
    cgf: CgfModel,
    z: float,
    n: int,
    c_be: float = DEFAULT_C_BE,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> BoundResult:
    """(1/2 + Δ) times the Chernoff bound, Δ = min{1/2, c_be/√n * term^{3/4}}."""
    if not c_be > 0:
        raise DomainError("c_be must be positive")
    base = chernoff_bound(cgf, z, n, cfg)
    if not base.valid:
        return base
    tau = base.theta_star
    term = berry_esseen_moment_term(cgf, z, tau)
    if not term >= 0:
        return BoundResult.from_log(
            base.log_bound,
            tau,
            f"moment term {term!r} is negative; fell back to the classical Chernoff bound",
        )
    delta = min(0.5, c_be / math.sqrt(n) * term ** 0.75)
    return BoundResult.from_log(math.log(0.5 + delta) + base.log_bound, tau)


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
