"""Catalog of univariate likelihood-ratio tail bounds.

Each entry carries its validity predicate, the per-observation bounding
function log Λ(ϑ; z) with its parameter set Θ, and the rule that picks ϑ
(closed form or the root of a monotone equation).  For sample-mean entries
the bound for n observations is exp(n log Λ(ϑ)).

Every bounding function is the ratio f(x)/g(x, ϑ) of the target density and a
tilted member of the same family, evaluated at the threshold.  Two entries
(beta negative binomial, logarithmic) use the ratio as derived from the
densities rather than as printed; see the decisions ledger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from scipy.special import bernoulli as _bernoulli_numbers

from .engine import BoundResult, Interval, LrFamily, infimum_bound, numerical_infimum
from .errors import DomainError, LRBoundsError, UnknownEntryError
from .families import DistributionSpec, validate_spec
from .numerics import Bracket, SearchConfig, expand_bracket, find_root_bracketed
from .specfun import log_beta, log_exprel, log_gamma

__all__ = [
    "TailQuery",
    "CatalogEntry",
    "DIRECTIONS",
    "catalog",
    "list_catalog",
    "get_entry",
    "evaluate_bound",
    "solve_implicit_theta",
    "powerlaw_threshold",
    "powerlaw_bound_at_theta",
    "truncexp_mean",
]

DIRECTIONS = ("lower_mean", "upper_mean", "two_sided_outer", "two_sided_inner", "cdf_point")

_LN_HALF = -math.log(2.0)
_ROOT_CFG = SearchConfig(abs_tol=1e-15, rel_tol=1e-15, max_iter=200)
_SNAP = 16 * 2.220446049250313e-16
_HALF_TOL = 1e-10


@dataclass(frozen=True)
class TailQuery:
    direction: str
    z: float
    n: int = 1

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise DomainError(f"unknown direction {self.direction!r}")
        if not math.isfinite(self.z):
            raise DomainError("z must be finite")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "z", float(self.z))

    def to_dict(self) -> dict:
        return {"direction": self.direction, "z": self.z, "n": self.n}

    @classmethod
    def from_dict(cls, d: Mapping) -> "TailQuery":
        return cls(d["direction"], d["z"], d["n"])


# --- small numerical helpers ----------------------------------------------------

_B2K_OVER_FACT = tuple(
    float(b) / math.factorial(2 * k)
    for k, b in ((k, _bernoulli_numbers(2 * k)[2 * k]) for k in range(1, 9))
)


def _xlog(c: float, x: float) -> float:
    """c*ln(x) with the convention 0*ln(0) = 0."""
    if c == 0.0:
        return 0.0
    if x == 0.0:
        return -math.inf if c > 0 else math.inf
    return c * math.log(x)


def truncexp_mean(t: float) -> float:
    """1 + 1/(e^t - 1) - 1/t: mean of the density proportional to e^{tx} on (0, 1)."""
    if abs(t) < 0.5:
        t2 = t * t
        acc = 0.0
        for c in reversed(_B2K_OVER_FACT):
            acc = acc * t2 + c
        return 0.5 + t * acc
    if t > 700.0:
        return 1.0 - 1.0 / t + math.exp(-t)
    return 1.0 + 1.0 / math.expm1(t) - 1.0 / t


def _log_ratio_r(t: float) -> float:
    """ln(-ln(1 - t)/t) for 0 <= t < 1, continuous at t = 0."""
    if t < 1e-5:
        return t / 2.0 + 5.0 * t * t / 24.0
    return math.log(-math.log1p(-t) / t)


def _lc(t: float, log_b: float) -> float:
    """ln C(t) for the power-law normaliser C(t) = (1 - b^{1-t})/(t - 1), C(1) = ln b."""
    return math.log(log_b) + log_exprel(-(t - 1.0) * log_b)


# --- catalog entry record -------------------------------------------------------

ValidityFn = Callable[[Mapping, float, int], Optional[str]]
ThetaFn = Callable[[Mapping, float], float]
LogLambdaFn = Callable[[Mapping, float, float], float]
DomainFn = Callable[[Mapping, float], Interval]


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    family: str
    direction: str
    validity_text: str
    anchor: str
    theta_solver: str  # "closed-form" | "implicit-equation" | "none"
    theta_role: str  # "argmin" when the theorem's ϑ minimises Λ, "feasible" otherwise
    validity: ValidityFn = field(repr=False, compare=False)
    theta: ThetaFn = field(repr=False, compare=False)
    log_lambda: LogLambdaFn = field(repr=False, compare=False)
    theta_domain: DomainFn = field(repr=False, compare=False)
    implicit_equation: Optional[Callable[[Mapping, float], float]] = field(default=None, repr=False, compare=False)
    log_offset: float = 0.0
    single_observation: bool = False
    derived: bool = False
    auxiliary: bool = False
    variants: tuple[str, ...] = ()
    custom: Optional[Callable] = field(default=None, repr=False, compare=False)

    @property
    def sample_mean(self) -> bool:
        return not self.single_observation

    def lr_family(self, params: Mapping, z: float) -> LrFamily:
        """Per-observation bounding-function family at threshold z."""
        dom = self.theta_domain(params, z)
        theta = None
        if self.theta_solver == "closed-form":
            theta = _snap_to(dom, self.theta(params, z))
            if not dom.contains(theta):
                theta = None  # a limit at an open end of Θ, e.g. z = 0 for the beta negative binomial
        return LrFamily(dom, lambda t: self.log_lambda(params, z, t), theta)

    def describe(self) -> dict:
        return {
            "id": self.id,
            "family": self.family,
            "direction": self.direction,
            "validity": self.validity_text,
            "anchor": self.anchor,
            "theta_solver": self.theta_solver,
            "theta_role": self.theta_role,
            "single_observation": self.single_observation,
            "derived": self.derived,
            "auxiliary": self.auxiliary,
        }


def _need(cond: bool, msg: str) -> Optional[str]:
    return None if cond else msg


def _snap_to(dom: Interval, t: float) -> float:
    """Move a closed-form ϑ that rounding pushed just past a closed end back onto it."""
    for end, closed in ((dom.lo, dom.lo_closed), (dom.hi, dom.hi_closed)):
        if closed and t != end and abs(t - end) <= _SNAP * max(1.0, abs(end)):
            if not dom.contains(t):
                return end
    return t


def _iv(lo, hi, lo_closed=True, hi_closed=True) -> Callable[[Mapping, float], Interval]:
    """Θ built from functions of (params, z)."""

    def dom(p, z):
        a = lo(p, z) if callable(lo) else lo
        b = hi(p, z) if callable(hi) else hi
        return Interval(a, b, lo_closed, hi_closed)

    return dom


def _solve_increasing(eq: Callable[[float], float], z: float, lo: float, hi: float) -> float:
    """Root of eq(t) = z for eq increasing on [lo, hi] (either end may be infinite)."""

    def f(t):
        return eq(t) - z

    if math.isfinite(hi):
        f_hi = f(hi)
        if f_hi == 0.0 or abs(f_hi) <= _SNAP * max(1.0, abs(z)):
            return hi
    if math.isfinite(lo) and math.isfinite(hi):
        return find_root_bracketed(f, Bracket.of(f, lo, hi), _ROOT_CFG)
    start = hi - 1.0 if math.isfinite(hi) else (lo + 1.0 if math.isfinite(lo) else 0.0)
    b = expand_bracket(f, start, lo, hi)
    return find_root_bracketed(f, b, _ROOT_CFG)


def _solve_decreasing(eq, z, lo, hi):
    return _solve_increasing(lambda t: -eq(t), -z, lo, hi)


# --- per-family bounding functions ------------------------------------------------


def _ll_normal(p, z, t):
    mu, s = p["mu"], p["sigma"]
    return -(2.0 * (t - mu) * z + mu * mu - t * t) / (2.0 * s * s)


def _ll_beta_lower(p, z, t):
    a, b = p["alpha"], p["beta"]
    return log_beta(t, b) - log_beta(a, b) + (a - t) * math.log(z)


def _ll_beta_upper(p, z, t):
    a, b = p["alpha"], p["beta"]
    return log_beta(a, t) - log_beta(a, b) + (b - t) * math.log1p(-z)


def _ll_beta1(p, z, t):
    a = p["alpha"]
    return math.log(a) + (a - t) * math.log(z) - math.log(t)


def _ll_bnb(p, z, t):
    a, b, r = p["alpha"], p["beta"], p["r"]
    # the normalising factor Γ(α+β)/Γ(α+ϑ) of the tilted pmf is kept
    head = 0.0 if z == 0 else log_gamma(t) - log_gamma(t + z)
    return (
        head
        + log_gamma(b + z)
        - log_gamma(b)
        + log_gamma(a + t + r + z)
        - log_gamma(a + b + r + z)
        + log_gamma(a + b)
        - log_gamma(a + t)
    )


def _ll_betaprime_a(p, z, t):
    a, b = p["alpha"], p["beta"]
    return log_beta(t, b) - log_beta(a, b) + (a - t) * (math.log(z) - math.log1p(z))


def _ll_betaprime_b(p, z, t):
    a, b = p["alpha"], p["beta"]
    return log_beta(a, t) - log_beta(a, b) + (t - b) * math.log1p(z)


def _ll_borel(p, z, t):
    th = p["theta"]
    return _xlog(1.0 - z, t) - (1.0 - z) * math.log(th) + z * (t - th)


def _ll_consul(p, z, t):
    th, m = p["theta"], p["m"]
    logit_t = -math.inf if t == 0.0 else math.log(t) - math.log1p(-t)
    logit_th = math.log(th) - math.log1p(-th)
    head = 0.0 if z == 1.0 else (1.0 - z) * (logit_t - logit_th)
    return head + z * m * (math.log1p(-th) - math.log1p(-t))


def _ll_geeta(p, z, t):
    th, b = p["theta"], p["beta"]
    return _xlog(1.0 - z, t) - (1.0 - z) * math.log(th) + z * (b - 1.0) * (math.log1p(-th) - math.log1p(-t))


def _ll_gumbel(p, z, t):
    mu, b = p["mu"], p["beta"]
    return (mu - t) / b + math.exp((t - z) / b) - math.exp((mu - z) / b)


def _ll_invgamma_a(p, z, t):
    a, b = p["alpha"], p["beta"]
    return log_gamma(t) - log_gamma(a) + (t - a) * math.log(z / b)


def _ll_invgamma_b(p, z, t):
    a, b = p["alpha"], p["beta"]
    return a * (math.log(b) - math.log(t)) + (t - b) / z


def _ll_invgauss(p, z, t):
    lam, th = p["lam"], p["theta"]
    return lam / th - lam / t + (lam / (2.0 * t * t) - lam / (2.0 * th * th)) * z


def _ll_laglog(p, z, t):
    th, b = p["theta"], p["beta"]
    return (
        _log_ratio_r(t)
        + _xlog(1.0 - z, t)
        + z * math.log(th)
        - math.log(-math.log1p(-th))
        + z * (b - 1.0) * (math.log1p(-th) - math.log1p(-t))
    )


def _eq_laglog(p, t):
    return 1.0 / ((1.0 - p["beta"] * t) * math.exp(_log_ratio_r(t)))


def _ll_lagnegbin(p, z, t):
    th, a, b = p["theta"], p["alpha"], p["beta"]
    head = 0.0 if z == 0.0 else z * (math.log(th) - math.log(t))
    return head + (b + (a - 1.0) * z) * (math.log1p(-th) - math.log1p(-t))


def _ll_laplace(sign):
    def ll(p, z, t):
        a, b = p["alpha"], p["beta"]
        d = sign * (z - a)
        return math.log(t) - math.log(b) + (1.0 / t - 1.0 / b) * d
    return ll


def _ll_logarithmic(p, z, t):
    q = p["q"]
    return _log_ratio_r(t) + _xlog(1.0 - z, t) + z * math.log(q) - math.log(-math.log1p(-q))


def _eq_logarithmic(p, t):
    return 1.0 / ((1.0 - t) * math.exp(_log_ratio_r(t)))


def _ll_lognormal(p, z, t):
    mu, s = p["mu"], p["sigma"]
    return (t - mu) / (s * s) * ((mu + t) / 2.0 - math.log(z))


def _ll_nakagami_lower(p, z, t):
    m, s = p["m"], p["sigma"]
    return log_gamma(t) - log_gamma(m) + 2.0 * (m - t) * math.log(z / s)


def _eq_nakagami(p, t):
    return p["sigma"] * math.exp(log_gamma(t + 0.5) - log_gamma(t))


def _ll_nakagami_upper(p, z, t):
    m, s = p["m"], p["sigma"]
    return 2.0 * m * (math.log(t) - math.log(s)) + z * z / (t * t) - z * z / (s * s)


def _ll_pareto(p, z, t):
    th, a = p["theta"], p["a"]
    return math.log(th) - math.log(t) + (t - th) * math.log(z / a)


def _ll_powerlaw(p, z, t):
    a, b = p["alpha"], p["beta"]
    lb = math.log(b)
    return _lc(t, lb) - _lc(a, lb) + (t - a) * math.log(z)


def powerlaw_threshold(theta: float, alpha: float, beta: float) -> float:
    """Mean of the power-law density with exponent theta on [1, beta].

    This is the threshold z(θ) = ((θ-1)/(θ-2)) (β^{θ-1} - β)/(β^{θ-1} - 1),
    with the removable point θ = 2 handled by the continuous normaliser.
    """
    del alpha
    lb = math.log(beta)
    return math.exp(_lc(theta - 1.0, lb) - _lc(theta, lb))


def _eq_powerlaw(p, t):
    return powerlaw_threshold(t, p["alpha"], p["beta"])


def _ll_stirling(p, z, t):
    th, m = p["theta"], p["m"]
    return (
        m * _log_ratio_r(t)
        + _xlog(m - z, t)
        - m * math.log(-math.log1p(-th))
        + z * math.log(th)
    )


def _eq_stirling(p, t):
    return p["m"] / ((1.0 - t) * math.exp(_log_ratio_r(t)))


def _ll_f(p, z, t):
    m, d = p["m"], p["dof"]
    return 0.5 * m * math.log(t) + 0.5 * (m + d) * math.log1p((1.0 / t - 1.0) / (1.0 + d / (m * z)))


def _ll_t(p, z, t):
    d = p["dof"]
    return math.log(t) + 0.5 * (d + 1.0) * math.log1p((1.0 / (t * t) - 1.0) / (d / (z * z) + 1.0))


def _ll_truncexp(p, z, t):
    th = p["theta"]
    return log_exprel(t) - log_exprel(th) + (th - t) * z


def _eq_truncexp(p, t):
    return truncexp_mean(t)


def _ll_uniform(p, z, t):
    return log_exprel(t) - t * z


def _ll_weibull(p, z, t):
    a, b = p["alpha"], p["beta"]
    zb = z ** b
    return math.log(a) - math.log(t) + (t - a) * zb


# --- implicit ϑ rules -----------------------------------------------------------


def _theta_lower_support(eq, lo_value, hi_fn):
    """Implicit ϑ on [0, hi]; below the support floor eq(0) the infimum is at ϑ -> 0."""

    def theta(p, z):
        if z <= lo_value(p):
            return 0.0
        return _solve_increasing(lambda t: eq(p, t), z, 0.0, hi_fn(p))

    return theta


def _theta_nakagami(p, z):
    floor = 1e-8
    if z <= _eq_nakagami(p, floor):
        return floor
    return _solve_increasing(lambda t: _eq_nakagami(p, t), z, floor, p["m"])


def _theta_powerlaw(p, z):
    return _solve_decreasing(lambda t: _eq_powerlaw(p, t), z, p["alpha"], math.inf)


def _theta_truncexp(p, z):
    th = p["theta"]
    if abs(z - 0.5) < _HALF_TOL and th > 0:
        return 0.0
    return _solve_increasing(truncexp_mean, z, -math.inf, th)


def _theta_uniform_upper(p, z):
    return _solve_increasing(truncexp_mean, z, 0.0, math.inf)


def _theta_uniform_lower(p, z):
    return _solve_increasing(truncexp_mean, z, -math.inf, 0.0)


# --- validity predicates --------------------------------------------------------


def _v_normal_lower(p, z, n):
    return _need(z <= p["mu"], "requires z <= mu")


def _v_normal_upper(p, z, n):
    return _need(z >= p["mu"], "requires z >= mu")


def _v_beta_lower(p, z, n):
    a, b = p["alpha"], p["beta"]
    return _need(0 < z <= a / (a + b), "requires 0 < z <= alpha/(alpha+beta)")


def _v_beta_upper(p, z, n):
    a, b = p["alpha"], p["beta"]
    return _need(a / (a + b) <= z < 1, "requires alpha/(alpha+beta) <= z < 1")


def _v_beta1(p, z, n):
    if p["beta"] != 1.0:
        return "requires beta = 1"
    return _need(0 < z < math.exp(-1.0 / p["alpha"]), "requires 0 < z < exp(-1/alpha)")


def _v_bnb(p, z, n):
    a, b, r = p["alpha"], p["beta"], p["r"]
    if n != 1:
        return "bounds a single observation; n must be 1"
    return _need(
        float(z).is_integer() and 0 <= z <= r * b / (a - 1.0),
        "requires integer z with 0 <= z <= r*beta/(alpha-1)",
    )


def _v_betaprime(p, z, n):
    a, b = p["alpha"], p["beta"]
    if not b > 1:
        return "requires beta > 1"
    return _need(0 < z <= a / (b - 1.0), "requires 0 < z <= alpha/(beta-1)")


def _v_borel(p, z, n):
    return _need(1 < z < 1.0 / (1.0 - p["theta"]), "requires 1 < z < 1/(1-theta)")


def _v_consul(p, z, n):
    th, m = p["theta"], p["m"]
    return _need(1 <= z < 1.0 / (1.0 - m * th), "requires 1 <= z < 1/(1-m*theta)")


def _v_geeta(p, z, n):
    th, b = p["theta"], p["beta"]
    return _need(1 <= z <= (1.0 - th) / (1.0 - b * th), "requires 1 <= z <= (1-theta)/(1-beta*theta)")


def _v_gumbel(p, z, n):
    return _need(z <= p["mu"], "requires z <= mu")


def _v_invgamma_a(p, z, n):
    a, b = p["alpha"], p["beta"]
    if not a > 1:
        return "requires alpha > 1"
    return _need(0 < z <= b / (a - 1.0), "requires 0 < z <= beta/(alpha-1)")


def _v_invgamma_b(p, z, n):
    return _need(0 < z <= p["beta"] / p["alpha"], "requires 0 < z <= beta/alpha")


def _v_invgauss(p, z, n):
    return _need(0 < z <= p["theta"], "requires 0 < z <= theta")


def _v_laglog(p, z, n):
    return _need(0 < z <= _eq_laglog(p, p["theta"]), "requires 0 < z <= theta/((beta*theta-1) ln(1-theta))")


def _v_lagnegbin(p, z, n):
    th, a, b = p["theta"], p["alpha"], p["beta"]
    return _need(0 <= z <= b * th / (1.0 - a * th), "requires 0 <= z <= beta*theta/(1-alpha*theta)")


def _v_laplace_upper(p, z, n):
    return _need(z >= p["alpha"] + p["beta"], "requires z >= alpha+beta")


def _v_laplace_lower(p, z, n):
    return _need(z <= p["alpha"] - p["beta"], "requires z <= alpha-beta")


def _v_logarithmic(p, z, n):
    return _need(0 < z <= _eq_logarithmic(p, p["q"]), "requires 0 < z <= q/((1-q) ln(1/(1-q)))")


def _v_lognormal(p, z, n):
    return _need(0 < z <= math.exp(p["mu"]), "requires 0 < z <= exp(mu)")


def _v_nakagami_lower(p, z, n):
    return _need(0 < z <= _eq_nakagami(p, p["m"]), "requires 0 < z <= sigma*Gamma(m+1/2)/Gamma(m)")


def _v_nakagami_upper(p, z, n):
    return _need(z >= math.sqrt(p["m"]) * p["sigma"], "requires z >= sqrt(m)*sigma")


def _v_pareto(p, z, n):
    th, a = p["theta"], p["a"]
    mean = th * a / (th - 1.0)
    rho = z / mean
    lo = 1.0 - 1.0 / th
    # the closed upper end is where ϑ = θ; allow the rounding of rho*mu/mu
    hi = lo * math.exp(1.0 / th) * (1.0 + _SNAP)
    return _need(lo < rho <= hi, "requires 1-1/theta < z/mu <= (1-1/theta) exp(1/theta)")


def _v_powerlaw(p, z, n):
    a, b = p["alpha"], p["beta"]
    if not a > 1:
        return "requires alpha > 1"
    return _need(1 < z <= _eq_powerlaw(p, a), "requires 1 < z <= z(alpha), the mean of the distribution")


def _v_stirling(p, z, n):
    return _need(z <= _eq_stirling(p, p["theta"]), "requires z <= m*theta/((theta-1) ln(1-theta))")


def _v_single(inner):
    def v(p, z, n):
        if n != 1:
            return "bounds a single observation; n must be 1"
        return inner(p, z)
    return v


def _v_truncexp(p, z, n):
    th = p["theta"]
    if not 0 < z <= truncexp_mean(th):
        return "requires 0 < z <= 1 + 1/(e^theta - 1) - 1/theta"
    if abs(z - 0.5) < _HALF_TOL and th <= 0:
        return "z = 1/2 requires theta > 0"
    return None


def _v_uniform_upper(p, z, n):
    return _need(0.5 < z < 1, "requires 1/2 < z < 1")


def _v_uniform_lower(p, z, n):
    return _need(0 < z < 0.5, "requires 0 < z < 1/2")


def _v_weibull_lower(p, z, n):
    a, b = p["alpha"], p["beta"]
    if not b <= 1:
        return "requires beta <= 1"
    return _need(z > 0 and a * z ** b <= 1, "requires z > 0 and alpha*z^beta <= 1")


def _v_weibull_upper(p, z, n):
    a, b = p["alpha"], p["beta"]
    if not b > 1:
        return "requires beta > 1"
    return _need(z > 0 and a * z ** b >= 1, "requires z > 0 and alpha*z^beta >= 1")


# --- the catalog ---------------------------------------------------------------

_INF = math.inf


def _closed(theta_fn):
    return theta_fn


_ENTRIES: list[CatalogEntry] = [
    CatalogEntry(
        "normal_lower", "normal", "lower_mean", "z <= mu",
        "normal mean, location tilt, tilted mass 1/2", "closed-form", "argmin",
        _v_normal_lower, lambda p, z: z, _ll_normal, _iv(-_INF, lambda p, z: p["mu"]),
        log_offset=_LN_HALF,
    ),
    CatalogEntry(
        "normal_upper", "normal", "upper_mean", "z >= mu",
        "normal mean, location tilt, tilted mass 1/2", "closed-form", "argmin",
        _v_normal_upper, lambda p, z: z, _ll_normal, _iv(lambda p, z: p["mu"], _INF),
        log_offset=_LN_HALF,
    ),
    CatalogEntry(
        "beta_lower", "beta", "lower_mean", "0 < z <= alpha/(alpha+beta)",
        "beta, first shape tilt", "closed-form", "feasible",
        _v_beta_lower, lambda p, z: p["beta"] * z / (1.0 - z), _ll_beta_lower,
        _iv(0.0, lambda p, z: p["alpha"], lo_closed=False),
    ),
    CatalogEntry(
        "beta_upper", "beta", "upper_mean", "alpha/(alpha+beta) <= z < 1",
        "beta, second shape tilt", "closed-form", "feasible",
        _v_beta_upper, lambda p, z: p["alpha"] * (1.0 - z) / z, _ll_beta_upper,
        _iv(0.0, lambda p, z: p["beta"], lo_closed=False),
    ),
    CatalogEntry(
        "beta_lower_beta1", "beta", "lower_mean", "beta = 1, 0 < z < exp(-1/alpha)",
        "beta with unit second shape, first shape tilt", "closed-form", "argmin",
        _v_beta1, lambda p, z: 1.0 / math.log(1.0 / z), _ll_beta1,
        _iv(0.0, lambda p, z: p["alpha"], lo_closed=False),
    ),
    CatalogEntry(
        "beta_negbinom_cdf", "beta_negbinom", "cdf_point",
        "integer 0 <= z <= r*beta/(alpha-1), single observation",
        "beta negative binomial, second shape tilt", "closed-form", "feasible",
        _v_bnb, lambda p, z: (p["alpha"] - 1.0) * z / p["r"], _ll_bnb,
        _iv(0.0, lambda p, z: p["beta"], lo_closed=False),
        single_observation=True,
    ),
    CatalogEntry(
        "betaprime_lower_a", "betaprime", "lower_mean", "beta > 1, 0 < z <= alpha/(beta-1)",
        "beta-prime, first shape tilt", "closed-form", "feasible",
        _v_betaprime, lambda p, z: (p["beta"] - 1.0) * z, _ll_betaprime_a,
        _iv(0.0, lambda p, z: p["alpha"], lo_closed=False),
    ),
    CatalogEntry(
        "betaprime_lower_b", "betaprime", "lower_mean", "beta > 1, 0 < z <= alpha/(beta-1)",
        "beta-prime, second shape tilt", "closed-form", "feasible",
        _v_betaprime, lambda p, z: 1.0 + p["alpha"] / z, _ll_betaprime_b,
        _iv(lambda p, z: p["beta"], _INF),
    ),
    CatalogEntry(
        "borel_lower", "borel", "lower_mean", "1 < z < 1/(1-theta)",
        "Borel, parameter tilt", "closed-form", "argmin",
        _v_borel, lambda p, z: (z - 1.0) / z, _ll_borel,
        _iv(0.0, lambda p, z: p["theta"], lo_closed=False),
    ),
    CatalogEntry(
        "consul_lower", "consul", "lower_mean", "1 <= z < 1/(1-m*theta)",
        "Consul, parameter tilt", "closed-form", "argmin",
        _v_consul, lambda p, z: (z - 1.0) / (p["m"] * z), _ll_consul,
        _iv(0.0, lambda p, z: p["theta"], lo_closed=False),
    ),
    CatalogEntry(
        "geeta_lower", "geeta", "lower_mean", "1 <= z <= (1-theta)/(1-beta*theta)",
        "Geeta, parameter tilt", "closed-form", "argmin",
        _v_geeta, lambda p, z: (z - 1.0) / (p["beta"] * z - 1.0), _ll_geeta,
        _iv(0.0, lambda p, z: p["theta"], lo_closed=False),
    ),
    CatalogEntry(
        "gumbel_lower", "gumbel", "lower_mean", "z <= mu",
        "Gumbel, location tilt", "closed-form", "argmin",
        _v_gumbel, lambda p, z: z, _ll_gumbel, _iv(-_INF, lambda p, z: p["mu"]),
    ),
    CatalogEntry(
        "invgamma_lower_a", "invgamma", "lower_mean", "alpha > 1, 0 < z <= beta/(alpha-1)",
        "inverse gamma, shape tilt", "closed-form", "feasible",
        _v_invgamma_a, lambda p, z: p["beta"] / z + 1.0, _ll_invgamma_a,
        _iv(lambda p, z: p["alpha"], _INF),
    ),
    CatalogEntry(
        "invgamma_lower_b", "invgamma", "lower_mean", "0 < z <= beta/alpha",
        "inverse gamma, scale tilt", "closed-form", "argmin",
        _v_invgamma_b, lambda p, z: p["alpha"] * z, _ll_invgamma_b,
        _iv(0.0, lambda p, z: p["beta"], lo_closed=False),
    ),
    CatalogEntry(
        "invgauss_lower", "invgauss", "lower_mean", "0 < z <= theta",
        "inverse Gaussian, mean tilt", "closed-form", "argmin",
        _v_invgauss, lambda p, z: z, _ll_invgauss,
        _iv(0.0, lambda p, z: p["theta"], lo_closed=False),
    ),
    CatalogEntry(
        "laglog_lower", "laglog", "lower_mean", "0 < z <= theta/((beta*theta-1) ln(1-theta))",
        "Lagrangian logarithmic, parameter tilt", "implicit-equation", "argmin",
        _v_laglog, _theta_lower_support(_eq_laglog, lambda p: 1.0, lambda p: p["theta"]),
        _ll_laglog, _iv(0.0, lambda p, z: p["theta"], lo_closed=False),
        implicit_equation=_eq_laglog,
    ),
    CatalogEntry(
        "lagnegbin_lower", "lagnegbin", "lower_mean", "0 <= z <= beta*theta/(1-alpha*theta)",
        "Lagrangian negative binomial, parameter tilt", "closed-form", "argmin",
        _v_lagnegbin, lambda p, z: z / (p["beta"] + p["alpha"] * z), _ll_lagnegbin,
        _iv(0.0, lambda p, z: p["theta"], lo_closed=False),
    ),
    CatalogEntry(
        "laplace_upper", "laplace", "upper_mean", "z >= alpha+beta",
        "Laplace, scale tilt", "closed-form", "argmin",
        _v_laplace_upper, lambda p, z: z - p["alpha"], _ll_laplace(1.0),
        _iv(lambda p, z: p["beta"], _INF),
    ),
    CatalogEntry(
        "laplace_lower", "laplace", "lower_mean", "z <= alpha-beta",
        "Laplace, scale tilt", "closed-form", "argmin",
        _v_laplace_lower, lambda p, z: p["alpha"] - z, _ll_laplace(-1.0),
        _iv(lambda p, z: p["beta"], _INF),
    ),
    CatalogEntry(
        "logarithmic_lower", "logarithmic", "lower_mean", "0 < z <= q/((1-q) ln(1/(1-q)))",
        "logarithmic series, parameter tilt", "implicit-equation", "argmin",
        _v_logarithmic, _theta_lower_support(_eq_logarithmic, lambda p: 1.0, lambda p: p["q"]),
        _ll_logarithmic, _iv(0.0, lambda p, z: p["q"], lo_closed=False),
        implicit_equation=_eq_logarithmic,
    ),
    CatalogEntry(
        "lognormal_lower", "lognormal", "lower_mean", "0 < z <= exp(mu)",
        "lognormal, log-location tilt", "closed-form", "argmin",
        _v_lognormal, lambda p, z: math.log(z), _ll_lognormal, _iv(-_INF, lambda p, z: p["mu"]),
    ),
    CatalogEntry(
        "nakagami_lower", "nakagami", "lower_mean", "0 < z <= sigma*Gamma(m+1/2)/Gamma(m)",
        "Nakagami, shape tilt indexed by the tilted mean", "implicit-equation", "feasible",
        _v_nakagami_lower, _theta_nakagami, _ll_nakagami_lower,
        _iv(0.0, lambda p, z: p["m"], lo_closed=False),
        implicit_equation=_eq_nakagami,
    ),
    CatalogEntry(
        "nakagami_upper", "nakagami", "upper_mean", "z >= sqrt(m)*sigma",
        "Nakagami, scale tilt", "closed-form", "argmin",
        _v_nakagami_upper, lambda p, z: z / math.sqrt(p["m"]), _ll_nakagami_upper,
        _iv(lambda p, z: p["sigma"], _INF),
    ),
    CatalogEntry(
        "pareto_lower", "pareto", "lower_mean", "1-1/theta < z/mu <= (1-1/theta) exp(1/theta)",
        "Pareto, shape tilt", "closed-form", "argmin",
        _v_pareto, lambda p, z: 1.0 / math.log(z / p["a"]), _ll_pareto,
        _iv(lambda p, z: p["theta"], _INF),
    ),
    CatalogEntry(
        "powerlaw_lower", "powerlaw", "lower_mean", "alpha > 1, 1 < z <= mean",
        "truncated power law, exponent tilt indexed by the tilted mean", "implicit-equation", "feasible",
        _v_powerlaw, _theta_powerlaw, _ll_powerlaw, _iv(lambda p, z: p["alpha"], _INF),
        implicit_equation=_eq_powerlaw,
    ),
    CatalogEntry(
        "stirling_lower", "stirling", "lower_mean", "z <= m*theta/((theta-1) ln(1-theta))",
        "Stirling, parameter tilt", "implicit-equation", "argmin",
        _v_stirling, _theta_lower_support(_eq_stirling, lambda p: p["m"], lambda p: p["theta"]),
        _ll_stirling, _iv(0.0, lambda p, z: p["theta"], lo_closed=False),
        implicit_equation=_eq_stirling,
    ),
    CatalogEntry(
        "f_upper", "f", "upper_mean", "z >= 1, single observation",
        "F, scale tilt", "closed-form", "argmin",
        _v_single(lambda p, z: _need(z >= 1, "requires z >= 1")), lambda p, z: z, _ll_f,
        _iv(1.0, _INF), single_observation=True,
    ),
    CatalogEntry(
        "f_lower", "f", "lower_mean", "0 < z <= 1, single observation",
        "F, scale tilt", "closed-form", "argmin",
        _v_single(lambda p, z: _need(0 < z <= 1, "requires 0 < z <= 1")), lambda p, z: z, _ll_f,
        _iv(0.0, 1.0, lo_closed=False), single_observation=True,
    ),
    CatalogEntry(
        "t_twosided_outer", "t", "two_sided_outer", "z >= 1, single observation",
        "Student t, scale tilt", "closed-form", "argmin",
        _v_single(lambda p, z: _need(z >= 1, "requires z >= 1")), lambda p, z: z, _ll_t,
        _iv(1.0, _INF), single_observation=True,
    ),
    CatalogEntry(
        "t_twosided_inner", "t", "two_sided_inner", "0 < z <= 1, single observation",
        "Student t, scale tilt", "closed-form", "argmin",
        _v_single(lambda p, z: _need(0 < z <= 1, "requires 0 < z <= 1")), lambda p, z: z, _ll_t,
        _iv(0.0, 1.0, lo_closed=False), single_observation=True,
    ),
    CatalogEntry(
        "truncexp_lower", "truncexp", "lower_mean",
        "0 < z <= 1 + 1/(e^theta-1) - 1/theta (z = 1/2 needs theta > 0)",
        "truncated exponential, rate tilt", "implicit-equation", "argmin",
        _v_truncexp, _theta_truncexp, _ll_truncexp, _iv(-_INF, lambda p, z: p["theta"]),
        implicit_equation=lambda p, t: truncexp_mean(t),
    ),
    CatalogEntry(
        "uniform_upper", "uniform", "upper_mean", "1/2 < z < 1",
        "uniform, exponential tilt", "implicit-equation", "argmin",
        _v_uniform_upper, _theta_uniform_upper, _ll_uniform, _iv(0.0, _INF, lo_closed=False),
        implicit_equation=lambda p, t: truncexp_mean(t), variants=("tight", "relaxed"),
    ),
    CatalogEntry(
        "uniform_lower", "uniform", "lower_mean", "0 < z < 1/2",
        "uniform, exponential tilt", "implicit-equation", "argmin",
        _v_uniform_lower, _theta_uniform_lower, _ll_uniform, _iv(-_INF, 0.0, hi_closed=False),
        implicit_equation=lambda p, t: truncexp_mean(t), variants=("tight", "relaxed"),
    ),
    CatalogEntry(
        "weibull_lower", "weibull", "lower_mean", "beta <= 1, alpha*z^beta <= 1",
        "Weibull, scale tilt", "closed-form", "argmin",
        _v_weibull_lower, lambda p, z: z ** (-p["beta"]), _ll_weibull,
        _iv(lambda p, z: p["alpha"], _INF),
    ),
    CatalogEntry(
        "weibull_upper", "weibull", "upper_mean", "beta > 1, alpha*z^beta >= 1",
        "Weibull, scale tilt", "closed-form", "argmin",
        _v_weibull_upper, lambda p, z: z ** (-p["beta"]), _ll_weibull,
        _iv(0.0, lambda p, z: p["alpha"], lo_closed=False, hi_closed=False),
    ),
]


def _min_of(first: str, second: str):
    def custom(params, query, **_):
        a = _evaluate_entry(_BY_ID[first], params, query)
        b = _evaluate_entry(_BY_ID[second], params, query)
        if not a.valid:
            return a
        best = a if a.log_bound <= b.log_bound else b
        src = first if best is a else second
        return BoundResult(best.log_bound, best.bound, best.theta_star, True, f"minimum attained by {src}")
    return custom


_DERIVED = [
    CatalogEntry(
        "betaprime_lower", "betaprime", "lower_mean", "beta > 1, 0 < z <= alpha/(beta-1)",
        "minimum of the two beta-prime bounds", "none", "feasible",
        _v_betaprime, None, None, None, derived=True,
        custom=_min_of("betaprime_lower_a", "betaprime_lower_b"),
    ),
    CatalogEntry(
        "invgamma_lower", "invgamma", "lower_mean", "0 < z <= beta/alpha (and alpha > 1 for the shape form)",
        "minimum of the applicable inverse-gamma bounds", "none", "feasible",
        lambda p, z, n: _need(any(v(p, z, n) is None for v in (_v_invgamma_a, _v_invgamma_b)),
                              "requires 0 < z <= beta/alpha or (alpha > 1 and 0 < z <= beta/(alpha-1))"),
        None, None, None, derived=True,
    ),
]


def _invgamma_best(params, query, **_):
    results = [
        r for r in (
            _evaluate_entry(_BY_ID["invgamma_lower_a"], params, query),
            _evaluate_entry(_BY_ID["invgamma_lower_b"], params, query),
        ) if r.valid
    ]
    best = min(results, key=lambda r: r.log_bound)
    return BoundResult(best.log_bound, best.bound, best.theta_star, True, "minimum of the applicable forms")


_DERIVED[1] = CatalogEntry(**{**_DERIVED[1].__dict__, "custom": _invgamma_best})

_BY_ID: dict[str, CatalogEntry] = {e.id: e for e in _ENTRIES + _DERIVED}

_DEFAULT_FOR = {
    ("normal", "lower_mean"): "normal_lower",
    ("normal", "upper_mean"): "normal_upper",
    ("beta", "lower_mean"): "beta_lower",
    ("beta", "upper_mean"): "beta_upper",
    ("beta_negbinom", "cdf_point"): "beta_negbinom_cdf",
    ("betaprime", "lower_mean"): "betaprime_lower",
    ("borel", "lower_mean"): "borel_lower",
    ("consul", "lower_mean"): "consul_lower",
    ("geeta", "lower_mean"): "geeta_lower",
    ("gumbel", "lower_mean"): "gumbel_lower",
    ("invgamma", "lower_mean"): "invgamma_lower",
    ("invgauss", "lower_mean"): "invgauss_lower",
    ("laglog", "lower_mean"): "laglog_lower",
    ("lagnegbin", "lower_mean"): "lagnegbin_lower",
    ("laplace", "upper_mean"): "laplace_upper",
    ("laplace", "lower_mean"): "laplace_lower",
    ("logarithmic", "lower_mean"): "logarithmic_lower",
    ("lognormal", "lower_mean"): "lognormal_lower",
    ("nakagami", "lower_mean"): "nakagami_lower",
    ("nakagami", "upper_mean"): "nakagami_upper",
    ("pareto", "lower_mean"): "pareto_lower",
    ("powerlaw", "lower_mean"): "powerlaw_lower",
    ("stirling", "lower_mean"): "stirling_lower",
    ("f", "upper_mean"): "f_upper",
    ("f", "lower_mean"): "f_lower",
    ("t", "two_sided_outer"): "t_twosided_outer",
    ("t", "two_sided_inner"): "t_twosided_inner",
    ("truncexp", "lower_mean"): "truncexp_lower",
    ("uniform", "upper_mean"): "uniform_upper",
    ("uniform", "lower_mean"): "uniform_lower",
    ("weibull", "lower_mean"): "weibull_lower",
    ("weibull", "upper_mean"): "weibull_upper",
}


def register_auxiliary(entry: CatalogEntry) -> None:
    """Add an entry that is not one of the tabulated theorems (e.g. CGF bounds)."""
    if entry.id in _BY_ID:
        raise ValueError(f"duplicate entry id {entry.id!r}")
    _BY_ID[entry.id] = entry


def catalog() -> dict[str, CatalogEntry]:
    return dict(_BY_ID)


def list_catalog(include_derived: bool = False, include_auxiliary: bool = False) -> list[CatalogEntry]:
    """Univariate catalog entries in table order.

    By default only the tabulated theorem entries are returned; convenience
    minima and the CGF-based bounds are opt-in.
    """
    out = []
    for e in _BY_ID.values():
        if e.derived and not include_derived:
            continue
        if e.auxiliary and not include_auxiliary:
            continue
        out.append(e)
    return out


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return _BY_ID[entry_id]
    except KeyError:
        raise UnknownEntryError(f"unknown univariate entry {entry_id!r}") from None


def _evaluate_entry(entry: CatalogEntry, params: Mapping, query: TailQuery, *,
                    variant: Optional[str] = None, cross_check: bool = False) -> BoundResult:
    z, n = query.z, query.n
    why = entry.validity(params, z, n)
    if why:
        return BoundResult.invalid(f"{entry.id}: {why}")
    if entry.custom is not None:
        return entry.custom(params, query, variant=variant)
    if variant == "relaxed":
        # exp(-6n(z-1/2)^2), from the sub-Gaussian bound on the uniform MGF
        return BoundResult.from_log(-6.0 * n * (z - 0.5) ** 2, None, "relaxed form")
    try:
        theta = entry.theta(params, z)
        if entry.theta_solver == "closed-form":
            theta = _snap_to(entry.theta_domain(params, z), theta)
    except LRBoundsError as exc:
        raise LRBoundsError(f"{entry.id}: solving for the tilt failed at z={z!r}: {exc}") from exc
    per_obs = entry.log_lambda(params, z, theta)
    reason = ""
    if cross_check and entry.theta_solver == "closed-form":
        fam = entry.lr_family(params, z)
        check = infimum_bound(fam, cross_check=True)
        reason = check.reason
    return BoundResult.from_log(entry.log_offset + n * per_obs, theta, reason)


def evaluate_bound(
    spec: DistributionSpec,
    query: TailQuery,
    entry_id: Optional[str] = None,
    *,
    variant: Optional[str] = None,
    cross_check: bool = False,
) -> BoundResult:
    """Bound on the tail probability described by ``query``.

    ``entry_id`` selects a specific catalog entry; without it the default
    entry for (family, direction) is used.  Invalid queries yield valid=False
    with bound 1; invalid parameters raise DomainError.
    """
    if entry_id is None:
        try:
            entry_id = _DEFAULT_FOR[(spec.family, query.direction)]
        except KeyError:
            raise UnknownEntryError(
                f"no bound for family {spec.family!r} in direction {query.direction!r}"
            ) from None
    entry = get_entry(entry_id)
    if entry.family != spec.family:
        raise DomainError(f"entry {entry_id!r} is for family {entry.family!r}, not {spec.family!r}")
    if entry.direction != query.direction:
        raise DomainError(
            f"entry {entry_id!r} bounds direction {entry.direction!r}, query asks {query.direction!r}"
        )
    if variant is not None and variant not in entry.variants:
        raise DomainError(f"entry {entry_id!r} has no variant {variant!r}")
    params = validate_spec(spec)
    return _evaluate_entry(entry, params, query, variant=variant, cross_check=cross_check)


def solve_implicit_theta(entry_id: str, spec: DistributionSpec, z: float) -> float:
    """ϑ solving the entry's monotone equation at threshold z."""
    entry = get_entry(entry_id)
    if entry.theta_solver != "implicit-equation":
        raise DomainError(f"entry {entry_id!r} has no implicit equation")
    params = validate_spec(spec)
    return entry.theta(params, z)


def powerlaw_bound_at_theta(alpha: float, beta: float, theta: float, n: int = 1) -> tuple[float, BoundResult]:
    """The power-law bound indexed directly by the tilt exponent θ >= α > 1.

    Returns the threshold z(θ) it applies to and the bound on P(X̄ <= z(θ)).
    """
    params = validate_spec(DistributionSpec("powerlaw", {"alpha": alpha, "beta": beta}))
    if not alpha > 1:
        return math.nan, BoundResult.invalid("requires alpha > 1")
    if not theta >= alpha:
        return math.nan, BoundResult.invalid("requires theta >= alpha")
    z = powerlaw_threshold(theta, alpha, beta)
    return z, BoundResult.from_log(n * _ll_powerlaw(params, z, theta), theta)
