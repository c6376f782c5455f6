"""Log-domain special functions: log-gamma, log-beta, multivariate log-gamma and
generalized binomial coefficients.

``log_gamma`` is a hand-rolled routine rather than a thin wrapper around
``math.lgamma`` because the library versions lose relative accuracy next to the
zeros of ln Γ at x = 1 and x = 2.  The scheme is:

* x in [1.5, 2.5): Taylor series of ln Γ(2 + e) with coefficients (ζ(k) − 1)/k,
  which converges like (e/2)^k and is exact in relative terms as e → 0;
* x in [0.5, 1.5): the same series minus log1p(x − 1);
* x < 0.5: one upward step of the recurrence;
* x in [2.5, 12): downward recurrence into [1.5, 2.5) (every factor > 1, so no
  cancellation);
* x >= 12: Stirling's asymptotic series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zetac

from .errors import DomainError

__all__ = [
    "log_exprel",
    "LogValue",
    "log_gamma",
    "log_beta",
    "log_multivariate_gamma",
    "log_gen_binom",
]

_EULER_GAMMA = 0.57721566490153286061
_HALF_LN_2PI = 0.91893853320467274178
_LN_PI = 1.1447298858494001741

# series coefficients c_k = (-1)^k (ζ(k) - 1) / k, k = 2..40; |e| <= 0.5 needs ~27
_SERIES_DEGREE = 40
_SERIES_COEFFS = tuple(
    (-1.0) ** k * float(zetac(k)) / k for k in range(2, _SERIES_DEGREE + 1)
)
_SERIES_COEFFS_REV = _SERIES_COEFFS[::-1]

# Bernoulli numbers B_2k / (2k (2k - 1)) for the Stirling tail, k = 1..10
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)
_STIRLING_CUTOFF = 12.0


@dataclass(frozen=True)
class LogValue:
    """A real number stored as (sign, natural log of its magnitude)."""

    log_magnitude: float
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0 and self.log_magnitude != -math.inf:
            raise ValueError("a zero LogValue must carry log_magnitude = -inf")
        if self.sign != 0 and not math.isfinite(self.log_magnitude):
            raise ValueError("a nonzero LogValue needs a finite log_magnitude")

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0.0:
            return cls(-math.inf, 0)
        if not math.isfinite(x):
            raise DomainError(f"cannot represent non-finite value {x!r}")
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue(-math.inf, 0)
        return LogValue(self.log_magnitude + other.log_magnitude, self.sign * other.sign)


def _series_near_two(e):
    """ln Γ(2 + e) for |e| <= 0.5 (works for floats and arrays)."""
    acc = _SERIES_COEFFS_REV[0]
    for c in _SERIES_COEFFS_REV[1:]:
        acc = acc * e + c
    return e * ((1.0 - _EULER_GAMMA) + e * acc)


def _stirling(x):
    inv = 1.0 / x
    inv2 = inv * inv
    tail = _STIRLING_COEFFS[-1]
    for c in _STIRLING_COEFFS[-2::-1]:
        tail = tail * inv2 + c
    if isinstance(x, np.ndarray):
        log_x = np.log(x)
    else:
        log_x = math.log(x)
    return (x - 0.5) * log_x - x + _HALF_LN_2PI + tail * inv


def _log_gamma_scalar(x: float) -> float:
    if x < 0.5:
        # ln Γ(x) = ln Γ(x + 1) - ln x, with x + 1 in (1, 1.5)
        e = x
        return _series_near_two(e) - math.log1p(e) - math.log(x)
    if x < 1.5:
        e = x - 1.0
        return _series_near_two(e) - math.log1p(e)
    if x < 2.5:
        return _series_near_two(x - 2.0)
    if x < _STIRLING_CUTOFF:
        steps = int(math.floor(x - 1.5))
        y = x - steps
        if y >= 2.5:
            steps += 1
            y -= 1.0
        prod = 1.0
        for j in range(1, steps + 1):
            prod *= x - j
        return _series_near_two(y - 2.0) + math.log(prod)
    return _stirling(x)


def _log_gamma_array(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)

    m = x < 0.5
    if m.any():
        e = x[m]
        out[m] = _series_near_two(e) - np.log1p(e) - np.log(e)
    m = (x >= 0.5) & (x < 1.5)
    if m.any():
        e = x[m] - 1.0
        out[m] = _series_near_two(e) - np.log1p(e)
    m = (x >= 1.5) & (x < 2.5)
    if m.any():
        out[m] = _series_near_two(x[m] - 2.0)
    m = (x >= 2.5) & (x < _STIRLING_CUTOFF)
    if m.any():
        xm = x[m]
        steps = np.floor(xm - 1.5)
        y = xm - steps
        bump = y >= 2.5
        steps = steps + bump
        y = np.where(bump, y - 1.0, y)
        prod = np.ones_like(xm)
        for j in range(1, int(steps.max()) + 1):
            prod *= np.where(j <= steps, xm - j, 1.0)
        out[m] = _series_near_two(y - 2.0) + np.log(prod)
    m = x >= _STIRLING_CUTOFF
    if m.any():
        out[m] = _stirling(x[m])
    return out


def log_gamma(x):
    """Natural log of the gamma function for positive finite arguments.

    Accepts a float or an array; arrays are evaluated elementwise.
    """
    if isinstance(x, np.ndarray) and x.ndim > 0:
        xa = x.astype(float, copy=False)
        if not np.all(np.isfinite(xa)) or np.any(xa <= 0.0):
            raise DomainError("log_gamma requires finite positive arguments")
        return _log_gamma_array(xa)
    xf = float(x)
    if not math.isfinite(xf) or xf <= 0.0:
        raise DomainError(f"log_gamma requires a finite positive argument, got {x!r}")
    return _log_gamma_scalar(xf)


def log_beta(a, b):
    """ln B(a, b) as a sum of log-gamma terms."""
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        a_arr, b_arr = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        if np.any(a_arr <= 0) or np.any(b_arr <= 0):
            raise DomainError("log_beta requires positive arguments")
        a_arr = np.atleast_1d(a_arr)
        b_arr = np.atleast_1d(b_arr)
        return log_gamma(a_arr) + log_gamma(b_arr) - log_gamma(a_arr + b_arr)
    if not (a > 0 and b > 0):
        raise DomainError(f"log_beta requires positive arguments, got ({a!r}, {b!r})")
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def log_multivariate_gamma(p: int, a: float) -> float:
    """ln Γ_p(a) for an integer dimension p and a > (p - 1)/2."""
    if int(p) != p or p < 1:
        raise DomainError(f"dimension must be a positive integer, got {p!r}")
    p = int(p)
    if not math.isfinite(a) or a <= (p - 1) / 2.0:
        raise DomainError(f"log_multivariate_gamma needs a > (p-1)/2 = {(p - 1) / 2}, got {a!r}")
    total = 0.0
    for j in range(1, p + 1):
        total += log_gamma(a + (1.0 - j) / 2.0)
    return p * (p - 1) / 4.0 * _LN_PI + total


def log_gen_binom(t: float, k: int) -> LogValue:
    """Generalized binomial coefficient t(t-1)...(t-k+1)/k! with an explicit sign.

    Computed from the falling-factorial product so that negative and
    non-integer t are handled uniformly.
    """
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t!r}")
    k = int(k)
    if k == 0:
        return LogValue(0.0, 1)
    sign = 1
    logs = []
    for ell in range(1, k + 1):
        factor = t - (ell - 1)
        if factor == 0.0:
            return LogValue(-math.inf, 0)
        if factor < 0:
            sign = -sign
        logs.append(math.log(abs(factor)))
    return LogValue(math.fsum(logs) - log_gamma(k + 1.0), sign)


def log_exprel(t: float) -> float:
    """ln((e^t - 1)/t), continuous at t = 0 and free of overflow for large |t|."""
    if t == 0.0:
        return 0.0
    if abs(t) < 1e-5:
        return t / 2.0 + t * t / 24.0
    if t > 0:
        return t + math.log1p(-math.exp(-t)) - math.log(t)
    return math.log(-math.expm1(t)) - math.log(-t)
