"""Bracketed root finding and bounded scalar minimization.

Brent's method from scipy does the iteration; this module owns the contract
around it: bracket validation, geometric expansion of open-ended intervals,
iteration limits and the error types raised on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy import optimize

from .errors import ConvergenceError, DomainError, RootNotBracketedError

__all__ = [
    "Bracket",
    "SearchConfig",
    "DEFAULT_SEARCH",
    "find_root_bracketed",
    "expand_bracket",
    "minimize_1d",
]

_EPS = 2.220446049250313e-16
_MAX_EXPANSIONS = 60


@dataclass(frozen=True)
class SearchConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if not self.rel_tol >= 0:
            raise DomainError("rel_tol must be nonnegative")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise DomainError("max_iter must be a positive integer")


DEFAULT_SEARCH = SearchConfig()


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0:
            raise RootNotBracketedError(
                f"no sign change on [{self.lo}, {self.hi}]: f = {self.f_lo}, {self.f_hi}"
            )

    @classmethod
    def of(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, f(lo), f(hi))


def find_root_bracketed(
    f: Callable[[float], float],
    bracket: Bracket,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> float:
    """Root of a continuous f inside ``bracket``.

    The final interval width is at most abs_tol + rel_tol*|x|, and the
    returned point never leaves the initial bracket.
    """
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    # brentq refuses rtol below 4 eps; the abs_tol term dominates there anyway
    rtol = max(cfg.rel_tol, 4.0 * _EPS)
    try:
        root, info = optimize.brentq(
            f,
            bracket.lo,
            bracket.hi,
            xtol=cfg.abs_tol,
            rtol=rtol,
            maxiter=cfg.max_iter,
            full_output=True,
            disp=False,
        )
    except ValueError as exc:
        raise RootNotBracketedError(str(exc)) from exc
    if not info.converged:
        raise ConvergenceError(
            f"root finder did not converge in {cfg.max_iter} iterations ({info.flag})"
        )
    return min(max(root, bracket.lo), bracket.hi)


def expand_bracket(
    f: Callable[[float], float],
    start: float,
    lo: float = -math.inf,
    hi: float = math.inf,
    step: float | None = None,
) -> Bracket:
    """Find a sign-change bracket for f inside the (possibly open) interval (lo, hi).

    Starting from the interior point ``start``, the search moves outwards with
    geometrically growing steps.  A finite end is approached by halving the gap
    to it, an infinite end by doubling the step.  At most 60 expansions are made
    in total.
    """
    f0 = f(start)
    if f0 == 0.0:
        return _degenerate(start)
    if step is None:
        step = max(abs(start), 1.0) * 0.5
    left, f_left = start, f0
    right, f_right = start, f0
    left_step = right_step = step
    for _ in range(_MAX_EXPANSIONS):
        moved = False
        if right < hi:
            if math.isinf(hi):
                cand = right + right_step
                right_step *= 2.0
            else:
                cand = right + 0.5 * (hi - right)
            if cand > right:
                f_cand = f(cand)
                if f_cand * f0 <= 0:
                    return Bracket(right, cand, f_right, f_cand)
                right, f_right = cand, f_cand
                moved = True
        if left > lo:
            if math.isinf(lo):
                cand = left - left_step
                left_step *= 2.0
            else:
                cand = left - 0.5 * (left - lo)
            if cand < left:
                f_cand = f(cand)
                if f_cand * f0 <= 0:
                    return Bracket(cand, left, f_cand, f_left)
                left, f_left = cand, f_cand
                moved = True
        if not moved:
            break
    raise RootNotBracketedError(
        f"no sign change found within {_MAX_EXPANSIONS} expansions from {start}"
    )


def _degenerate(x: float) -> Bracket:
    # start is already a root; find_root_bracketed returns lo immediately
    return Bracket(x, x + max(abs(x), 1.0) * 8 * _EPS, 0.0, 0.0)


def minimize_1d(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> tuple[float, float]:
    """Minimize a unimodal f on the closed interval [lo, hi].

    Bounded Brent search, followed by a comparison against both endpoints so
    that minima sitting on the boundary are returned exactly.  The location
    tolerance cannot beat the square-root-of-epsilon floor inherent to
    value-only minimization, so abs_tol is floored at 1e-10 * (1 + |x|).
    """
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("minimize_1d needs a finite interval")
    if lo > hi:
        raise DomainError(f"empty interval [{lo}, {hi}]")
    if lo == hi:
        return lo, f(lo)
    xatol = max(cfg.abs_tol, 1e-10 * (1.0 + max(abs(lo), abs(hi))))
    res = optimize.minimize_scalar(
        f,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": xatol, "maxiter": cfg.max_iter},
    )
    if res.status == 1:
        raise ConvergenceError(f"minimizer did not converge: {res.message}")
    best_x, best_f = float(res.x), float(res.fun)
    for x_end in (lo, hi):
        f_end = f(x_end)
        if f_end <= best_f:
            best_x, best_f = x_end, f_end
    return best_x, best_f
