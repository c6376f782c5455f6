"""Small dense symmetric positive-definite matrix helpers.

LAPACK (through numpy/scipy) does the factorization.  On top of it sits a
strict positive-definiteness test, which rejects a matrix whose smallest
Cholesky pivot falls below ``pivot_tol`` times its largest diagonal entry.
That test is what the Loewner-order comparison uses, so singular
differences count as *not* ordered.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from .errors import DimensionError, NotPositiveDefiniteError

__all__ = [
    "PIVOT_TOL",
    "as_symmetric",
    "cholesky",
    "log_det",
    "spd_solve",
    "loewner_leq",
]

PIVOT_TOL = 1e-10
_SYMMETRY_TOL = 1e-12


def as_symmetric(m) -> np.ndarray:
    """Validate a square symmetric matrix and return it as a float array."""
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotPositiveDefiniteError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > _SYMMETRY_TOL * scale:
        raise DimensionError("matrix is not symmetric to 1e-12")
    return 0.5 * (a + a.T)


def cholesky(m, pivot_tol: float = PIVOT_TOL) -> np.ndarray:
    """Lower-triangular L with L @ L.T == m; raises if m is not positive definite."""
    a = as_symmetric(m)
    try:
        factor = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("matrix is not positive definite") from exc
    pivots = np.diag(factor) ** 2
    scale = max(float(np.max(np.abs(np.diag(a)))), np.finfo(float).tiny)
    if np.min(pivots) <= pivot_tol * scale:
        raise NotPositiveDefiniteError(
            f"smallest Cholesky pivot {np.min(pivots):.3e} is within tolerance of zero"
        )
    return factor


def log_det(m) -> float:
    factor = cholesky(m)
    return float(2.0 * np.sum(np.log(np.diag(factor))))


def spd_solve(m, v) -> np.ndarray:
    factor = cholesky(m)
    rhs = np.asarray(v, dtype=float)
    if rhs.ndim != 1 or rhs.shape[0] != factor.shape[0]:
        raise DimensionError(
            f"right-hand side of shape {rhs.shape} does not match a {factor.shape[0]}x{factor.shape[0]} matrix"
        )
    return linalg.cho_solve((factor, True), rhs)


def loewner_leq(a, b, pivot_tol: float = PIVOT_TOL) -> bool:
    """True iff b - a is (strictly) positive definite."""
    a_arr = as_symmetric(a)
    b_arr = as_symmetric(b)
    if a_arr.shape != b_arr.shape:
        raise DimensionError(f"shapes {a_arr.shape} and {b_arr.shape} differ")
    try:
        cholesky(b_arr - a_arr, pivot_tol=pivot_tol)
    except NotPositiveDefiniteError:
        return False
    return True
