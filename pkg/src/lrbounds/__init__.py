"""Likelihood-ratio concentration bounds with Monte Carlo verification.

Typical use::

    from lrbounds import DistributionSpec, TailQuery, evaluate_bound
    evaluate_bound(DistributionSpec("borel", {"theta": 0.5}), TailQuery("lower_mean", 1.2, 1))
"""

from .engine import (
    DEFAULT_C_BE,
    BoundResult,
    CgfModel,
    Interval,
    LrFamily,
    chernoff_bound,
    infimum_bound,
    me_bound,
    refined_chernoff_bound,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    LRBoundsError,
    NotPositiveDefiniteError,
    RootNotBracketedError,
    UnknownEntryError,
)
from .families import DistributionSpec
from .multivariate import (
    LoewnerQuery,
    OrthantQuery,
    dcm_orthant_bound,
    img_loewner_bound,
    mvn_orthant_bound,
    mvp_orthant_bound,
)
from .registry import evaluate
from .samplers import RngStream, SampleBatch, log_density, sample
from .univariate import TailQuery, evaluate_bound, list_catalog, solve_implicit_theta
from .verifier import (
    MonteCarloConfig,
    VerificationReport,
    check_dominance,
    estimate_tail,
    summarize,
    tightness_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_C_BE",
    "BoundResult",
    "CgfModel",
    "Interval",
    "LrFamily",
    "chernoff_bound",
    "infimum_bound",
    "me_bound",
    "refined_chernoff_bound",
    "ConvergenceError",
    "DimensionError",
    "DomainError",
    "LRBoundsError",
    "NotPositiveDefiniteError",
    "RootNotBracketedError",
    "UnknownEntryError",
    "DistributionSpec",
    "LoewnerQuery",
    "OrthantQuery",
    "dcm_orthant_bound",
    "img_loewner_bound",
    "mvn_orthant_bound",
    "mvp_orthant_bound",
    "evaluate",
    "RngStream",
    "SampleBatch",
    "log_density",
    "sample",
    "TailQuery",
    "evaluate_bound",
    "list_catalog",
    "solve_implicit_theta",
    "MonteCarloConfig",
    "VerificationReport",
    "check_dominance",
    "estimate_tail",
    "summarize",
    "tightness_sweep",
]
