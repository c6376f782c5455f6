"""One namespace of entry ids for the CLI and the verifier.

Univariate catalog entries come from :mod:`lrbounds.univariate`; this module
adds the four multivariate entries and the CGF-based Chernoff entries, and
knows which query type each id takes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .engine import (
    DEFAULT_C_BE,
    BoundResult,
    CgfModel,
    bernoulli_cgf,
    chernoff_bound,
    exponential_cgf,
    normal_cgf,
    poisson_cgf,
    refined_chernoff_bound,
)
from .errors import DomainError, UnknownEntryError
from .families import DistributionSpec, validate_spec
from .multivariate import (
    LoewnerQuery,
    OrthantQuery,
    dcm_orthant_bound,
    img_loewner_bound,
    mvn_orthant_bound,
    mvp_orthant_bound,
)
from .univariate import TailQuery, evaluate_bound, get_entry, list_catalog

__all__ = [
    "EntryInfo",
    "Query",
    "entries",
    "entry_info",
    "evaluate",
    "make_query",
    "query_from_dict",
    "MULTIVARIATE_IDS",
    "CGF_IDS",
]

Query = Union[TailQuery, OrthantQuery, LoewnerQuery]


@dataclass(frozen=True)
class EntryInfo:
    id: str
    kind: str  # "univariate" | "multivariate" | "cgf"
    families: tuple[str, ...]
    direction: str
    validity_text: str
    anchor: str
    query_type: str  # "tail" | "orthant" | "loewner"
    derived: bool = False
    auxiliary: bool = False

    def describe(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "families": list(self.families),
            "direction": self.direction,
            "validity": self.validity_text,
            "anchor": self.anchor,
        }


_MULTI = [
    EntryInfo(
        "dcm_lower_orthant", "multivariate", ("dcm",), "lower_orthant",
        "0 < z_l <= n*alpha_l/sum(alpha), sum(z) < n; one draw of n trials",
        "Dirichlet-compound multinomial, tilt of alpha_1..alpha_k", "orthant",
    ),
    EntryInfo(
        "img_loewner_lower", "multivariate", ("img",), "loewner",
        "0 < rho < 1, 2*alpha - p - 1 > 0",
        "inverse matrix gamma, Loewner ball below rho times the mean", "loewner",
    ),
    EntryInfo(
        "mvn_upper_orthant", "multivariate", ("mvn",), "upper_orthant",
        "inv(sigma) z >= inv(sigma) mu componentwise",
        "multivariate normal, mean tilt", "orthant",
    ),
    EntryInfo(
        "mvp_lower_orthant", "multivariate", ("mvp",), "lower_orthant",
        "z_l > beta_l, plus the chosen strategy's proviso",
        "multivariate Pareto, shape tilt (direct, balanced_root, mean_based, best)", "orthant",
    ),
]
MULTIVARIATE_IDS = tuple(e.id for e in _MULTI)

_CGF_FAMILIES = ("normal", "exponential", "bernoulli", "poisson")
_CGF = [
    EntryInfo(
        f"{kind}_{side}", "cgf", _CGF_FAMILIES, f"{side}_mean",
        f"z {'>=' if side == 'upper' else '<='} mean, inside the range of the CGF derivative",
        "classical Chernoff bound" if kind == "chernoff" else "Chernoff bound with Berry-Esseen factor",
        "tail", auxiliary=True,
    )
    for kind in ("chernoff", "refined_chernoff")
    for side in ("upper", "lower")
]
CGF_IDS = tuple(e.id for e in _CGF)


def _univariate_info(e) -> EntryInfo:
    return EntryInfo(
        e.id, "univariate", (e.family,), e.direction, e.validity_text, e.anchor, "tail",
        derived=e.derived,
    )


def entries(include_derived: bool = False, include_auxiliary: bool = False) -> list[EntryInfo]:
    """Every entry id in catalog order: univariate, then multivariate, then CGF."""
    out = [_univariate_info(e) for e in list_catalog(include_derived=include_derived)]
    out.extend(_MULTI)
    if include_auxiliary:
        out.extend(_CGF)
    return out


_ALL = {e.id: e for e in entries(include_derived=True, include_auxiliary=True)}


def entry_info(entry_id: str) -> EntryInfo:
    try:
        return _ALL[entry_id]
    except KeyError:
        raise UnknownEntryError(f"unknown entry {entry_id!r}") from None


def make_query(entry_id: str, z, n: int = 1) -> Query:
    """Query of the right type for ``entry_id``; for the Loewner entry z is ρ."""
    info = entry_info(entry_id)
    if info.query_type == "tail":
        if not isinstance(z, (int, float)) or isinstance(z, bool):
            raise DomainError(f"{entry_id}: z must be a real number")
        return TailQuery(info.direction, float(z), n)
    if info.query_type == "orthant":
        return OrthantQuery(tuple(z), n, info.direction)
    if n != 1:
        raise DomainError(f"{entry_id}: the Loewner bound concerns a single matrix; n must be 1")
    return LoewnerQuery(float(z))


def query_from_dict(d: dict) -> Query:
    if "rho" in d:
        return LoewnerQuery.from_dict(d)
    if d.get("direction") in ("lower_orthant", "upper_orthant"):
        return OrthantQuery.from_dict(d)
    return TailQuery.from_dict(d)


def _cgf_for(spec: DistributionSpec) -> CgfModel:
    p = validate_spec(spec)
    if spec.family == "normal":
        return normal_cgf(p["mu"], p["sigma"])
    if spec.family == "exponential":
        return exponential_cgf(p["rate"])
    if spec.family == "bernoulli":
        return bernoulli_cgf(p["p"])
    if spec.family == "poisson":
        return poisson_cgf(p["lam"])
    raise DomainError(f"no CGF model for family {spec.family!r}")


def _check_query_type(info: EntryInfo, query) -> None:
    want = {"tail": TailQuery, "orthant": OrthantQuery, "loewner": LoewnerQuery}[info.query_type]
    if not isinstance(query, want):
        raise DomainError(f"{info.id} takes a {want.__name__}, got {type(query).__name__}")
    if hasattr(query, "direction") and query.direction != info.direction:
        raise DomainError(f"{info.id} bounds direction {info.direction!r}, query asks {query.direction!r}")


def evaluate(
    entry_id: str,
    spec: DistributionSpec,
    query: Query,
    *,
    variant: Optional[str] = None,
    c_be: float = DEFAULT_C_BE,
    strategy: Optional[str] = None,
    theta: Optional[float] = None,
) -> BoundResult:
    """Evaluate any registered entry."""
    info = entry_info(entry_id)
    if spec.family not in info.families:
        raise DomainError(f"entry {entry_id!r} does not apply to family {spec.family!r}")
    _check_query_type(info, query)
    if strategy is not None and entry_id != "mvp_lower_orthant":
        raise DomainError(f"entry {entry_id!r} has no strategies")
    if info.kind == "univariate":
        return evaluate_bound(spec, query, entry_id, variant=variant)
    if variant is not None:
        raise DomainError(f"entry {entry_id!r} has no variant {variant!r}")
    if info.kind == "cgf":
        cgf = _cgf_for(spec)
        mean = cgf.d1(0.0)
        side_ok = query.z >= mean if info.direction == "upper_mean" else query.z <= mean
        if not side_ok:
            return BoundResult.invalid(
                f"{entry_id}: requires z {'>=' if info.direction == 'upper_mean' else '<='} mean {mean!r}"
            )
        if entry_id.startswith("refined"):
            return refined_chernoff_bound(cgf, query.z, query.n, c_be)
        return chernoff_bound(cgf, query.z, query.n)
    p = validate_spec(spec)
    if entry_id == "dcm_lower_orthant":
        trials = p.get("trials")
        if trials is not None and trials != query.n:
            raise DomainError(f"dcm: spec has trials={trials!r} but the query has n={query.n}")
        return dcm_orthant_bound(p["alphas"], query.n, query.z)
    if entry_id == "img_loewner_lower":
        return img_loewner_bound(int(p["p"]), p["alpha"], query.rho)
    if entry_id == "mvn_upper_orthant":
        return mvn_orthant_bound(p["mu"], p["sigma"], query.n, query.z)
    return mvp_orthant_bound(
        p["alpha"], p["betas"], query.z, query.n, strategy or "balanced_root", theta
    )


def is_univariate(entry_id: str) -> bool:
    return entry_info(entry_id).kind == "univariate"


def single_observation(entry_id: str) -> bool:
    info = entry_info(entry_id)
    if info.kind == "univariate":
        return get_entry(entry_id).single_observation
    return entry_id in ("dcm_lower_orthant", "img_loewner_lower")

