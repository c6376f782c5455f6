"""Monte Carlo checks that a bound dominates the true tail probability.

The sample budget is split into ``workers`` contiguous blocks.  Block i is
driven by RngStream(seed, i) and blocks are merged in index order, so the
result depends on (seed, samples, workers) and nothing else.  Dominance is
judged against the lower Clopper-Pearson limit, so sampling noise alone
cannot flag a violation.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy.stats import binomtest

from .engine import BoundResult
from .errors import DomainError
from .families import DistributionSpec, validate_spec
from .multivariate import LoewnerQuery, OrthantQuery
from .registry import Query, entry_info, evaluate, make_query, query_from_dict
from .samplers import RngStream, img_mean, sample
from .univariate import TailQuery

__all__ = [
    "MonteCarloConfig",
    "VerificationReport",
    "estimate_tail",
    "check_dominance",
    "tightness_sweep",
    "summarize",
    "to_jsonl",
    "report_from_json",
    "to_csv",
]

_U64 = (1 << 64) - 1
_CHUNK_DRAWS = 1 << 20
# sums within this relative slack of the threshold count as hitting it
_EVENT_SLACK = 1e-9


@dataclass(frozen=True)
class MonteCarloConfig:
    samples: int = 100_000
    seed: int = 0
    confidence: float = 0.9999
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.samples, bool) or int(self.samples) != self.samples or self.samples < 1:
            raise DomainError("samples must be a positive integer")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed <= _U64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if not 0.0 < self.confidence < 1.0:
            raise DomainError("confidence must lie in (0, 1)")
        if isinstance(self.workers, bool) or int(self.workers) != self.workers or self.workers < 1:
            raise DomainError("workers must be a positive integer")


@dataclass(frozen=True)
class VerificationReport:
    entry_id: str
    spec: dict
    query: dict
    bound: float
    log_bound: float
    valid: bool
    reason: str
    p_hat: float
    cp_lower: float
    cp_upper: float
    dominated: bool
    tightness: Optional[float]
    samples: int
    seed: int
    workers: int = 1
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Mapping) -> "VerificationReport":
        return cls(**d)


# --- event evaluation --------------------------------------------------------------


def _slack(t: float) -> float:
    return _EVENT_SLACK * max(1.0, abs(t))


def _count_tail(spec, p, query: TailQuery, rng: RngStream, rows: int) -> int:
    n, z = query.n, query.z
    per_chunk = max(1, _CHUNK_DRAWS // n)
    hits = 0
    done = 0
    while done < rows:
        m = min(per_chunk, rows - done)
        x = sample(spec, rng, m * n).values.reshape(m, n)
        d = query.direction
        if d == "lower_mean":
            s = x.sum(axis=1)
            hits += int(np.count_nonzero(s <= n * z + _slack(n * z)))
        elif d == "upper_mean":
            s = x.sum(axis=1)
            hits += int(np.count_nonzero(s >= n * z - _slack(n * z)))
        elif d == "cdf_point":
            hits += int(np.count_nonzero(np.all(x <= z + _slack(z), axis=1)))
        elif d == "two_sided_outer":
            hits += int(np.count_nonzero(np.all(np.abs(x) >= z - _slack(z), axis=1)))
        else:
            hits += int(np.count_nonzero(np.all(np.abs(x) <= z + _slack(z), axis=1)))
        done += m
    return hits


def _count_orthant(spec, p, query: OrthantQuery, rng: RngStream, rows: int) -> int:
    z = np.asarray(query.z)
    tol = _EVENT_SLACK * np.maximum(1.0, np.abs(z))
    if spec.family == "dcm":
        # one draw of n trials; the event looks at x_1..x_k
        draws = 1
        spec = DistributionSpec("dcm", {**spec.params, "trials": query.n})
    else:
        draws = query.n
    per_chunk = max(1, _CHUNK_DRAWS // (draws * z.size))
    hits = 0
    done = 0
    while done < rows:
        m = min(per_chunk, rows - done)
        x = sample(spec, rng, m * draws).values
        if spec.family == "dcm":
            stat = x[:, 1:]
        else:
            stat = x.reshape(m, draws, z.size).mean(axis=1)
        if query.direction == "lower_orthant":
            ok = np.all(stat <= z + tol, axis=1)
        else:
            ok = np.all(stat >= z - tol, axis=1)
        hits += int(np.count_nonzero(ok))
        done += m
    return hits


def _count_loewner(spec, p, query: LoewnerQuery, rng: RngStream, rows: int) -> int:
    dim = int(p["p"])
    if not 2.0 * p["alpha"] - dim - 1.0 > 0:
        raise DomainError("img: the mean exists only for 2*alpha - p - 1 > 0")
    target = query.rho * img_mean(p)
    per_chunk = max(1, _CHUNK_DRAWS // (dim * dim))
    hits = 0
    done = 0
    while done < rows:
        m = min(per_chunk, rows - done)
        x = sample(spec, rng, m).values
        eig = np.linalg.eigvalsh(target - x)
        hits += int(np.count_nonzero(eig[:, 0] > 0.0))
        done += m
    return hits


def _block_sizes(total: int, workers: int) -> list[int]:
    base, extra = divmod(total, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _clopper_pearson(hits: int, total: int, confidence: float) -> tuple[float, float]:
    ci = binomtest(hits, total).proportion_ci(confidence_level=confidence, method="exact")
    return float(ci.low), float(ci.high)


def estimate_tail(spec: DistributionSpec, query: Query, cfg: MonteCarloConfig) -> tuple[float, float, float]:
    """(p_hat, cp_lower, cp_upper) for the event described by ``query``."""
    p = validate_spec(spec)
    if isinstance(query, TailQuery):
        counter = _count_tail
    elif isinstance(query, OrthantQuery):
        counter = _count_orthant
    elif isinstance(query, LoewnerQuery):
        counter = _count_loewner
    else:
        raise DomainError(f"unsupported query type {type(query).__name__}")
    sizes = _block_sizes(cfg.samples, cfg.workers)

    def run(i):
        if sizes[i] == 0:
            return 0
        return counter(spec, p, query, RngStream(cfg.seed, i), sizes[i])

    if cfg.workers == 1:
        hits = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            hits = list(pool.map(run, range(cfg.workers)))
    total_hits = sum(hits)
    lo, hi = _clopper_pearson(total_hits, cfg.samples, cfg.confidence)
    p_hat = total_hits / cfg.samples
    return p_hat, min(lo, p_hat), max(hi, p_hat)


def _tightness(bound: float, p_hat: float) -> float:
    if p_hat == 0.0:
        return math.inf
    return bound / p_hat


def check_dominance(
    entry_id: str,
    spec: DistributionSpec,
    query: Query,
    cfg: MonteCarloConfig = MonteCarloConfig(),
    **options,
) -> VerificationReport:
    """Evaluate the bound and compare it with the Monte Carlo tail estimate.

    Invalid queries skip the simulation: the report has valid=False, bound 1,
    dominated vacuously true and the uninformative interval [0, 1].
    """
    result: BoundResult = evaluate(entry_id, spec, query, **options)
    opts = {k: v for k, v in options.items() if v is not None}
    if not result.valid:
        return VerificationReport(
            entry_id, spec.to_dict(), query.to_dict(), result.bound, result.log_bound, False,
            result.reason, 0.0, 0.0, 1.0, True, None, 0, cfg.seed, cfg.workers, opts,
        )
    p_hat, lo, hi = estimate_tail(spec, query, cfg)
    return VerificationReport(
        entry_id, spec.to_dict(), query.to_dict(), result.bound, result.log_bound, True,
        result.reason, p_hat, lo, hi, result.bound >= lo, _tightness(result.bound, p_hat),
        cfg.samples, cfg.seed, cfg.workers, opts,
    )


def _as_spec(family: str, params) -> DistributionSpec:
    if isinstance(params, DistributionSpec):
        return params
    return DistributionSpec(family, dict(params))


def tightness_sweep(
    entry_id: str,
    param_grid: Sequence,
    z_grid: Sequence,
    n_grid: Sequence[int],
    cfg: MonteCarloConfig = MonteCarloConfig(),
    family: Optional[str] = None,
    **options,
) -> list[VerificationReport]:
    """One report per (params, z, n) point, in grid order.

    Point i is simulated with seed cfg.seed + i, so points are independent and
    the whole sweep is reproducible.
    """
    info = entry_info(entry_id)
    fam = family or info.families[0]
    reports = []
    i = 0
    for params in param_grid:
        spec = _as_spec(fam, params)
        for z in z_grid:
            for n in n_grid:
                point_cfg = MonteCarloConfig(cfg.samples, (cfg.seed + i) & _U64, cfg.confidence, cfg.workers)
                query = make_query(entry_id, z, n)
                reports.append(check_dominance(entry_id, spec, query, point_cfg, **options))
                i += 1
    return reports


def summarize(reports: Iterable[VerificationReport]) -> dict:
    """Counts plus min/median/max tightness over the valid points."""
    reports = list(reports)
    valid = [r for r in reports if r.valid]
    ratios = sorted(r.tightness for r in valid)
    stats = {
        "points": len(reports),
        "valid": len(valid),
        "invalid": len(reports) - len(valid),
        "violations": sum(1 for r in valid if not r.dominated),
        "tightness_min": ratios[0] if ratios else None,
        "tightness_median": statistics.median(ratios) if ratios else None,
        "tightness_max": ratios[-1] if ratios else None,
    }
    return stats


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=False, separators=(", ", ": "))


def to_jsonl(reports: Iterable[VerificationReport]) -> str:
    """One JSON object per line; floats use the shortest round-trip form."""
    return "".join(_dump(r.to_dict()) + "\n" for r in reports)


def report_from_json(line: str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(line))


CSV_COLUMNS = ("entry_id", "params", "z", "n", "bound", "p_hat", "cp_lower", "dominated", "tightness")


def to_csv(reports: Iterable[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        q = r.query
        z = q.get("z", q.get("rho"))
        w.writerow([
            r.entry_id, json.dumps(r.spec["params"]), json.dumps(z), q.get("n", 1),
            repr(r.bound), repr(r.p_hat), repr(r.cp_lower), r.dominated,
            "" if r.tightness is None else repr(r.tightness),
        ])
    return buf.getvalue()


def query_of(report: VerificationReport) -> Query:
    return query_from_dict(report.query)
