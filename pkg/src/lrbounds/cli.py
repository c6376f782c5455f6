"""Command-line interface: ``lrbounds {bound,verify,sweep,catalog}``.

Scalar distribution parameters are flags named after the parameter
(``--theta 0.5``).  Vectors and matrices come from ``--input file.json``,
an object whose keys are parameter names plus ``z`` (or ``z_grid`` for
sweeps), e.g. ``{"mu": [0, 0], "sigma": [[1, 0], [0, 1]], "z": [1, 1]}``.

Exit status: 0 on success, 2 when the query violates the bound's validity
condition (the bound is then the trivial 1), 3 when verification finds a
dominance violation, 1 on any error.

JSON-lines report schema (``verify`` and ``sweep``): one object per line
with keys entry_id, spec, query, bound, log_bound, valid, reason, p_hat,
cp_lower, cp_upper, dominated, tightness, samples, seed, workers, options.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from typing import Optional, Sequence

from .engine import DEFAULT_C_BE
from .errors import LRBoundsError
from .families import FAMILIES, DistributionSpec, validate_spec
from .registry import entries, entry_info, evaluate, make_query
from .verifier import MonteCarloConfig, check_dominance, summarize, tightness_sweep, to_csv, to_jsonl

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_ERROR, EXIT_INVALID, EXIT_VIOLATION = 0, 1, 2, 3
SEED_ENV = "LRBOUNDS_SEED"

_SCALAR_PARAMS = sorted({name for fam in FAMILIES.values() for name in fam.scalar_params})


class CliError(Exception):
    """A user-input problem; the message names the offending field."""


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; status 2 is reserved for validity violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"{SEED_ENV}: expected an integer, got {raw!r}") from None


def _add_common(p: argparse.ArgumentParser, grids: bool = False) -> None:
    p.add_argument("--entry", required=True, help="catalog entry id (see `lrbounds catalog`)")
    p.add_argument("--family", help="distribution family, for entries that accept several")
    p.add_argument("--input", help="JSON file with vector/matrix parameters and z")
    group = p.add_argument_group("distribution parameters")
    for name in _SCALAR_PARAMS:
        group.add_argument(f"--{name}", dest=f"param_{name}", metavar="LIST" if grids else "X")
    if grids:
        p.add_argument("--z-grid", help="comma-separated z values (scalar entries)")
        p.add_argument("--n-grid", default="1", help="comma-separated sample counts")
    else:
        p.add_argument("--z", help="threshold (comma-separated for vector thresholds)")
        p.add_argument("--rho", help="scale factor for the Loewner entry")
        p.add_argument("--n", default="1", help="sample count")
    p.add_argument("--variant", help="bound variant, e.g. 'relaxed' for the uniform entries")
    p.add_argument("--c-be", type=float, default=None, help=f"Berry-Esseen constant (default {DEFAULT_C_BE})")
    p.add_argument("--strategy", help="mvp strategy: direct, balanced_root, mean_based, best")
    p.add_argument("--theta-direct", type=float, help="caller-chosen theta for the mvp direct strategy")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")


def _add_mc(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    p.add_argument("--confidence", type=float, default=0.9999)
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrbounds", description="Likelihood-ratio tail bounds.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("bound", help="evaluate one bound"))
    v = sub.add_parser("verify", help="check one bound against Monte Carlo")
    _add_common(v)
    _add_mc(v)
    s = sub.add_parser("sweep", help="verify a grid of points, as JSON lines")
    _add_common(s, grids=True)
    _add_mc(s)
    s.add_argument("--output", help="write JSON lines here instead of stdout")
    s.add_argument("--csv", help="also write the CSV summary to this path")
    c = sub.add_parser("catalog", help="list entry ids")
    c.add_argument("--all", action="store_true", help="include derived and CGF entries")
    c.add_argument("--format", choices=("json", "text"), default="text")
    return parser


# --- argument decoding -------------------------------------------------------------


def _number(text: str, field: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise CliError(f"--{field}: expected a number, got {text!r}") from None


def _numbers(text: str, field: str) -> list[float]:
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise CliError(f"--{field}: empty list")
    return [_number(t.strip(), field) for t in parts]


def _count(text: str, field: str) -> int:
    v = _number(text, field)
    if not v.is_integer():
        raise CliError(f"--{field}: expected an integer, got {text!r}")
    return int(v)


def _load_input(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(f"--input: cannot read {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"--input: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise CliError("--input: expected a JSON object")
    return data


def _family(args, info) -> str:
    if args.family:
        if args.family not in info.families:
            raise CliError(f"--family: entry {info.id!r} does not apply to {args.family!r}")
        return args.family
    if len(info.families) > 1:
        raise CliError(f"--family: entry {info.id!r} needs one of {', '.join(info.families)}")
    return info.families[0]


def _param_values(args, family: str, data: dict, grids: bool) -> dict[str, list]:
    fam = FAMILIES[family]
    values: dict[str, list] = {}
    for name in fam.param_names:
        if name in data:
            values[name] = [data[name]]
    for name in _SCALAR_PARAMS:
        raw = getattr(args, f"param_{name}")
        if raw is None:
            continue
        if name not in fam.param_names:
            raise CliError(f"--{name}: not a parameter of {family!r}")
        if grids:
            values[name] = _numbers(raw, name)
        else:
            values[name] = [_number(raw, name)]
    return values


def _specs(family: str, values: dict[str, list]) -> list[DistributionSpec]:
    names = sorted(values)
    out = []
    for combo in itertools.product(*(values[k] for k in names)):
        spec = DistributionSpec(family, dict(zip(names, combo)))
        try:
            validate_spec(spec)
        except LRBoundsError as exc:
            raise CliError(f"parameters: {exc}") from None
        out.append(spec)
    return out


def _z_value(args, info, data):
    if info.query_type == "loewner":
        raw = args.rho if args.rho is not None else args.z
        if raw is None:
            if "rho" in data:
                return float(data["rho"])
            raise CliError("--rho: required for the Loewner entry")
        return _number(raw, "rho")
    if args.z is not None:
        vals = _numbers(args.z, "z")
        return vals if info.query_type == "orthant" else _single(vals, "z")
    if "z" in data:
        return data["z"]
    raise CliError("--z: required")


def _single(vals, field):
    if len(vals) != 1:
        raise CliError(f"--{field}: expected one value")
    return vals[0]


def _options(args, info) -> dict:
    opts = {}
    if args.variant is not None:
        opts["variant"] = args.variant
    if args.c_be is not None:
        if info.kind != "cgf" or not info.id.startswith("refined"):
            raise CliError("--c-be: only the refined Chernoff entries take a Berry-Esseen constant")
        opts["c_be"] = args.c_be
    if args.strategy is not None:
        opts["strategy"] = args.strategy
    if args.theta_direct is not None:
        opts["theta"] = args.theta_direct
    return opts


def _mc_config(args) -> MonteCarloConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        return MonteCarloConfig(args.samples, seed, args.confidence, args.workers)
    except LRBoundsError as exc:
        raise CliError(f"monte carlo settings: {exc}") from None


# --- commands ----------------------------------------------------------------


def _emit(obj: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj) + "\n")
    elif fmt == "text":
        for k, v in obj.items():
            out.write(f"{k}: {json.dumps(v)}\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(obj)
        w.writerow(_csv_cell(v) for v in obj.values())


def _csv_cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


def _prepare(args, grids=False):
    info = entry_info(args.entry)
    data = _load_input(args.input)
    family = _family(args, info)
    specs = _specs(family, _param_values(args, family, data, grids))
    return info, data, specs


def _cmd_bound(args, out) -> int:
    info, data, specs = _prepare(args)
    spec = specs[0]
    query = make_query(info.id, _z_value(args, info, data), _count(args.n, "n"))
    result = evaluate(info.id, spec, query, **_options(args, info))
    obj = {"entry_id": info.id, "spec": spec.to_dict(), "query": query.to_dict(), **result.to_dict()}
    _emit(obj, args.format, out)
    return EXIT_OK if result.valid else EXIT_INVALID


def _cmd_verify(args, out) -> int:
    info, data, specs = _prepare(args)
    spec = specs[0]
    query = make_query(info.id, _z_value(args, info, data), _count(args.n, "n"))
    report = check_dominance(info.id, spec, query, _mc_config(args), **_options(args, info))
    if args.format == "csv":
        out.write(to_csv([report]))
    else:
        _emit(report.to_dict(), args.format, out)
    if not report.valid:
        return EXIT_INVALID
    return EXIT_OK if report.dominated else EXIT_VIOLATION


def _cmd_sweep(args, out) -> int:
    info, data, specs = _prepare(args, grids=True)
    if args.z_grid is not None:
        z_grid = _numbers(args.z_grid, "z-grid")
    elif "z_grid" in data:
        z_grid = data["z_grid"]
    else:
        raise CliError("--z-grid: required (or z_grid in --input)")
    n_grid = [_count(t, "n-grid") for t in args.n_grid.split(",") if t.strip()]
    reports = tightness_sweep(
        info.id, specs, z_grid, n_grid, _mc_config(args), family=specs[0].family, **_options(args, info)
    )
    text = to_jsonl(reports)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(to_csv(reports))
    stats = summarize(reports)
    sys.stderr.write(json.dumps({"summary": stats}) + "\n")
    return EXIT_VIOLATION if stats["violations"] else EXIT_OK


def _cmd_catalog(args, out) -> int:
    items = entries(include_derived=args.all, include_auxiliary=args.all)
    if args.format == "json":
        for e in items:
            out.write(json.dumps(e.describe()) + "\n")
    else:
        for e in items:
            out.write(f"{e.id}\t{e.direction}\t{e.validity_text}\t{e.anchor}\n")
    return EXIT_OK


_COMMANDS = {"bound": _cmd_bound, "verify": _cmd_verify, "sweep": _cmd_sweep, "catalog": _cmd_catalog}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args, out)
    except (CliError, LRBoundsError, ValueError) as exc:
        sys.stderr.write(f"lrbounds: error: {exc}\n")
    return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
