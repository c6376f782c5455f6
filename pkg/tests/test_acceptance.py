"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines are printed live) or directly:
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import os
import subprocess
import sys
import time

import mpmath
import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dominance_grids import MIN_POINTS, core_entry_ids, dominance_reports  # noqa: E402
from test_multivariate import dcm_orthant_exact  # noqa: E402
from test_specfun import max_relative_error, oracle_points  # noqa: E402
from test_univariate import IMPLICIT_CASES, best_improvement, closed_form_ids  # noqa: E402

from lrbounds import DistributionSpec, TailQuery, evaluate_bound, solve_implicit_theta  # noqa: E402
from lrbounds.engine import berry_esseen_moment_term, chernoff_bound, normal_cgf, refined_chernoff_bound  # noqa: E402
from lrbounds.multivariate import dcm_orthant_bound, img_loewner_bound, mvn_orthant_bound, mvp_orthant_bound  # noqa: E402
from lrbounds.specfun import log_beta, log_gamma  # noqa: E402

mpmath.mp.dps = 40


def _ub(family, params, direction, z, n=1, **kw):
    return evaluate_bound(DistributionSpec(family, params), TailQuery(direction, z, n), **kw)


def _rel(a, b):
    return abs(a - b) / abs(b)


def criterion_1():
    start = time.perf_counter()
    problems = []
    points = 0
    for eid in core_entry_ids():
        reports = dominance_reports(eid)
        points += len(reports)
        if len(reports) < MIN_POINTS:
            problems.append(f"{eid}: {len(reports)} points")
        bad = sum(not r.dominated for r in reports)
        if bad:
            problems.append(f"{eid}: {bad} violations")
    elapsed = time.perf_counter() - start
    if elapsed > 600:
        problems.append(f"runtime {elapsed:.0f}s")
    detail = f"{len(core_entry_ids())} entries, {points} points"
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


def criterion_2():
    failing = []
    for eid in closed_form_ids():
        gain, _ = best_improvement(eid)
        if not gain < 1e-6:
            failing.append(f"{eid} ({gain:.2g})")
    detail = f"{len(closed_form_ids())} closed-form entries"
    if failing:
        detail += "; minimisation improves " + ", ".join(failing)
    return not failing, detail


def criterion_3():
    checks = {}
    for dof in (1.0, 7.0, 30.0):
        for d in ("two_sided_outer", "two_sided_inner"):
            checks[f"t {d} dof={dof}"] = _ub("t", {"dof": dof}, d, 1.0).bound
    for d in ("upper_mean", "lower_mean"):
        checks[f"f {d}"] = _ub("f", {"m": 3.0, "dof": 5.0}, d, 1.0).bound
    for th, a in ((1.5, 1.0), (5.0, 1.0)):
        rho = (1 - 1 / th) * math.exp(1 / th)
        checks[f"pareto theta={th}"] = _ub("pareto", {"theta": th, "a": a}, "lower_mean", rho * th * a / (th - 1), 2).bound
    checks["mvn z=mu"] = mvn_orthant_bound([1.0, -2.0], [[2.0, 0.3], [0.3, 1.0]], 4, [1.0, -2.0]).bound
    checks["dcm mean point"] = dcm_orthant_bound([2.0, 2.0], 4, [2.0]).bound
    geeta = _ub("geeta", {"theta": 0.3, "beta": 2.0}, "lower_mean", 1.0, 5).bound
    bad = [k for k, v in checks.items() if not abs(v - 1.0) <= 1e-12]
    if not abs(geeta - 0.7 ** 5) <= 1e-12:
        bad.append("geeta")
    return not bad, f"{len(checks) + 1} identities" + (f"; off: {', '.join(bad)}" if bad else "")


def criterion_4():
    results = {}
    results["normal"] = _rel(_ub("normal", {"mu": 0.0, "sigma": 1.0}, "lower_mean", -0.5, 4).bound,
                             float(mpmath.mpf("0.5") * mpmath.exp(mpmath.mpf("-0.5")))) <= 1e-9
    results["lognormal"] = _rel(_ub("lognormal", {"mu": 0.0, "sigma": 1.0}, "lower_mean", math.exp(-1), 2).bound,
                                float(mpmath.exp(-1))) <= 1e-9
    results["uniform relaxed"] = _rel(_ub("uniform", {}, "upper_mean", 0.7, 10, variant="relaxed").bound,
                                      float(mpmath.exp(-2.4))) <= 1e-9
    borel = _ub("borel", {"theta": 0.5}, "lower_mean", 1.2).bound
    th, z = mpmath.mpf("0.5"), mpmath.mpf("1.2")
    v = (z - 1) / z
    oracle = float((v / th) * mpmath.exp((mpmath.log(th) - th - mpmath.log(v) + v) * z))
    results["borel oracle"] = _rel(borel, oracle) <= 1e-9
    results["borel literal 0.8350539"] = abs(borel - 0.8350539) <= 1e-6
    results["img"] = _rel(img_loewner_bound(2, 5.0, 0.5).bound, float(mpmath.mpf(2) ** 10 * mpmath.exp(-7))) <= 1e-9
    results["mvp mean_based"] = abs(mvp_orthant_bound(2.0, [1.0], [1.5], 1, "mean_based").bound - 1.0) <= 1e-15
    refined = refined_chernoff_bound(normal_cgf(0.0, 1.0), 0.2, 100).bound
    ref = (mpmath.mpf("0.5") + mpmath.mpf("0.4748") * mpmath.mpf(3) ** mpmath.mpf("0.75") / 10) * mpmath.exp(-2)
    results["refined chernoff"] = _rel(refined, float(ref)) <= 1e-9
    bad = [k for k, ok in results.items() if not ok]
    detail = f"{len(results)} values"
    if bad:
        detail += f"; mismatched: {', '.join(bad)} (got borel {borel!r})"
    return not bad, detail


def criterion_5():
    worst = 0.0
    for mu, sigma in ((0.0, 1.0), (1.5, 0.7)):
        cgf = normal_cgf(mu, sigma)
        for z in np.linspace(mu - 3 * sigma, mu + 3 * sigma, 100):
            tau = chernoff_bound(cgf, float(z), 1).theta_star
            worst = max(worst, abs(berry_esseen_moment_term(cgf, float(z), tau) - 3.0))
    cgf = normal_cgf(0.0, 1.0)
    clamps = all(
        refined_chernoff_bound(cgf, 0.3, n).log_bound
        == pytest.approx(chernoff_bound(cgf, 0.3, n).log_bound, abs=1e-15)
        for n in (1, 2, 3, 4)
    )
    ok = worst <= 1e-9 and clamps
    return ok, f"max |T - 3| = {worst:.2g} over 200 z; clamp at 1/2 for n <= 4: {clamps}"


def criterion_6():
    checked = 0
    bad = []
    for alphas in ([2.0, 2.0], [1.0, 3.0], [0.5, 0.5], [3.0, 1.0], [5.0, 2.0]):
        for n in (4, 10, 25):
            cap = n * alphas[1] / sum(alphas)
            for zi in range(1, n):
                if zi > cap:
                    continue
                r = dcm_orthant_bound(alphas, n, [float(zi)])
                exact = dcm_orthant_exact(alphas, n, [zi])
                checked += 1
                if not mpmath.mpf(r.bound) >= exact * (1 - 1e-12):
                    bad.append((alphas, n, zi))
    uni = 0
    for direction, lo, hi in (("upper_mean", 0.5, 1.0), ("lower_mean", 0.0, 0.5)):
        for z in np.linspace(lo, hi, 52)[1:-1]:
            tight = _ub("uniform", {}, direction, float(z), 10)
            relaxed = _ub("uniform", {}, direction, float(z), 10, variant="relaxed")
            uni += 1
            if not tight.log_bound <= relaxed.log_bound + 1e-15:
                bad.append(("uniform", direction, float(z)))
    return not bad, f"dcm {checked} exact tails, uniform {uni} z values" + (f"; failures {bad[:3]}" if bad else "")


def criterion_7():
    worst = 0.0
    count = 0
    for eid, cases in IMPLICIT_CASES.items():
        for family, params, eq, zs in cases:
            spec = DistributionSpec(family, params)
            for z in zs:
                t = solve_implicit_theta(eid, spec, float(z))
                worst = max(worst, abs(eq(params, t) - z) / max(1.0, abs(z)))
                count += 1
    return worst <= 1e-12, f"{len(IMPLICIT_CASES)} entries, {count} solves, worst residual {worst:.2g}"


def criterion_8():
    argv = [sys.executable, "-m", "lrbounds.cli", "sweep", "--entry", "normal_lower", "--mu", "0,1",
            "--sigma", "1", "--z-grid=-1,-0.5,0", "--n-grid", "1,4", "--samples", "20000",
            "--seed", "11", "--workers", "3"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    lines = a.stdout.count(b"\n")
    ok = a.returncode == b.returncode == 0 and a.stdout == b.stdout and lines == 12
    return ok, f"{lines} report lines, identical={a.stdout == b.stdout}"


def criterion_9():
    worst = max_relative_error(oracle_points())
    rng = np.random.default_rng(5)
    xs = rng.uniform(1e-3, 1e4, 2000)
    rec = max(abs(log_gamma(x + 1) - log_gamma(x) - math.log(x)) / max(1.0, abs(log_gamma(x + 1))) for x in xs)
    pairs = rng.uniform(1e-3, 1e3, (2000, 2))
    sym = all(log_beta(a, b) == log_beta(b, a) for a, b in pairs)
    ok = worst <= 1e-13 and rec <= 1e-12 and sym
    return ok, f"10^4-point worst relative error {worst:.2g}, recurrence {rec:.2g}, beta symmetry exact: {sym}"


CRITERIA = [
    (1, "dominance suite", criterion_1),
    (2, "theta-star optimality", criterion_2),
    (3, "boundary identities", criterion_3),
    (4, "derived values", criterion_4),
    (5, "Berry-Esseen moment identity", criterion_5),
    (6, "exact-oracle dominance", criterion_6),
    (7, "implicit-equation residuals", criterion_7),
    (8, "sweep determinism", criterion_8),
    (9, "special-function accuracy", criterion_9),
]


def _line(number, title, ok, detail):
    return f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {title}: {detail}"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number, title, check in CRITERIA:
        ok, detail = check()
        failures += not ok
        print(_line(number, title, ok, detail), flush=True)
    sys.exit(1 if failures else 0)
