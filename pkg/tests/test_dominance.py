"""Monte Carlo dominance over every registered entry (10^5 samples, 99.99% Clopper-Pearson)."""

import pytest

from dominance_grids import CONFIDENCE, MIN_POINTS, SAMPLES, all_entry_ids, dominance_reports


@pytest.mark.parametrize("entry_id", all_entry_ids())
def test_dominates_monte_carlo(entry_id):
    reports = dominance_reports(entry_id)
    assert len(reports) >= MIN_POINTS
    assert all(r.valid for r in reports)
    assert all(r.samples == SAMPLES for r in reports)
    violations = [(r.spec["params"], r.query, r.bound, r.cp_lower) for r in reports if not r.dominated]
    assert not violations, violations


def test_settings_match_the_suite_contract():
    assert SAMPLES == 100_000 and CONFIDENCE == 0.9999 and MIN_POINTS == 20
