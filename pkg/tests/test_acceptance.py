"""Acceptance criteria, one suite each, with the stated tolerances and runtime limits.

Each test prints a PASS/FAIL line (outside pytest's capture) and then asserts.
"""

import math

import pytest

from geodesic_spectra.suites import HURWITZ, run_suite

# (criterion, suite, runtime limit in seconds)
CRITERIA = [
    (1, "max-height", 10),
    (2, "hurwitz", 5),
    (3, "height-identity", 60),
    (4, "separation", 30),
    (5, "jarnik", 300),
    (6, "hall", 300),
    (7, "game", 120),
    (8, "periodic-distance", 60),
]


def specific_checks(name, m):
    """Re-assert the headline numbers from the metrics, independently of the suite's verdict."""
    if name == "max-height":
        assert m["max_abs_error"] < 1e-7 and m["rational_exact"]
    elif name == "hurwitz":
        assert m["count"] == 100 and m["max_c_plus"] <= HURWITZ + 1e-12
        assert not m["bound_violations"] and not m["equality_mismatches"]
    elif name == "height-identity":
        assert m["max_error_z"] < 1e-9 and m["max_error_gaussian"] < 1e-6 and m["gaussian_samples"] == 20
    elif name == "separation":
        assert m["min_ratio"] == "1"
    elif name == "jarnik":
        est = [m["estimates"][c] for c in (2, 3, 4, 5)]
        assert all(b >= a - 0.03 for a, b in zip(est, est[1:]))
        assert all(0.4 < v < 1 for v in est)
        assert all(m["prop23"][c] <= m["estimates"][c] + 0.05 for c in (2, 3, 4, 5))
        assert abs(m["full"] - 1) <= 0.02
        assert abs(m["cantor"] - math.log(2) / math.log(3)) <= 0.03
        assert abs(m["e2"] - m["e2_reference"]) <= 0.05
    elif name == "hall":
        assert m["status"] == "nonempty" and m["witnesses"] > 0 and m["witness_failures"] == 0
        dims = [m["dims"][s] for s in (8.0, 12.0, 16.0)]
        assert all(b >= a - 0.05 for a, b in zip(dims, dims[1:]))
    elif name == "game":
        assert m["interval_passed"] == m["interval_matches"] == 200
        assert m["circle_passed"] == m["circle_matches"] == 50
        assert m["negative_control_failed"]
    elif name == "periodic-distance":
        assert m["count"] == 20 and m["max_error"] < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("number, name, limit", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_acceptance(number, name, limit, capsys):
    res = run_suite(name)
    ok = res.passed and res.seconds < limit
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {name}: {res.seconds:.1f}s "
              f"(limit {limit}s) {res.metrics}")
    specific_checks(name, res.metrics)
    assert res.passed, res.metrics
    assert res.seconds < limit
