"""Acceptance criteria, one test per criterion.

Every criterion runs through its verify suite (the same code the CLI
`twinreduce verify <suite>` executes) and prints one pass/fail line; run
with `pytest -s tests/test_acceptance.py` to watch them stream.
"""

import time

import pytest

from twinreduce.verify import run_suite


def _run(criterion: int, suite: str, budget_s: float):
    t0 = time.perf_counter()
    report = run_suite(suite)
    elapsed = time.perf_counter() - t0
    status = "PASS" if report.ok else "FAIL"
    print(f"criterion {criterion} [{suite}]: {status} "
          f"({len(report.checks)} checks, {elapsed:.1f}s, budget {budget_s:.0f}s)")
    failing = [c for c in report.checks if not c.holds]
    assert not failing, [(c.name, c.claim, c.lhs, c.rhs) for c in failing]
    assert elapsed < budget_s, f"suite took {elapsed:.1f}s, budget {budget_s}s"
    return report


def test_criterion_1_gadget_formulas():
    """Degree and witnessed-bandwidth bounds of the blob gadget over the
    whole (x, q, r) grid, confirmed by exact bandwidth up to 24 vertices."""
    report = _run(1, "eq1eq2", 5.0)
    # 8 param combos, each with size, degree, ordering; 10 with exact bw
    assert len(report.checks) == 16 * 3 + 10


def test_criterion_2_productpath_soundness():
    """Grids 3x3..6x6: per-step layer orderings witness red bandwidth at
    most 4q-2, red degree at most 5q-2, and every red component injects
    into the blob template."""
    _run(2, "productpath-grids", 10.0)


def test_criterion_3_power_driver():
    """Squares of paths and of the 4x4 grid: per-step witnesses within
    (2*2+2)q-2 and certified q within the radius-2 planar closed form."""
    _run(3, "power-squares", 30.0)


def test_criterion_4_oracle_ground_truth():
    """All 143 connected graphs on at most 6 vertices (112 on exactly 6):
    zero twin-width exactly on the P4-free ones; reduced bandwidth is
    complement-invariant and hereditary on all 208 graphs up to 6."""
    _run(4, "oracle-smallgraphs", 300.0)


def test_criterion_5_pi1_tightness():
    """Stacked triangulations |X| = 4..10 hit 6|X|-9 exactly; the k-tree
    instances hit 2^k(n-k+1)-n+k exactly."""
    _run(5, "tightness", 5.0)


def test_criterion_6_pi_bounds_hold():
    """Seeded random planar instances satisfy the four surface bounds;
    seeded random graphs satisfy the colouring-number bound with exact
    col_5 and the trivial (r+1)^|A| cap."""
    _run(6, "planar-pi1", 120.0)


def test_criterion_7_matched_cliques():
    """Canonical fold of the matched-cliques instances ends at the all-red
    source, keeps red degree within twice the source degree, and maps every
    red component into the 2-blowup."""
    _run(7, "tof-sequence", 5.0)


def test_criterion_8_leaf_fold():
    """Leaf folding on the rail-of-paths trees keeps red degree at most 3
    and red pathwidth at most 2 at every step."""
    _run(8, "qn-leafmerge", 30.0)


def test_criterion_9_cross_evaluator_invariants():
    """500 seeded graphs up to 8 vertices: tw <= pw <= bw, degree at most
    2bw, col_1 = degeneracy + 1, col_s <= tw + 1."""
    _run(9, "cross-params", 120.0)
