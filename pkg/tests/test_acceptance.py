"""Acceptance criteria 1-12, one summary line per criterion.

Each criterion is backed by a suite in ``horomaps.checks``; the line shows
the worst check of the suite against its own tolerance.  Run with ``-s``
to see the lines as they are produced; they are also echoed in the
terminal summary.
"""
import time

import pytest

from conftest import ACCEPTANCE_LINES

from horomaps.checks import CRITERIA, run_suite


def _worst(rows):
    failing = [r for r in rows if not r.passed]
    if failing:
        return failing[0], failing
    # closest to its tolerance among passing rows
    def margin(r):
        if r.relation == "<=":
            return r.value / r.tol if r.tol else (0.0 if r.value == 0 else float("inf"))
        if r.relation == ">=":
            return r.tol / r.value if r.value else float("inf")
        return 0.0

    return max(rows, key=margin), []


@pytest.mark.parametrize("criterion", sorted(CRITERIA), ids=[f"criterion_{i:02d}_{CRITERIA[i]}" for i in sorted(CRITERIA)])
def test_criterion(criterion):
    name = CRITERIA[criterion]
    start = time.perf_counter()
    rows = run_suite(name, seed=0)
    elapsed = time.perf_counter() - start
    worst, failing = _worst(rows)
    status = "PASS" if not failing else "FAIL"
    line = (
        f"criterion {criterion:2d} [{name}] {status}: {len(rows) - len(failing)}/{len(rows)} checks; "
        f"worst '{worst.name}' = {worst.value:.3e} {worst.relation} {worst.tol:g} ({elapsed:.1f}s)"
    )
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert elapsed < 120, f"suite took {elapsed:.1f}s"
    assert not failing, "; ".join(f"{r.name}: {r.value:.3e} {r.relation} {r.tol:g}" for r in failing)
