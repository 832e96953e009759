import math

import numpy as np
import pytest

from horomaps.checks import CRITERIA, SUITES, Check, battery, run_suite


def test_check_relations():
    assert Check("s", "a", 1.0, 2.0).passed
    assert not Check("s", "a", 3.0, 2.0).passed
    assert Check("s", "a", 3.0, 2.0, ">=").passed
    assert Check("s", "a", 0.0, 0.0, "==").passed
    assert not Check("s", "a", math.nan, 1.0).passed
    assert Check("s", "a", 1.0, 2.0).row()["passed"] is True


def test_criteria_cover_all_suites():
    assert list(CRITERIA.values()) == list(SUITES)
    assert sorted(CRITERIA) == list(range(1, 13))


def test_battery_is_reproducible():
    a, b = battery(3), battery(3)
    assert len(a) == 10
    assert all(f == g for f, g in zip(a, b))
    assert {f.model.series.kind for f in a} == {"Principal", "Complementary", "Discrete"}


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
