import pytest

from helpers import settings
from helpers.errors import InvalidSpec
from modules.verification import CHECKS, FULL_BOUNDS, QUICK, SUITES, SuiteBounds, run_suite


def test_registry():
    assert set(QUICK) <= set(CHECKS)
    for name in ("q8-m-table", "cyclic-gamma", "rank-two-massey", "imap-homotopies", "positive-degree-rejection"):
        assert name in CHECKS
    assert "q8-juggling" not in QUICK


def test_single_check_is_named():
    report = CHECKS["splitting"](7)
    assert report.name == "splitting"
    assert report.passed, report.failures


def test_quick_suite_passes():
    report = run_suite("quick", progress=False)
    assert [c.name for c in report.checks] == QUICK
    assert report.passed, [c for c in report.checks if not c.passed]


def test_unknown_suite():
    with pytest.raises(InvalidSpec):
        run_suite("nightly", progress=False)


def test_suite_bounds():
    _, paper = SUITES["paper"]
    assert paper == FULL_BOUNDS
    assert (paper.triple_degree, paper.cyclic_degree, paper.relation_degree) == (6, settings.WINDOW, 6)
    names, quick = SUITES["quick"]
    assert names == QUICK
    assert quick.triple_degree <= paper.triple_degree
    assert quick.cyclic_degree < paper.cyclic_degree


def test_bounds_reach_the_check():
    small = SuiteBounds(triple_degree=1, cyclic_degree=2, relation_degree=2)
    report = CHECKS["ring-relations"](0, small)
    assert report.passed, report.failures
    report = CHECKS["cyclic-gamma"](0, small)
    assert report.passed, report.failures
