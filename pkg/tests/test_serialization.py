import json

import pytest

from helpers.serialization import (
    SCHEMA_VERSION,
    DegreeData,
    GammaVerdict,
    MasseyReport,
    MTableReport,
    ResolutionReport,
    SuiteReport,
    to_json,
)
from modules.gamma import gamma_verdict
from modules.massey import triple_massey
from modules.module_map import format_map
from modules.resolution import verify_exact
from modules.secondary import build_f2, full_m_table
from modules.verification import CHECKS

WINDOW = (-3, 3)


def reparse(report):
    data = json.loads(to_json(report))
    assert data["schema"] == SCHEMA_VERSION
    return type(report).model_validate(data)


def test_resolution_report(c2c2):
    res = c2c2.res
    report = ResolutionReport(
        group="C2xC2",
        field="2",
        window=WINDOW,
        degrees=[
            DegreeData(
                degree=n,
                rank=res.rank(n),
                labels=[res.format_label(l) for l in res.labels(n)],
                differential=format_map(c2c2.algebra, res.differential(n)),
            )
            for n in range(WINDOW[0], WINDOW[1] + 1)
        ],
        checks=[verify_exact(res, WINDOW)],
        generators=c2c2.ring.catalog.dump((-1, 1)),
    )
    assert isinstance(reparse(report), ResolutionReport)
    assert reparse(report) == report


def test_m_table_report(c3):
    ring = c3.ring
    keys = [k for n in range(0, 3) for k in ring.basis(n)]
    triples = [(a, b, c) for a in keys for b in keys for c in keys]
    report = full_m_table(build_f2(ring), triples).report("C3", "3")
    assert report.entries
    assert isinstance(reparse(report), MTableReport)
    assert reparse(report) == report


@pytest.mark.parametrize("group", ["c2", "c3"])
def test_gamma_verdict(group, request):
    ctx = request.getfixturevalue(group)
    verdict = gamma_verdict(ctx, bound=2)
    assert isinstance(reparse(verdict), GammaVerdict)
    assert reparse(verdict) == verdict


def test_massey_report(c2c2):
    ring = c2c2.ring
    a, b, c = (ring.parse(t) for t in ("v2", "phi(0,1)", "v1"))
    report = triple_massey(ring, a, b, c).report(ring, note="rank two")
    assert isinstance(reparse(report), MasseyReport)
    assert reparse(report) == report


def test_suite_report():
    report = SuiteReport(suite="single", seed=3, checks=[CHECKS["splitting"](3)])
    again = reparse(report)
    assert again == report
    assert again.passed == report.passed
