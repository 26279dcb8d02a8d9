import pytest

from modules.secondary import (
    Q8_CORE_KEYS,
    build_f1,
    build_f2,
    full_m_table,
    hochschild_cocycle_check,
    q8_domain,
    q8_h_class_table,
    q8_obstruction,
    secondary_m,
)


@pytest.fixture(scope="module")
def q8_table(q8_f2):
    return full_m_table(q8_f2)


def test_q8_domain_order():
    domain = q8_domain()
    assert len(domain) == 12 * 6 * 6
    assert domain[0] == (("1", 0), ("1", 0), ("1", 0))
    assert domain[-1] == (("x2y", 1), ("x2y", 0), ("x2y", 0))


def test_f1_selection(q8_ring, c3):
    assert build_f1(q8_ring).check(range(-2, 5)).passed
    assert build_f1(c3.ring).check(range(-3, 4)).passed


def test_q8_f2_selection(q8_f2):
    pairs = [(kb, kc) for kb in Q8_CORE_KEYS for kc in Q8_CORE_KEYS[:3]]
    report = q8_f2.check(pairs)
    assert report.passed, report.failures


def test_q8_m_entries(q8_ring, q8_table):
    p = q8_ring.parse
    assert q8_table.of(p("x"), p("y"), p("x")) == p("x^2")
    assert q8_table.of(p("y"), p("x"), p("y")) == p("y^2")
    assert q8_table.of(p("s"), p("x"), p("y")) == p("x*s+y*s")
    assert q8_table.of(p("x*s"), p("x"), p("y")) == p("y^2*s")
    assert q8_table.of(p("x"), p("x"), p("x")).is_zero()
    assert q8_table.of(p("1"), p("x"), p("y")).is_zero()


def test_q8_m_extends_periodically(q8_ring, q8_table):
    p = q8_ring.parse
    assert q8_table.of(p("s^2"), p("x"), p("y")).is_zero()
    assert q8_table.of(p("s^3"), p("x"), p("y")) == p("x*s^3+y*s^3")
    assert q8_table.of(p("x*s^-2"), p("y"), p("x")) == p("x^2*s^-2")


def test_q8_m_matches_direct_evaluation(q8_ring, q8_f2):
    p = q8_ring.parse
    assert secondary_m(q8_f2, p("x"), p("y"), p("x")) == p("x^2")


def test_q8_report(q8_table):
    report = q8_table.report("Q8", "2")
    assert len(report.entries) == len(q8_table.nonzero())
    assert report.zero_count + len(report.entries) == 12 * 6 * 6
    assert report.entries[0].triple == ("x", "y", "x")


def test_q8_h_table(q8_ring, q8_f2):
    table = q8_h_class_table(q8_f2)
    p = q8_ring.parse
    assert table[("x", "y")] == p("x+y")
    assert table[("x2", "x")] == p("x^2")
    assert table[("x", "x")].is_zero()


def test_q8_m_is_not_a_coboundary(q8_table):
    obstruction = q8_obstruction(q8_table)
    assert not obstruction.consistent
    assert obstruction.required_rows_present
    assert obstruction.certificate


def test_q8_hochschild_cocycle(q8_table):
    report = hochschild_cocycle_check(q8_table, Q8_CORE_KEYS[:3])
    assert report.passed, report.failures


def test_cyclic_tables(c2, c3):
    assert full_m_table(build_f2(c2.ring), bound_triples(c2.ring)).is_zero()
    ring = c3.ring
    x = ring.parse("x")
    table = full_m_table(build_f2(ring), bound_triples(ring))
    assert not table.of(x, x, x).is_zero()


def bound_triples(ring):
    keys = [k for n in range(0, 3) for k in ring.basis(n)]
    return [(a, b, c) for a in keys for b in keys for c in keys]
