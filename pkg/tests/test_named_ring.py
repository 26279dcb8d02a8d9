import pytest

from helpers.errors import DegreeMismatch, InvalidSpec
from modules.named_ring import abelian_relations, multiplication_table, q8_relations


def test_q8_basis_names(q8_ring):
    assert q8_ring.named_basis(range(0, 4)) == {
        "0": ["1"],
        "1": ["x", "y"],
        "2": ["x^2", "y^2"],
        "3": ["x^2*y"],
    }
    assert q8_ring.named_basis([4, -1]) == {"4": ["s"], "-1": ["x^2*y*s^-1"]}


def test_q8_parse_named_products(q8_ring):
    a = q8_ring.parse("x^2*y*s^-1")
    assert a == q8_ring.element(("x2y", -1))
    assert q8_ring.format(a) == "x^2*y*s^-1"
    assert q8_ring.parse("x*y") == q8_ring.parse("x^2+y^2")
    assert q8_ring.parse("s*s^-1") == q8_ring.one()


def test_q8_relations(q8_ring):
    report = q8_relations(q8_ring)
    assert report.passed, report.failures


def test_q8_relations_through_degree_six(q8_ring):
    report = q8_relations(q8_ring, 6)
    assert report.passed, report.failures
    p = q8_ring.parse
    assert q8_ring.multiply(p("y*s^-1"), p("x*s^2")) == p("x^2*s+y^2*s")
    assert q8_ring.multiply(p("x^2*y*s^-1"), p("x")).is_zero()


def test_format_parse(q8_ring, c2c2):
    a = q8_ring.parse("x+y")
    assert q8_ring.format(a) == "x+y"
    assert q8_ring.parse(q8_ring.format(a)) == a
    ring = c2c2.ring
    b = ring.parse("u1*u2+v2")
    assert ring.parse(ring.format(b)) == b
    assert ring.format(ring.zero(2)) == "0"


def test_cyclic_products(c2, c3):
    assert c2.ring.parse("x*x") == c2.ring.parse("y")
    assert c3.ring.multiply(c3.ring.parse("x"), c3.ring.parse("x")).is_zero()
    assert c3.ring.parse("y*y^-1") == c3.ring.one()
    assert c3.ring.format(c3.ring.parse("2*x*y")) == "2*x*y"


def test_abelian_basis(c2c2):
    ring = c2c2.ring
    assert ring.named_basis([1, 2, -1]) == {
        "1": ["u1", "u2"],
        "2": ["v1", "u1*u2", "v2"],
        "-1": ["phi(0,0)"],
    }
    assert ring.parse("phi(0,1)").degree == -2


def test_abelian_relations(c2c2, c3c3):
    for ctx in (c2c2, c3c3):
        report = abelian_relations(ctx.ring)
        assert report.passed, report.failures


def test_abelian_relations_exact_odd_signs(c3c3):
    ring = c3c3.ring
    report = abelian_relations(ring, 4)
    assert report.passed, report.failures
    assert ring.parse("u2*u1") == ring.neg(ring.parse("u1*u2"))
    assert ring.multiply(ring.parse("phi(0,1)"), ring.parse("u2")) == ring.neg(ring.parse("phi(0,0)"))
    assert ring.multiply(ring.parse("phi(1,0)"), ring.parse("u1")) == ring.parse("phi(0,0)")


def test_multiplication_table(c2):
    rows = multiplication_table(c2.ring, range(0, 3))
    assert ("x", "x", "y") in rows
    assert ("1", "y", "y") in rows
    assert all(c != "0" for _, _, c in rows)


def test_parse_errors(q8_ring, c2c2):
    with pytest.raises(InvalidSpec):
        q8_ring.parse("phi(0,1)")
    with pytest.raises(InvalidSpec):
        q8_ring.parse("z")
    with pytest.raises(InvalidSpec):
        q8_ring.parse("")
    with pytest.raises(InvalidSpec):
        c2c2.ring.parse("u3")
    with pytest.raises(InvalidSpec):
        c2c2.ring.parse("phi(1)")
    with pytest.raises(DegreeMismatch):
        q8_ring.add(q8_ring.parse("x"), q8_ring.parse("s"))
