import pytest

from helpers.errors import DegreeMismatch, NotDefined
from modules.gamma import load_context
from modules.massey import (
    GradedMatrix,
    contains_zero,
    juggling_check,
    mat_mul,
    matric_massey,
    trace,
    triple_massey,
)
from modules.verification import q8_matric_inputs


def _contains_up_to_sign(ring, result, element) -> bool:
    rep = result.representative[0][0]
    return any(
        contains_zero(ring, [[ring.sub(rep, e)]], result.indeterminacy) for e in (element, ring.neg(element))
    )


def test_q8_matric_massey(q8_ring):
    ring = q8_ring
    W, B, D, T = q8_matric_inputs(ring)
    assert mat_mul(ring, W.entries, W.entries) == [[ring.zero(2)] * 2] * 2
    result = matric_massey(ring, W, W, W, T, T)
    assert result.degree == 2
    difference = [[ring.sub(r, b) for r, b in zip(rr, bb)] for rr, bb in zip(result.representative, B.entries)]
    assert contains_zero(ring, difference, result.indeterminacy)
    assert not result.contains_zero
    assert trace(ring, mat_mul(ring, B.entries, D.entries)) == ring.parse("x^2*y")


def test_q8_matric_massey_without_given_lifts(q8_ring):
    W, _, _, _ = q8_matric_inputs(q8_ring)
    assert not matric_massey(q8_ring, W, W, W).contains_zero


def test_q8_juggling(q8_ring):
    W, _, _, _ = q8_matric_inputs(q8_ring)
    report = juggling_check(q8_ring, W, W, W, W)
    assert report.passed, report.failures
    assert report.detail == "sign 1"


def test_juggling_sign_in_odd_characteristic(c3):
    x = GradedMatrix.uniform(c3.ring, [["x"]], 1)
    report = juggling_check(c3.ring, x, x, x, x)
    assert report.passed, report.failures
    assert report.detail == "sign 1"


def test_q8_monomial_triples_contain_zero(q8_ring, q8_f2):
    p = q8_ring.parse
    assert triple_massey(q8_ring, p("x"), p("x^2"), p("x"), q8_f2).contains_zero
    assert triple_massey(q8_ring, p("y"), p("y^2"), p("y"), q8_f2).contains_zero


def test_f4_triple_is_nonzero():
    ctx = load_context("Q8", "4")
    ring = ctx.ring
    a, b, c = (ring.parse(t) for t in ("(a)*x+y", "(a+1)*x+y", "(a)*x+y"))
    assert ring.multiply(a, b).is_zero()
    assert not triple_massey(ring, a, b, c, ctx.f2()).contains_zero


def test_rank_two_triple(c2c2, c3c3):
    for ctx in (c2c2, c3c3):
        ring = ctx.ring
        a, b, c = (ring.parse(t) for t in ("v2", "phi(0,1)", "v1"))
        result = triple_massey(ring, a, b, c)
        assert result.degree == 1
        assert result.representative[0][0] in (ring.parse("u1"), ring.neg(ring.parse("u1")))
        assert not result.indeterminacy


def test_order_three_triples(c3):
    ring = c3.ring
    x = ring.parse("x")
    result = triple_massey(ring, x, x, x, c3.f2())
    assert not result.contains_zero
    assert _contains_up_to_sign(ring, result, ring.parse("y"))
    report = result.report(ring)
    assert report.contains_zero is False


def test_triple_needs_vanishing_products(q8_ring):
    x = q8_ring.parse("x")
    y = q8_ring.parse("y")
    with pytest.raises(NotDefined):
        triple_massey(q8_ring, x, y, x)


def test_matric_needs_vanishing_products(q8_ring):
    M = GradedMatrix.uniform(q8_ring, [["x", "0"], ["0", "x"]], 1)
    with pytest.raises(NotDefined):
        matric_massey(q8_ring, M, M, M)


def test_graded_matrix_degrees(q8_ring):
    with pytest.raises(DegreeMismatch):
        GradedMatrix.uniform(q8_ring, [["x", "x^2"]], 1)
