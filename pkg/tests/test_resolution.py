import numpy as np
import pytest

from helpers.errors import WrongKind
from modules.group_algebra import truncated_polynomial_algebra
from modules.module_map import compose, zero_map
from modules.resolution import (
    compositions,
    cyclic_resolution,
    dual_label,
    verify_exact,
    verify_minimal,
)


def test_compositions():
    assert compositions(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(compositions(3, 3)) == 10
    assert dual_label((0, 2)) == (-1, -3)


def test_q8_ranks_are_four_periodic(q8):
    assert [q8.res.rank(n) for n in range(-4, 4)] == [1, 2, 2, 1, 1, 2, 2, 1]


def test_q8_exact_and_minimal(q8):
    assert verify_exact(q8.res, (-9, 9)).passed
    assert verify_minimal(q8.res, (-9, 9)).passed


def test_cyclic_exact(c3, c4):
    for ctx in (c3, c4):
        assert verify_exact(ctx.res, (-6, 6)).passed
        assert verify_minimal(ctx.res, (-6, 6)).passed


def test_abelian_ranks(c3c3, c2c2c2):
    assert [c3c3.res.rank(n) for n in range(-3, 3)] == [3, 2, 1, 1, 2, 3]
    assert c2c2c2.res.rank(2) == 6
    assert c2c2c2.res.rank(-3) == 6
    assert (-1, -1, -1) in c2c2c2.res.labels(-1)


def test_abelian_exact(c3c3, c2c2c2):
    report = verify_exact(c3c3.res, (-5, 5))
    assert report.passed, report.failures
    assert report.detail.startswith("k-ranks")
    assert verify_exact(c2c2c2.res, (-4, 4)).passed
    assert verify_minimal(c2c2c2.res, (-4, 4)).passed


def test_splice_map_is_norm(c2c2):
    res = c2c2.res
    A = res.algebra
    assert np.array_equal(res.differential(0)[0, 0], A.norm)


def test_differentials_square_to_zero(c3c3):
    res = c3c3.res
    A = res.algebra
    for n in range(-4, 5):
        assert not np.any(compose(A, res.differential(n), res.differential(n + 1)))


def test_corrupted_complex_is_rejected(c3):
    res = c3.res
    A = res.algebra

    def broken(n: int) -> np.ndarray:
        return zero_map(A, 1, 1) if n == 2 else res.differential(n)

    report = verify_exact(res, (-3, 4), broken)
    assert not report.passed
    assert 2 in report.failures or 1 in report.failures


def test_cyclic_resolution_needs_one_factor(c2c2):
    with pytest.raises(WrongKind):
        cyclic_resolution(c2c2.algebra)


def test_cyclic_coefficients(f3):
    A = truncated_polynomial_algebra(f3, (3,))
    res = cyclic_resolution(A)
    assert np.array_equal(res.coefficient(1), A.monomial((1,)))
    assert np.array_equal(res.coefficient(0), f3.neg(A.monomial((2,))))
