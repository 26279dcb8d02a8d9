import numpy as np
import pytest

from helpers.errors import DivisionByZero, InvalidSpec, NotPrime, Reducible
from modules.scalars import default_modulus, invert, is_irreducible, make_field


def test_default_modulus_for_f4():
    assert default_modulus(2, 2) == (1, 1, 1)


def test_f4_generator_satisfies_modulus(f4):
    a = f4.generator
    assert f4.format(a) == "a"
    # a^2 = a + 1
    assert int(f4.mul(a, a)) == int(f4.add(a, 1))
    assert f4.format(f4.mul(a, a)) == "a+1"


def test_parse_and_format_extension_scalars(f4):
    for c in range(4):
        assert f4.parse(f4.format(c)) == c
    assert f4.parse("a+1") == 3


def test_inverses(f3, f4):
    for field in (f3, f4):
        for c in range(1, field.q):
            assert int(field.mul(c, invert(c, field))) == 1


def test_zero_has_no_inverse(f3):
    with pytest.raises(DivisionByZero):
        f3.inv(0)


def test_sign(f2, f3):
    assert f3.sign(1) == 2
    assert f3.sign(4) == 1
    assert f2.sign(1) == 1


def test_matmul_matches_naive(f4, rng):
    A = f4.random(rng, (3, 4))
    B = f4.random(rng, (4, 2))
    expected = np.zeros((3, 2), dtype=np.int64)
    for i in range(3):
        for j in range(2):
            total = 0
            for k in range(4):
                total = int(f4.add(total, f4.mul(A[i, k], B[k, j])))
            expected[i, j] = total
    assert np.array_equal(f4.matmul(A, B), expected)


def test_sum_over_axis(f4):
    a = np.array([[1, 2], [3, 3]])
    # digit-wise: 1+3 = a, a+(a+1) = 1
    assert list(f4.sum(a, axis=0)) == [2, 1]


def test_field_construction_errors():
    with pytest.raises(NotPrime):
        make_field(4)
    with pytest.raises(Reducible):
        make_field(2, 2, (1, 0, 1))
    with pytest.raises(InvalidSpec):
        make_field(2, 2, (1, 1))


def test_irreducibility():
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((0, 1, 1), 2)
    assert is_irreducible((1, 0, 1), 3)


def test_invalid_scalar_text(f4):
    with pytest.raises(InvalidSpec):
        f4.parse("b")
