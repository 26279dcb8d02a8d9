import numpy as np
import pytest

from helpers.errors import AlgebraMismatch, InvalidSpec, NotPPower, WrongCharacteristic
from modules.group_algebra import Q8_NAMES, Q8_WORDS, I, J, q8_word_product, quaternion_algebra, truncated_polynomial_algebra


@pytest.fixture(scope="module")
def kq8(f2):
    return quaternion_algebra(f2)


@pytest.fixture(scope="module")
def c4c4(f2):
    return truncated_polynomial_algebra(f2, (4, 4))


def test_quaternion_relations(kq8):
    i, j, k = (kq8.parse(n) for n in ("I", "J", "K"))
    minus_one = kq8.parse("E'")
    assert np.array_equal(kq8.multiply(i, j), k)
    assert np.array_equal(kq8.multiply(j, i), kq8.parse("K'"))
    assert np.array_equal(kq8.multiply(i, i), minus_one)
    assert np.array_equal(kq8.multiply(minus_one, minus_one), kq8.one())


def test_quaternion_table_from_presentation(kq8):
    table = kq8.table
    for row in table:
        assert sorted(row) == list(range(8))
    for a in range(8):
        for b in range(8):
            for c in range(8):
                assert table[table[a, b], c] == table[a, table[b, c]]
    i, j = Q8_WORDS["I"], Q8_WORDS["J"]
    i_squared = q8_word_product(i, i)
    assert q8_word_product(i_squared, i_squared) == Q8_WORDS["E"]
    assert q8_word_product(j, j) == i_squared
    j_inverse = Q8_WORDS["J'"]
    assert q8_word_product(q8_word_product(j, i), j_inverse) == Q8_WORDS["I'"]
    assert len(set(Q8_WORDS.values())) == len(Q8_NAMES) == 8


def test_quaternion_norm_and_augmentation(kq8):
    assert kq8.augmentation(kq8.norm) == 0
    assert kq8.augmentation(kq8.parse("I+J+E")) == 1
    # the norm is annihilated by the augmentation ideal
    assert not np.any(kq8.multiply(kq8.parse("I+E"), kq8.norm))


def test_quaternion_augmentation_powers(kq8):
    assert kq8.ideal_member(kq8.parse("I+E"), I(1))
    assert not kq8.ideal_member(kq8.parse("I+E"), I(2))
    assert kq8.ideal_member(kq8.norm, I(3))


def test_truncated_products(c4c4):
    z1, z2 = c4c4.generator(1), c4c4.generator(2)
    z1_cubed = c4c4.multiply(c4c4.multiply(z1, z1), z1)
    assert np.array_equal(z1_cubed, c4c4.monomial((3, 0)))
    assert not np.any(c4c4.multiply(z1_cubed, z1))
    assert np.array_equal(c4c4.multiply(c4c4.partial_norm(1), z1), c4c4.norm)
    assert not np.any(c4c4.multiply(c4c4.partial_norm(1), z2))


def test_augmentation_is_unit_coefficient(f3):
    A = truncated_polynomial_algebra(f3, (3,))
    assert A.augmentation(A.parse("z1+1")) == 1
    assert A.augmentation(A.parse("2*z1^2")) == 0


def test_ideals(c4c4):
    assert c4c4.ideal_member(c4c4.monomial((1, 1)), I(2))
    assert not c4c4.ideal_member(c4c4.monomial((1, 0)), I(2))
    assert c4c4.ideal_member(c4c4.monomial((3, 0)), J(1))
    assert not c4c4.ideal_member(c4c4.monomial((2, 1)), J(1))
    assert c4c4.ideal_member(c4c4.norm, J(2))
    assert not c4c4.ideal_member(c4c4.monomial((3, 2)), J(2))
    assert c4c4.ideal_member(c4c4.one(), J(0))


def test_ideal_spec_validation():
    with pytest.raises(InvalidSpec):
        I(0)
    with pytest.raises(InvalidSpec):
        J(-1)


def test_format_parse(c4c4, f4):
    a = c4c4.parse("z1^2*z2+z2^3+1")
    assert np.array_equal(c4c4.parse(c4c4.format(a)), a)
    A = truncated_polynomial_algebra(f4, (2, 2))
    b = A.parse("(a+1)*z1*z2+(a)*z2")
    assert A.format(b) == "(a)*z2+(a+1)*z1*z2"
    assert np.array_equal(A.parse(A.format(b)), b)
    assert A.format(A.parse("(a)*1")) == "(a)*1"


def test_construction_errors(f2, f3):
    with pytest.raises(NotPPower):
        truncated_polynomial_algebra(f2, (6,))
    with pytest.raises(NotPPower):
        truncated_polynomial_algebra(f3, (4, 3))
    with pytest.raises(WrongCharacteristic):
        quaternion_algebra(f3)


def test_wrong_length_vectors(c4c4):
    with pytest.raises(AlgebraMismatch):
        c4c4.multiply(np.zeros(3, dtype=np.int64), c4c4.one())
