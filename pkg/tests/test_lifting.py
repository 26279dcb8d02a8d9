import pytest

from helpers.errors import Infeasible, NotACocycle, NotJ2Map, PositiveDegree
from modules.generators import degree_one_cocycle
from modules.graded_map import compose, dga_differential, identity, is_ideal_map, rule
from modules.group_algebra import I
from modules.lifting import (
    bracket,
    imap_homotopy_exists,
    in_A,
    in_B,
    in_C,
    in_D,
    monomial_split,
    null_homotopy,
    null_homotopy_Imap,
    project_to_C,
    splitting_claims,
)
from modules.module_map import compose as compose_maps
from modules.module_map import zero_map

WINDOW = (-4, 4)


def test_bracket():
    assert bracket(1, 4) == 1
    assert bracket(2, 4) == 3
    assert bracket(-1, 4) == 1
    assert bracket(0, 5) == 4


def test_monomial_split_contains_unit(c4c4c4):
    split = monomial_split(c4c4c4.algebra, (1, 0, 2), (0, 3, 1))
    assert (0, 0, 0) in split.inner
    assert split.inner <= set(c4c4c4.algebra.basis)


def test_splitting_claims(c4c4c4, rng):
    algebra = c4c4c4.algebra
    for _ in range(10):
        alpha = tuple(int(a) for a in rng.integers(-4, 5, size=3))
        beta = tuple(int(b) for b in rng.integers(-4, 5, size=3))
        for i in range(3):
            claims = splitting_claims(algebra, alpha, beta, i)
            assert all(claims.values()), (alpha, beta, i, claims)


def test_projection_respects_decomposition(c4c4c4, rng):
    res = c4c4c4.res
    A, field = res.algebra, res.field
    k, n = 1, -1
    h = field.random(rng, (res.rank(k + 1), res.rank(k + n), A.dim))
    hC = project_to_C(res, h, k + 1, k + n)
    hD = field.sub(h, hC)
    assert in_C(res, hC, k + 1, k + n)
    assert in_D(res, hD, k + 1, k + n)
    assert in_A(res, compose_maps(A, res.differential(k + 1), hC), k, k + n)
    assert in_B(res, compose_maps(A, res.differential(k + 1), hD), k, k + n)


def test_imap_null_homotopy(c2c2c2):
    catalog = c2c2c2.ring.catalog
    f = compose(catalog.phi((1, 0, 0)), catalog.phi((0, 0, 1)))
    h = null_homotopy_Imap(f, WINDOW)
    assert h.degree == f.degree - 1
    assert is_ideal_map(h, I(), WINDOW)
    assert dga_differential(h).equal_on(f, WINDOW)


def test_positive_degree_rejected(c2c2c2):
    g = degree_one_cocycle(c2c2c2.res)
    with pytest.raises(PositiveDegree):
        null_homotopy_Imap(g)
    assert not imap_homotopy_exists(g, WINDOW)


def test_needs_j2_map(c2c2c2):
    with pytest.raises(NotJ2Map):
        null_homotopy_Imap(identity(c2c2c2.res), WINDOW)


def test_needs_cocycle(c2c2c2):
    res = c2c2c2.res
    unit = identity(res)
    only_zero = rule(
        res, 0, lambda k: unit.component(k) if k == 0 else zero_map(res.algebra, res.rank(k), res.rank(k)), "id_0"
    )
    assert not dga_differential(only_zero).is_zero_on(WINDOW)
    with pytest.raises(NotACocycle):
        null_homotopy_Imap(only_zero, WINDOW)


def test_generic_null_homotopy(c3):
    c = c3.ring.catalog
    xx = compose(c["x"], c["x"])
    h = null_homotopy(xx)
    assert dga_differential(h).equal_on(xx, (-6, 6))
    with pytest.raises(Infeasible):
        null_homotopy(c["y"])
