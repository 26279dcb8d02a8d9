import numpy as np
import pytest

from helpers.errors import DegreeMismatch, Infeasible, WindowTooSmall
from modules.graded_map import (
    class_of,
    compose,
    dga_differential,
    find_homotopy,
    identity,
    is_cocycle,
    linear_combination,
    random_table,
    shift,
    table,
    zero,
)

WINDOW = (-6, 6)


def test_identity_is_a_unit(q8):
    x = q8.ring.catalog["x"]
    one = identity(q8.res)
    assert compose(one, x).equal_on(x, WINDOW)
    assert compose(x, one).equal_on(x, WINDOW)


def test_generators_are_cocycles(q8, c4):
    for ctx in (q8, c4):
        for name in ("x", "y"):
            assert is_cocycle(ctx.ring.catalog[name], WINDOW)


def test_shift_is_periodicity(q8):
    s = shift(q8.res, 4, "s")
    assert is_cocycle(s, WINDOW)
    assert compose(s, shift(q8.res, -4)).equal_on(identity(q8.res), WINDOW)
    assert class_of(s).coords == (1,)


def test_differential_squares_to_zero(c3, rng):
    f = random_table(c3.res, 1, (-8, 8), rng)
    assert dga_differential(dga_differential(f)).is_zero_on((-6, 6))


def test_leibniz_rule(c3, rng):
    f = random_table(c3.res, 1, (-10, 10), rng)
    g = random_table(c3.res, 2, (-10, 10), rng)
    field = c3.field
    lhs = dga_differential(compose(f, g))
    rhs = compose(dga_differential(f), g) + field.sign(f.degree) * compose(f, dga_differential(g))
    assert lhs.equal_on(rhs, (-6, 6))


def test_class_is_linear(q8, rng):
    f = random_table(q8.res, 2, (-1, 3), rng)
    g = random_table(q8.res, 2, (-1, 3), rng)
    combined = linear_combination(q8.res, 2, [(1, f), (1, g)])
    expected = tuple(int(v) for v in q8.field.add(np.array(class_of(f).coords), np.array(class_of(g).coords)))
    assert class_of(combined).coords == expected


def test_q8_raw_classes(q8):
    c = q8.ring.catalog
    x, y = c["x"], c["y"]
    assert class_of(x @ x).coords == (0, 1)
    assert class_of(y @ y).coords == (1, 0)
    assert class_of(x @ y).coords == (1, 1)
    assert class_of(y @ x).coords == (1, 1)


def test_table_outside_window(c3):
    f = table(c3.res, 0, {0: np.zeros((1, 1, 3), dtype=np.int64)})
    with pytest.raises(WindowTooSmall):
        f.component(1)


def test_shape_checked(q8):
    with pytest.raises(DegreeMismatch):
        table(q8.res, 1, {0: np.zeros((1, 1, 8), dtype=np.int64)}).component(0)
    with pytest.raises(DegreeMismatch):
        zero(q8.res, 1) + zero(q8.res, 2)


def test_periodic_homotopy_needs_period_eight(q8):
    c = q8.ring.catalog
    x, y = c["x"], c["y"]
    target = linear_combination(q8.res, 2, [(1, x @ x), (1, y @ y), (1, x @ y)])
    with pytest.raises(Infeasible):
        find_homotopy(target, [4])
    h = find_homotopy(target, [8])
    assert dga_differential(h).equal_on(target, WINDOW)


def test_non_null_homotopic_class(c4):
    with pytest.raises(Infeasible):
        find_homotopy(c4.ring.catalog["y"], [2])
