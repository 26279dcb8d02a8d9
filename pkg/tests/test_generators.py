import pytest

from helpers.errors import DegreeViolation, NegativeDegree, SameFactor, WrongKind
from modules.generators import (
    abelian_generators,
    alphas_up_to,
    degree_one_cocycle,
    degree_words,
    phi,
    phi_commutator_homotopy,
    psi,
    q8_conjugation_identities,
)
from modules.graded_map import compose, dga_differential, is_cocycle, is_ideal_map, random_table, scale
from modules.group_algebra import J

WINDOW = (-8, 8)
PRODUCT_WINDOW = (-4, 4)


def test_q8_catalog(q8):
    catalog = q8.ring.catalog
    assert {"x", "y", "p", "q", "r", "s", "s^-1"} <= set(catalog.names)
    report = catalog.check(WINDOW)
    assert report.passed, report.failures


def test_q8_conjugation(q8):
    report = q8_conjugation_identities(q8.ring.catalog, WINDOW)
    assert report.passed, report.failures


def test_cyclic_catalogs(c2, c3, c4):
    assert "q" not in c2.ring.catalog
    assert "q" in c3.ring.catalog
    for ctx in (c2, c3, c4):
        assert ctx.ring.catalog.check(WINDOW).passed


def test_c2_x_squared_is_y(c2):
    c = c2.ring.catalog
    assert compose(c["x"], c["x"]).equal_on(c["y"], WINDOW)


def test_abelian_catalog(c2c2c2, c3c3):
    for ctx in (c2c2c2, c3c3):
        report = ctx.ring.catalog.check(PRODUCT_WINDOW)
        assert report.passed, report.failures
    catalog = c3c3.ring.catalog
    assert catalog.phi((0, 1)).degree == -2
    assert catalog.phi_name((0, 1)) == "phi(0,1)"
    assert catalog.y_inverse(2).degree == -2


def test_v_inverse(c2c2, c3c3):
    for ctx in (c2c2, c3c3):
        catalog = ctx.ring.catalog
        ring = ctx.ring
        for i in (1, 2):
            w = catalog.v_inverse(i)
            assert f"v{i}^-1" in catalog
            assert w.degree == -2
            unit = tuple(int(l == i - 1) for l in range(2))
            assert w.equal_on(catalog.phi(unit), PRODUCT_WINDOW)
            assert ring.class_of(compose(catalog.v(i), w)).is_zero()
            assert ring.class_of(compose(w, catalog.v(i))).is_zero()


def test_phi_is_multiplicative(c3c3, rng):
    res = c3c3.res
    f = random_table(res.factors[0], 1, (-14, 14), rng)
    g = random_table(res.factors[0], 2, (-14, 14), rng)
    assert phi(res, compose(f, g), 0).equal_on(compose(phi(res, f, 0), phi(res, g, 0)), PRODUCT_WINDOW)


def test_phi_commutes_with_differential(c3c3, rng):
    res = c3c3.res
    f = random_table(res.factors[1], 1, (-14, 14), rng)
    assert phi(res, dga_differential(f), 1).equal_on(dga_differential(phi(res, f, 1)), PRODUCT_WINDOW)


def test_psi_differential(c3c3, rng):
    res = c3c3.res
    field = c3c3.field
    f1 = random_table(res.factors[0], -2, (-14, 14), rng)
    f2 = random_table(res.factors[1], -1, (-14, 14), rng)
    lhs = dga_differential(psi(res, [f1, f2]))
    rhs = psi(res, [dga_differential(f1), f2]) + scale(psi(res, [f1, dga_differential(f2)]), field.sign(f1.degree))
    assert lhs.equal_on(rhs, PRODUCT_WINDOW)


def test_commutator_homotopy(c2c2c2):
    res = c2c2c2.res
    catalog = c2c2c2.ring.catalog
    x1 = catalog.factor_catalogs[0]["x"]
    y2 = catalog.factor_catalogs[1]["y"]
    h = phi_commutator_homotopy(res, x1, 0, y2, 1)
    target = compose(phi(res, x1, 0), phi(res, y2, 1)) - compose(phi(res, y2, 1), phi(res, x1, 0))
    assert dga_differential(h).equal_on(target, PRODUCT_WINDOW)
    assert is_ideal_map(h, J(1), PRODUCT_WINDOW)
    assert dga_differential(catalog.commutator_homotopy("y", 2, "x", 1)).equal_on(
        compose(catalog.v(2), catalog.u(1)) - compose(catalog.u(1), catalog.v(2)), PRODUCT_WINDOW
    )


def test_argument_errors(c2c2, q8):
    res = c2c2.res
    catalog = c2c2.ring.catalog
    x1 = catalog.factor_catalogs[0]["x"]
    with pytest.raises(NegativeDegree):
        phi(res, catalog.factor_catalogs[0]["y^-1"], 0)
    with pytest.raises(SameFactor):
        phi_commutator_homotopy(res, x1, 0, x1, 0)
    with pytest.raises(DegreeViolation):
        psi(res, [catalog.factor_catalogs[0]["y^-1"]])
    with pytest.raises(DegreeViolation):
        psi(res, [x1, x1])
    with pytest.raises(WrongKind):
        abelian_generators(q8.res)


def test_degree_one_cocycle(c2c2c2):
    g = degree_one_cocycle(c2c2c2.res)
    assert g.degree == 1
    assert is_cocycle(g, PRODUCT_WINDOW)


def test_index_helpers():
    assert alphas_up_to(2, 1) == [(0, 0), (1, 0), (0, 1)]
    assert ((1, 0), (0, 1)) in degree_words(2, 3)
    assert len(degree_words(2, 2)) == 3
