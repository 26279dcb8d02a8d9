"""The reproduction suite behind ``verify``.

Every check is registered under a name, takes the replay seed and the degree
bounds of its suite, and returns a CheckReport. ``run_suite`` evaluates a suite
on a thread pool and keeps the registration order in the result.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from functools import wraps
from itertools import product
from typing import Callable, Iterable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from helpers import settings
from helpers.errors import Infeasible, InvalidSpec, PositiveDegree, TateError
from helpers.serialization import CheckReport, SuiteReport
from modules.gamma import GroupContext, gamma_verdict, load_context
from modules.generators import alphas_up_to, degree_one_cocycle, phi, phi_factor, psi, q8_conjugation_identities
from modules.graded_map import (
    class_of,
    compose,
    dga_differential,
    find_homotopy,
    is_ideal_map,
    linear_combination,
    random_table,
    scale,
)
from modules.group_algebra import I, J
from modules.lifting import (
    imap_homotopy_exists,
    in_A,
    in_B,
    monomial_split,
    null_homotopy_Imap,
    project_to_C,
    splitting_claims,
)
from modules.massey import GradedMatrix, contains_zero, juggling_check, mat_mul, matric_massey, trace, triple_massey
from modules.module_map import compose as compose_maps
from modules.named_ring import abelian_relations, q8_relations
from modules.resolution import verify_exact, verify_minimal
from modules.secondary import (
    build_f1,
    full_m_table,
    q8_class_identities,
    q8_h_class_table,
    q8_left_class_table,
    q8_obstruction,
    q8_word,
)

logger = logging.getLogger(__name__)


class SuiteBounds(BaseModel):
    """Degree bounds a suite certifies up to."""

    model_config = ConfigDict(frozen=True)

    triple_degree: int
    cyclic_degree: int
    relation_degree: int


# the full reproduction bounds, and the small ones of the smoke suite
FULL_BOUNDS = SuiteBounds(triple_degree=6, cyclic_degree=settings.WINDOW, relation_degree=6)
QUICK_BOUNDS = SuiteBounds(triple_degree=settings.TRIPLE_DEGREE, cyclic_degree=4, relation_degree=3)

Check = Callable[[int, SuiteBounds], CheckReport]

CHECKS: dict[str, Check] = {}
QUICK: list[str] = []

SAMPLE_GROUPS = [
    ("Q8", "2"),
    ("C2", "2"),
    ("C3", "3"),
    ("C4", "2"),
    ("C5", "5"),
    ("C9", "3"),
    ("C2xC2", "2"),
    ("C4xC2", "2"),
    ("C3xC3", "3"),
    ("C3xC9", "3"),
    ("C2xC2xC2", "2"),
    ("C2xC4xC4", "2"),
    ("C4xC4xC4", "2"),
    ("C3xC3xC3", "3"),
    ("C5xC5xC5", "5"),
    ("C2xC2xC2xC2", "2"),
]

# windows for checks over product resolutions, whose ranks grow with the degree
PRODUCT_WINDOW = (-4, 4)
FACTOR_WINDOW = (-14, 14)

# core and s-shifted Q8 basis elements by short name
Q8_KEYS = {
    "1": ("1", 0), "x": ("x", 0), "y": ("y", 0), "x2": ("x2", 0), "y2": ("y2", 0), "x2y": ("x2y", 0),
    "s": ("1", 1), "xs": ("x", 1), "ys": ("y", 1), "x2s": ("x2", 1), "y2s": ("y2", 1), "x2ys": ("x2y", 1),
}

# every nonzero value of m on the Q8 fundamental domain over F2
Q8_M_TABLE = {
    ("x", "y", "x"): "x^2",
    ("y", "x", "y"): "y^2",
    ("s", "x", "y"): "x*s+y*s",
    ("s", "y", "x"): "x*s+y*s",
    ("s", "x", "x2"): "x^2*s",
    ("s", "x2", "x"): "x^2*s",
    ("s", "x", "y2"): "x^2*s+y^2*s",
    ("s", "y2", "x"): "x^2*s+y^2*s",
    ("s", "y", "y2"): "y^2*s",
    ("s", "y2", "y"): "y^2*s",
    ("s", "x", "x2y"): "x^2*y*s",
    ("s", "x2y", "x"): "x^2*y*s",
    ("xs", "y", "x"): "x^2*s+y^2*s",
    ("ys", "x", "y"): "x^2*s+y^2*s",
    ("xs", "x", "y"): "y^2*s",
    ("ys", "y", "x"): "x^2*s",
    ("x2s", "x", "y"): "x^2*y*s",
    ("y2s", "x", "y"): "x^2*y*s",
    ("x2s", "y", "x"): "x^2*y*s",
    ("y2s", "y", "x"): "x^2*y*s",
    ("ys", "x", "x2"): "x^2*y*s",
    ("ys", "x2", "x"): "x^2*y*s",
    ("xs", "x", "y2"): "x^2*y*s",
    ("ys", "x", "y2"): "x^2*y*s",
    ("xs", "y2", "x"): "x^2*y*s",
    ("ys", "y2", "x"): "x^2*y*s",
    ("xs", "y", "y2"): "x^2*y*s",
    ("xs", "y2", "y"): "x^2*y*s",
}

# 𝒞(s̄f2(b,c)s̄⁻¹ - f2(b,c)) on the core basis, nonzero entries
Q8_H_TABLE = {
    ("x", "y"): "x+y",
    ("x", "x2"): "x^2",
    ("x", "y2"): "x^2+y^2",
    ("x", "x2y"): "x^2*y",
    ("y", "x"): "x+y",
    ("y", "y2"): "y^2",
    ("x2", "x"): "x^2",
    ("y2", "x"): "x^2+y^2",
    ("y2", "y"): "y^2",
    ("x2y", "x"): "x^2*y",
}

Q8_LEFT_TABLES = {"x": {("y", "x"): "x^2"}, "y": {("x", "y"): "y^2"}}

Q8_MONOMIALS = ["1", "x", "y", "x+y", "x^2", "y^2", "x^2+y^2", "x^2*y"]


def check(name: str, quick: bool = False):
    """Register a check under ``name``; the report carries that name."""

    def register(fn: Check) -> Check:
        @wraps(fn)
        def run(seed: int = settings.SEED, bounds: SuiteBounds = FULL_BOUNDS) -> CheckReport:
            return fn(seed, bounds).model_copy(update={"name": name})

        CHECKS[name] = run
        if quick:
            QUICK.append(name)
        return run

    return register


def _report(failures: list, detail: str = "") -> CheckReport:
    return CheckReport(name="", passed=not failures, failures=failures, detail=detail)


def _merge(reports: Iterable[tuple[str, CheckReport]]) -> CheckReport:
    failures = []
    for label, report in reports:
        failures.extend(f"{label}: {f}" for f in (report.failures or ["failed"]) if not report.passed)
    return _report(failures)


def _ctx(group: str, field: str = "2") -> GroupContext:
    return load_context(group, field)


def _window() -> tuple[int, int]:
    return -settings.WINDOW, settings.WINDOW


# Q8 -------------------------------------------------------------------------------------


@check("q8-m-table", quick=True)
def check_q8_m_table(seed: int, bounds: SuiteBounds) -> CheckReport:
    ctx = _ctx("Q8")
    ring = ctx.ring
    table = full_m_table(ctx.f2())
    expected = {tuple(Q8_KEYS[n] for n in t): ring.parse(v) for t, v in Q8_M_TABLE.items()}
    failures = [f"m({','.join(table.triple_name(t))}) missing" for t in expected if t not in table.entries]
    for triple, value in table.entries.items():
        want = expected.get(triple, ring.zero(value.degree))
        if value != want:
            failures.append(f"m({','.join(table.triple_name(triple))}) = {ring.format(value)}, expected {ring.format(want)}")
    return _report(failures, f"{len(table.nonzero())} nonzero of {len(table.entries)} triples")


@check("q8-intermediate-tables", quick=True)
def check_q8_intermediate_tables(seed: int, bounds: SuiteBounds) -> CheckReport:
    ctx = _ctx("Q8")
    ring = ctx.ring
    f2 = ctx.f2()
    tables = {"h": (q8_h_class_table(f2), Q8_H_TABLE)}
    for letter, values in Q8_LEFT_TABLES.items():
        tables[f"{letter}f2"] = (q8_left_class_table(f2, letter), values)
    failures = []
    for label, (computed, nonzero) in tables.items():
        for (b, c), value in computed.items():
            want = ring.parse(nonzero[(b, c)]) if (b, c) in nonzero else ring.zero(value.degree)
            if value != want:
                failures.append(f"C({label})({b},{c}) = {ring.format(value)}, expected {ring.format(want)}")
    return _report(failures)


@check("q8-not-coboundary", quick=True)
def check_q8_not_coboundary(seed: int, bounds: SuiteBounds) -> CheckReport:
    ctx = _ctx("Q8")
    obstruction = q8_obstruction(full_m_table(ctx.f2()))
    failures = []
    if obstruction.consistent:
        failures.append(f"m = δg is solvable: {obstruction.g}")
    if not obstruction.required_rows_present:
        failures.append("required rows missing")
    return _report(failures, f"{obstruction.rows} rows, certificate of {len(obstruction.certificate)} terms")


def q8_matric_inputs(ring):
    W = GradedMatrix.uniform(ring, [["y", "x+y"], ["x", "y"]], 1)
    B = GradedMatrix.uniform(ring, [["x^2+y^2", "0"], ["x^2+y^2", "x^2+y^2"]], 2)
    D = GradedMatrix.uniform(ring, [["x", "y"], ["x+y", "x"]], 1)
    c = ring.catalog
    pq = c["p"] + c["q"]
    T = [[pq, c["p"]], [c["p"], c["q"]]]
    return W, B, D, T


@check("q8-matric-massey", quick=True)
def check_q8_matric_massey(seed: int, bounds: SuiteBounds) -> CheckReport:
    ring = _ctx("Q8").ring
    W, B, D, T = q8_matric_inputs(ring)
    result = matric_massey(ring, W, W, W, T, T)
    failures = []
    difference = [[ring.sub(r, b) for r, b in zip(rr, bb)] for rr, bb in zip(result.representative, B.entries)]
    if not contains_zero(ring, difference, result.indeterminacy):
        failures.append(f"representative {[[ring.format(e) for e in row] for row in result.representative]} is not B")
    if result.contains_zero:
        failures.append("contains 0")
    tr = trace(ring, mat_mul(ring, B.entries, D.entries))
    if tr != ring.parse("x^2*y"):
        failures.append(f"tr(BD) = {ring.format(tr)}")
    return _report(failures, f"indeterminacy {len(result.indeterminacy)}")


@check("q8-juggling")
def check_q8_juggling(seed: int, bounds: SuiteBounds) -> CheckReport:
    ring = _ctx("Q8").ring
    W, _, _, _ = q8_matric_inputs(ring)
    return juggling_check(ring, W, W, W, W)


@check("q8-massey-monomials")
def check_q8_massey_monomials(seed: int, bounds: SuiteBounds) -> CheckReport:
    ctx = _ctx("Q8")
    ring = ctx.ring
    f2 = ctx.f2()
    elements = [(text, ring.parse(text)) for text in Q8_MONOMIALS]
    failures, defined = [], 0
    for (ta, a), (tb, b), (tc, c) in product(elements, repeat=3):
        if not ring.multiply(a, b).is_zero() or not ring.multiply(b, c).is_zero():
            continue
        defined += 1
        if not triple_massey(ring, a, b, c, f2).contains_zero:
            failures.append(f"⟨{ta}, {tb}, {tc}⟩")
    return _report(failures, f"{defined} defined triples")


@check("f4-massey")
def check_f4_massey(seed: int, bounds: SuiteBounds) -> CheckReport:
    ctx = _ctx("Q8", "4")
    ring = ctx.ring
    a, b, c = (ring.parse(t) for t in ("(a)*x+y", "(a+1)*x+y", "(a)*x+y"))
    result = triple_massey(ring, a, b, c, ctx.f2())
    return _report(["contains 0"] if result.contains_zero else [], ring.format(result.representative[0][0]))


@check("q8-class-identities")
def check_q8_class_identities(seed: int, bounds: SuiteBounds) -> CheckReport:
    ring = _ctx("Q8").ring
    c = ring.catalog
    x, y = c["x"], c["y"]
    failures = []
    raw = {"xx": (x @ x, (0, 1)), "yy": (y @ y, (1, 0)), "xy": (x @ y, (1, 1)), "yx": (y @ x, (1, 1))}
    for label, (f, coords) in raw.items():
        if class_of(f).coords != coords:
            failures.append(f"C({label}) = {class_of(f).coords}")
    for n in (4, 5):
        for word in product("xy", repeat=n):
            if not ring.class_of(q8_word(c, "".join(word))).is_zero():
                failures.append(f"C({''.join(word)}) != 0")
    report = q8_class_identities(ring)
    failures.extend(report.failures)
    return _report(failures)


@check("q8-periodic-homotopy", quick=True)
def check_q8_periodic_homotopy(seed: int, bounds: SuiteBounds) -> CheckReport:
    ctx = _ctx("Q8")
    res = ctx.res
    c = ctx.ring.catalog
    x, y = c["x"], c["y"]
    targets = {
        "x2+y2+xy": linear_combination(res, 2, [(1, x @ x), (1, y @ y), (1, x @ y)]),
        "x3": x @ x @ x,
    }
    failures = []
    for label, target in targets.items():
        try:
            find_homotopy(target, [4])
            failures.append(f"{label}: 4-periodic homotopy found")
        except Infeasible:
            pass
        h = find_homotopy(target, [8])
        if not dga_differential(h).equal_on(target, _window()):
            failures.append(f"{label}: 8-periodic homotopy has dh != target")
    return _report(failures)


# Cyclic and abelian verdicts --------------------------------------------------------------


def _contains(ring, result, element) -> bool:
    """Whether ±element lies in the Massey coset."""
    rep = result.representative[0][0]
    return any(
        contains_zero(ring, [[ring.sub(rep, e)]], result.indeterminacy) for e in (element, ring.neg(element))
    )


@check("cyclic-gamma", quick=True)
def check_cyclic_gamma(seed: int, bounds: SuiteBounds) -> CheckReport:
    failures = []
    for group, field in (("C2", "2"), ("C4", "2"), ("C8", "2"), ("C9", "3"), ("C27", "3"), ("C5", "5")):
        verdict = gamma_verdict(_ctx(group, field), bound=bounds.cyclic_degree)
        if verdict.verdict != "trivial":
            failures.append(f"{group}: {verdict.verdict}")
    ctx = _ctx("C3", "3")
    ring = ctx.ring
    x = ring.parse("x")
    result = triple_massey(ring, x, x, x, ctx.f2())
    if result.contains_zero or result.indeterminacy or not _contains(ring, result, ring.parse("y")):
        failures.append(f"C3: ⟨x,x,x⟩ = {ring.format(result.representative[0][0])}")
    if gamma_verdict(ctx).verdict != "nontrivial":
        failures.append("C3: trivial")
    return _report(failures)


@check("abelian-trivial-gamma")
def check_abelian_trivial_gamma(seed: int, bounds: SuiteBounds) -> CheckReport:
    failures = []
    for group, field in (
        ("C2xC2xC2", "2"),
        ("C2xC2xC2xC2", "2"),
        ("C4xC4xC4", "2"),
        ("C2xC4xC4", "2"),
        ("C5xC5xC5", "5"),
    ):
        verdict = gamma_verdict(_ctx(group, field), bound=bounds.triple_degree)
        if verdict.verdict != "trivial":
            failures.append(f"{group}: {verdict.verdict}")
    return _report(failures, f"named triples up to degree {bounds.triple_degree}")


@check("rank-two-massey")
def check_rank_two_massey(seed: int, bounds: SuiteBounds) -> CheckReport:
    failures = []
    for group, field in (("C2xC2", "2"), ("C4xC2", "2"), ("C3xC3", "3")):
        ring = _ctx(group, field).ring
        a, b, c = (ring.parse(t) for t in ("v2", "phi(0,1)", "v1"))
        result = triple_massey(ring, a, b, c)
        u1 = ring.parse("u1")
        rep = result.representative[0][0]
        if rep not in (u1, ring.neg(u1)) or result.indeterminacy:
            failures.append(f"{group}: {ring.format(rep)} with indeterminacy {len(result.indeterminacy)}")
    return _report(failures)


@check("order-three-massey")
def check_order_three_massey(seed: int, bounds: SuiteBounds) -> CheckReport:
    failures = []
    for group, u, v in (("C3", "x", "y"), ("C3xC9", "u1", "v1"), ("C3xC3xC3", "u1", "v1")):
        ctx = _ctx(group, "3")
        ring = ctx.ring
        a = ring.parse(u)
        f2 = ctx.f2() if ctx.family == "cyclic" else None
        result = triple_massey(ring, a, a, a, f2)
        if result.contains_zero or not _contains(ring, result, ring.parse(v)):
            failures.append(f"{group}: ⟨{u},{u},{u}⟩ ∋ {ring.format(result.representative[0][0])}")
    return _report(failures)


# Structure ---------------------------------------------------------------------------------


@check("resolutions", quick=True)
def check_resolutions(seed: int, bounds: SuiteBounds) -> CheckReport:
    reports = []
    for group, field in SAMPLE_GROUPS:
        ctx = _ctx(group, field)
        window = PRODUCT_WINDOW if ctx.family == "abelian" else _window()
        reports.append((f"{group} exact", verify_exact(ctx.res, window)))
        reports.append((f"{group} minimal", verify_minimal(ctx.res, window)))
    return _merge(reports)


@check("ext-dimensions")
def check_ext_dimensions(seed: int, bounds: SuiteBounds) -> CheckReport:
    reports, failures = [], []
    for group, field in SAMPLE_GROUPS:
        ctx = _ctx(group, field)
        ring = ctx.ring
        degrees = range(-4, 5)
        for n in degrees:
            if len(ring.basis(n)) != ctx.res.rank(n):
                failures.append(f"{group}: dim Ext^{n} = {len(ring.basis(n))}, rank {ctx.res.rank(n)}")
        window = PRODUCT_WINDOW if ctx.family == "abelian" else _window()
        reports.append((group, build_f1(ring).check(degrees, window)))
    merged = _merge(reports)
    return _report(failures + merged.failures)


@check("ring-relations", quick=True)
def check_ring_relations(seed: int, bounds: SuiteBounds) -> CheckReport:
    reports = [("Q8", q8_relations(_ctx("Q8").ring, bounds.relation_degree))]
    for group, field in (("C2xC2xC2", "2"), ("C4xC4xC4", "2"), ("C3xC3", "3"), ("C5xC5xC5", "5")):
        reports.append((group, abelian_relations(_ctx(group, field).ring, bounds.relation_degree)))
    return _merge(reports)


@check("class-map", quick=True)
def check_class_map(seed: int, bounds: SuiteBounds) -> CheckReport:
    """Linearity, well-definedness on products and multiplicativity of 𝒞 on Q8."""
    rng = np.random.default_rng(seed)
    ctx = _ctx("Q8")
    ring, res, field = ctx.ring, ctx.res, ctx.field
    c = ring.catalog
    window = (-2, 8)
    failures = []
    for _ in range(3):
        f, g = random_table(res, 2, window, rng), random_table(res, 2, window, rng)
        a, b = int(field.random(rng, ())), int(field.random(rng, ()))
        combined = linear_combination(res, 2, [(a, f), (b, g)])
        expected = ring.add(ring.scale(ring.class_of(f), a), ring.scale(ring.class_of(g), b))
        if ring.class_of(combined) != expected:
            failures.append("linearity")
        h = random_table(res, 1, window, rng)
        if ring.class_of(c["x"] @ c["y"] @ h) != ring.class_of(c["y"] @ c["x"] @ h):
            failures.append("C(xy h) != C(yx h)")
        k = random_table(res, 1, window, rng)
        for n in range(0, 4):
            for key in ring.basis(n):
                lhs = ring.class_of(compose(k, ring.f1(key)))
                rhs = ring.multiply(ring.class_of(k), ring.element(key))
                if lhs != rhs:
                    failures.append(f"C(f {ring.key_name(key)})")
    return _report(sorted(set(failures)))


@check("catalogs", quick=True)
def check_catalogs(seed: int, bounds: SuiteBounds) -> CheckReport:
    window = _window()
    reports = []
    q8 = _ctx("Q8").ring.catalog
    reports.append(("Q8", q8.check(window)))
    reports.append(("Q8", q8_conjugation_identities(q8, window)))
    for group, field in (("C2", "2"), ("C3", "3"), ("C4", "2"), ("C5", "5")):
        reports.append((group, _ctx(group, field).ring.catalog.check(window)))
    c2 = _ctx("C2").ring.catalog
    if not (c2["x"] @ c2["x"]).equal_on(c2["y"], window):
        reports.append(("C2", _report(["x^2 != y"])))
    for group, field in (("C2xC2xC2", "2"), ("C3xC3", "3")):
        reports.append((group, _ctx(group, field).ring.catalog.check(PRODUCT_WINDOW)))
    return _merge(reports)


# Φ and Ψ -------------------------------------------------------------------------------------


@check("phi-differential")
def check_phi_differential(seed: int, bounds: SuiteBounds) -> CheckReport:
    rng = np.random.default_rng(seed)
    failures = []
    for group, field in (("C4xC2", "2"), ("C3xC3", "3")):
        res = _ctx(group, field).res
        for j, n in product(range(res.r), (0, 1, 2)):
            f = random_table(res.factors[j], n, FACTOR_WINDOW, rng)
            lhs = phi(res, dga_differential(f), j)
            rhs = dga_differential(phi(res, f, j))
            if not lhs.equal_on(rhs, PRODUCT_WINDOW):
                failures.append(f"{group}: Φ{j + 1}(df) != dΦ{j + 1}(f), |f| = {n}")
    return _report(failures)


@check("phi-product")
def check_phi_product(seed: int, bounds: SuiteBounds) -> CheckReport:
    rng = np.random.default_rng(seed)
    failures = []
    for group, field in (("C4xC2", "2"), ("C3xC3", "3")):
        res = _ctx(group, field).res
        for j, n, m in product(range(res.r), (1, 2), (1, 2)):
            f = random_table(res.factors[j], n, FACTOR_WINDOW, rng)
            g = random_table(res.factors[j], m, FACTOR_WINDOW, rng)
            if not phi(res, compose(f, g), j).equal_on(compose(phi(res, f, j), phi(res, g, j)), PRODUCT_WINDOW):
                failures.append(f"{group}: Φ{j + 1}(fg) != Φ{j + 1}(f)Φ{j + 1}(g), degrees {n}, {m}")
    return _report(failures)


@check("psi-differential")
def check_psi_differential(seed: int, bounds: SuiteBounds) -> CheckReport:
    rng = np.random.default_rng(seed)
    failures = []
    cases = [
        ("C4xC2", "2", (-2, -1)),
        ("C3xC3", "3", (-1, -3)),
        ("C3xC3", "3", (-2, -2)),
        ("C2xC4xC4", "2", (-1, -2, -2)),
        ("C3xC3xC3", "3", (-2, -1, -3)),
    ]
    for group, field, degrees in cases:
        ctx = _ctx(group, field)
        res = ctx.res
        fs = [random_table(res.factors[l], d, FACTOR_WINDOW, rng) for l, d in enumerate(degrees)]
        lhs = dga_differential(psi(res, fs))
        terms = [
            (ctx.field.sign(sum(degrees[:i])), psi(res, fs[:i] + [dga_differential(fs[i])] + fs[i + 1 :]))
            for i in range(res.r)
        ]
        if not lhs.equal_on(linear_combination(res, lhs.degree, terms), PRODUCT_WINDOW):
            failures.append(f"{group}: dΨ for degrees {degrees}")
    return _report(failures)


@check("commutator-homotopy")
def check_commutator_homotopy(seed: int, bounds: SuiteBounds) -> CheckReport:
    failures = []
    for group, field in (("C4xC4xC4", "2"), ("C5xC5xC5", "5")):
        ctx = _ctx(group, field)
        res = ctx.res
        catalog = ctx.ring.catalog
        for (i, j), (fn, gn) in product(((1, 2), (2, 1), (1, 3)), product(("x", "y"), repeat=2)):
            f = catalog.factor_catalogs[i - 1][fn]
            g = catalog.factor_catalogs[j - 1][gn]
            h = catalog.commutator_homotopy(fn, i, gn, j)
            Pf, Pg = phi(res, f, i - 1), phi(res, g, j - 1)
            target = compose(Pf, Pg) - scale(compose(Pg, Pf), ctx.field.sign(f.degree * g.degree))
            label = f"{group}: h({fn}{i},{gn}{j})"
            if not dga_differential(h).equal_on(target, PRODUCT_WINDOW):
                failures.append(f"{label} dh")
            if not is_ideal_map(h, J(res.r - 2), PRODUCT_WINDOW):
                failures.append(f"{label} not J_{res.r - 2}")
    return _report(failures)


@check("psi-composites")
def check_psi_composites(seed: int, bounds: SuiteBounds) -> CheckReport:
    failures = []
    for group in ("C2xC2xC2", "C4xC4xC4"):
        ctx = _ctx(group)
        catalog = ctx.ring.catalog
        r = ctx.res.r
        for a, b in product(alphas_up_to(r, 1), repeat=2):
            if not is_ideal_map(compose(catalog.phi(a), catalog.phi(b)), J(r - 1), PRODUCT_WINDOW):
                failures.append(f"{group}: {catalog.phi_name(a)}{catalog.phi_name(b)}")
    return _report(failures)


@check("phi-psi-composites")
def check_phi_psi_composites(seed: int, bounds: SuiteBounds) -> CheckReport:
    """Φ(g)Ψ(f) and Ψ(f)Φ(g) agree with Ψ of the factor composite modulo J_{r-1}."""
    failures = []
    ctx = _ctx("C4xC4xC4")
    res, field = ctx.res, ctx.field
    catalog = ctx.ring.catalog
    r = res.r
    J_top = J(r - 1)
    for alpha in ((1, 0, 2), (0, 2, 1)):
        fs = [phi_factor(fc, a) for fc, a in zip(catalog.factor_catalogs, alpha)]
        degrees = [f.degree for f in fs]
        Psi = psi(res, fs)
        n = Psi.degree
        for j, name in product(range(r), ("x", "y")):
            g = catalog.factor_catalogs[j][name]
            m = g.degree
            Pg = phi(res, g, j)
            label = f"{catalog.phi_name(alpha)} with {name}{j + 1}"
            left = compose(Pg, Psi)
            gf = compose(g, fs[j])
            if gf.degree < 0:
                swapped = psi(res, fs[:j] + [gf] + fs[j + 1 :])
                left = left - scale(swapped, field.sign(m * sum(degrees[:j])))
            if not is_ideal_map(left, J_top, PRODUCT_WINDOW):
                failures.append(f"Φ(g)Ψ: {label}")
            right = compose(Psi, Pg)
            fg = compose(fs[j], g)
            if fg.degree < 0:
                swapped = psi(res, fs[:j] + [fg] + fs[j + 1 :])
                right = right - scale(swapped, field.sign(m * (n + sum(degrees[:j]))))
            if not is_ideal_map(right, J_top, PRODUCT_WINDOW):
                failures.append(f"ΨΦ(g): {label}")
    return _report(failures)


# Lifting ---------------------------------------------------------------------------------------


@check("splitting")
def check_splitting(seed: int, bounds: SuiteBounds) -> CheckReport:
    rng = np.random.default_rng(seed)
    failures = []
    for group, field in (("C2xC2xC2", "2"), ("C4xC4xC4", "2"), ("C3xC9", "3")):
        algebra = _ctx(group, field).algebra
        r = algebra.r
        for _ in range(20):
            alpha = tuple(int(a) for a in rng.integers(-4, 5, size=r))
            beta = tuple(int(b) for b in rng.integers(-4, 5, size=r))
            if (0,) * r not in monomial_split(algebra, alpha, beta).inner:
                failures.append(f"{group}: 1 not in I{alpha},{beta}")
            for i in range(r):
                claims = splitting_claims(algebra, alpha, beta, i)
                failures.extend(f"{group}: claim {k} at {alpha},{beta},{i}" for k, ok in claims.items() if not ok)
    return _report(failures)


@check("decomposition")
def check_decomposition(seed: int, bounds: SuiteBounds) -> CheckReport:
    """Composing with ∂ sends C to A and D to B on both sides."""
    rng = np.random.default_rng(seed)
    res = _ctx("C4xC4xC4").res
    A, field = res.algebra, res.field
    failures = []
    for k, n in product(range(-3, 4), (0, -1, -2)):
        h = field.random(rng, (res.rank(k + 1), res.rank(k + n), A.dim))
        hC = project_to_C(res, h, k + 1, k + n)
        hD = field.sub(h, hC)
        if not in_A(res, compose_maps(A, res.differential(k + 1), hC), k, k + n):
            failures.append(f"∂C not in A at k={k}, n={n}")
        if not in_B(res, compose_maps(A, res.differential(k + 1), hD), k, k + n):
            failures.append(f"∂D not in B at k={k}, n={n}")
        h = field.random(rng, (res.rank(k), res.rank(k + n - 1), A.dim))
        hC = project_to_C(res, h, k, k + n - 1)
        hD = field.sub(h, hC)
        if not in_A(res, compose_maps(A, hC, res.differential(k + n)), k, k + n):
            failures.append(f"C∂ not in A at k={k}, n={n}")
        if not in_B(res, compose_maps(A, hD, res.differential(k + n)), k, k + n):
            failures.append(f"D∂ not in B at k={k}, n={n}")
    return _report(failures)


@check("imap-homotopies")
def check_imap_homotopies(seed: int, bounds: SuiteBounds) -> CheckReport:
    failures = []
    for group in ("C2xC2xC2", "C4xC4xC4"):
        ctx = _ctx(group)
        catalog = ctx.ring.catalog
        r = ctx.res.r
        for a, b in (((0,) * r, (0,) * r), ((1,) + (0,) * (r - 1), (0,) * (r - 1) + (1,)), ((0, 1, 1), (2, 0, 0))):
            f = compose(catalog.phi(a), catalog.phi(b))
            h = null_homotopy_Imap(f, PRODUCT_WINDOW)
            label = f"{group}: {catalog.phi_name(a)}{catalog.phi_name(b)}"
            if not is_ideal_map(h, I(), PRODUCT_WINDOW):
                failures.append(f"{label} not an I-map")
            if not dga_differential(h).equal_on(f, PRODUCT_WINDOW):
                failures.append(f"{label} dh != f")
    return _report(failures)


@check("positive-degree-rejection")
def check_positive_degree_rejection(seed: int, bounds: SuiteBounds) -> CheckReport:
    res = _ctx("C2xC2xC2").res
    g = degree_one_cocycle(res)
    failures = []
    try:
        null_homotopy_Imap(g)
        failures.append("degree-1 cocycle accepted")
    except PositiveDegree:
        pass
    if imap_homotopy_exists(g, PRODUCT_WINDOW):
        failures.append("I-map homotopy found for the degree-1 cocycle")
    return _report(failures)


# Runner ------------------------------------------------------------------------------------------

SUITES = {"paper": (None, FULL_BOUNDS), "quick": (QUICK, QUICK_BOUNDS)}


def _run(name: str, seed: int, bounds: SuiteBounds) -> CheckReport:
    try:
        return CHECKS[name](seed, bounds)
    except TateError as e:
        logger.error(f"Check {name} raised {type(e).__name__}: {str(e)}")
        return CheckReport(name=name, passed=False, failures=[f"{type(e).__name__}: {e}"])


def run_suite(suite: str = "paper", seed: Optional[int] = None, progress: bool = True) -> SuiteReport:
    """
    Run every check of a suite.

    Parameters:
    -----------
    suite: str
        ``paper`` for all checks at FULL_BOUNDS, ``quick`` for the smoke subset at QUICK_BOUNDS.
    seed: int
        Replay seed for the randomized checks (default TATE_SEED).
    progress: bool
        Show a tqdm progress bar on stderr.
    """
    if suite not in SUITES:
        raise InvalidSpec(f"Unknown suite {suite!r}, expected one of {sorted(SUITES)}")
    seed = settings.SEED if seed is None else seed
    names, bounds = SUITES[suite]
    names = names or list(CHECKS)
    logger.info(f"Running suite {suite} ({len(names)} checks, seed {seed}, triples to degree {bounds.triple_degree})")
    with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as pool:
        futures = [pool.submit(_run, name, seed, bounds) for name in names]
        for _ in tqdm(as_completed(futures), total=len(futures), desc=f"verify {suite}", disable=not progress):
            pass
    checks = [f.result() for f in futures]
    report = SuiteReport(suite=suite, seed=seed, checks=checks)
    logger.info(f"Suite {suite}: {sum(c.passed for c in checks)}/{len(checks)} passed")
    return report
