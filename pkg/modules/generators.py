"""Explicit cocycles and homotopies for the three resolution families.

Cyclic groups get x̄, ȳ, ȳ⁻¹ and q̄; Q8 gets x̄, ȳ, s̄, s̄⁻¹, p̄, q̄, r̄ from
literal matrix data. For abelian products the factor-wise maps are carried to
the product resolution by Φ (non-negative degree) and Ψ (negative degree).

Factor indices are 0-based in the function signatures and 1-based in names
(``u1``, ``v2``).
"""

from __future__ import annotations

import logging
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import numpy as np

from helpers import settings
from helpers.errors import DegreeViolation, NegativeDegree, SameFactor, WrongKind
from helpers.serialization import CheckReport
from modules.graded_map import (
    GradedMap,
    compose,
    dga_differential,
    linear_combination,
    periodic,
    rule,
    shift,
)
from modules.module_map import parse_map, zero_map
from modules.resolution import AbelianResolution, CyclicResolution, Q8Resolution, compositions

logger = logging.getLogger(__name__)


class GeneratorCatalog:
    """
    Named graded maps over one resolution.

    ``homotopies`` maps the name of a homotopy h to the map g with dh = g; every
    other entry is expected to be a cocycle.
    """

    def __init__(self, res, maps: dict[str, GradedMap], homotopies: Optional[dict[str, GradedMap]] = None):
        self.res = res
        self.maps = dict(maps)
        self.homotopies = dict(homotopies or {})

    def __getitem__(self, name: str) -> GradedMap:
        return self.maps[name]

    def __contains__(self, name: str) -> bool:
        return name in self.maps

    @property
    def names(self) -> list[str]:
        return list(self.maps)

    def check(self, window: tuple[int, int]) -> CheckReport:
        """is_cocycle for the cocycles and dh = g for the homotopies on the window."""
        failures = []
        for name, f in self.maps.items():
            target = self.homotopies.get(name)
            df = dga_differential(f)
            if target is None:
                ok = df.is_zero_on(window)
            else:
                ok = df.equal_on(target, window)
            if not ok:
                failures.append(name)
        logger.info(f"Catalog check over {self.res} on {window}: {failures or 'pass'}")
        return CheckReport(name="catalog", passed=not failures, failures=failures)

    def dump(self, window: tuple[int, int]) -> dict[str, dict[str, list[list[str]]]]:
        return {name: f.dump(window) for name, f in self.maps.items()}


# Cyclic groups -------------------------------------------------------------------


def cyclic_generators(res: CyclicResolution) -> GeneratorCatalog:
    """
    x̄ (degree 1), ȳ = shift(2), ȳ⁻¹ and, for m >= 3, the homotopy q̄ with dq̄ = x̄².

    Parameters:
    -----------
    res: CyclicResolution
        Resolution over k[z]/z^m.
    """
    if not isinstance(res, CyclicResolution):
        raise WrongKind(f"Cyclic generators need a cyclic resolution, got {res}")
    A = res.algebra
    m = res.m

    def entry(element: np.ndarray) -> np.ndarray:
        M = zero_map(A, 1, 1)
        M[0, 0] = element
        return M

    x = periodic(res, 1, [entry(A.one()), entry(A.monomial((m - 2,)))], "x")
    maps = {"x": x, "y": shift(res, 2, "y"), "y^-1": shift(res, -2, "y^-1")}
    homotopies = {}
    if m >= 3:
        q = periodic(res, 1, [entry(A.zero()), entry(A.monomial((m - 3,)))], "q")
        maps["q"] = q
        homotopies["q"] = compose(x, x)
    logger.info(f"Built cyclic generators for m={m}")
    return GeneratorCatalog(res, maps, homotopies)


# Q8 ---------------------------------------------------------------------------

# component j : P_{j+degree} -> P_j, one entry per j mod period
Q8_DATA = {
    "x": (1, [
        [["E", "0"]],
        [["0", "E"], ["E", "I"]],
        [["E"], ["0"]],
        [["E+E'+J+J'"]],
    ]),
    "y": (1, [
        [["0", "E"]],
        [["J", "E"], ["E", "0"]],
        [["0"], ["E"]],
        [["E+E'+I+I'"]],
    ]),
    "p": (1, [
        [["0", "0"]],
        [["0", "E"], ["E", "0"]],
        [["0"], ["0"]],
        [["E+E'"]],
    ]),
    "q": (1, [
        [["0", "0"]],
        [["0", "0"], ["E", "0"]],
        [["0"], ["0"]],
        [["E+I'+J+K"]],
        [["E", "E"]],
        [["J", "0"], ["E", "I"]],
        [["E"], ["E"]],
        [["E+I+J'+K"]],
    ]),
    "r": (2, [
        [["0", "0"]],
        [["0"], ["0"]],
        [["E+J'"], ["I+J"]],
        [["I+J", "J+K"]],
        [["0", "E"]],
        [["0"], ["E"]],
        [["E'+J"], ["I+J"]],
        [["E+E'+J'+I", "J+K"]],
    ]),
}


def q8_generators(res: Q8Resolution) -> GeneratorCatalog:
    if not isinstance(res, Q8Resolution):
        raise WrongKind(f"Q8 generators need the Q8 resolution, got {res}")
    A = res.algebra
    maps = {
        name: periodic(res, degree, [parse_map(A, rows) for rows in comps], name)
        for name, (degree, comps) in Q8_DATA.items()
    }
    maps["s"] = shift(res, 4, "s")
    maps["s^-1"] = shift(res, -4, "s^-1")
    x, y = maps["x"], maps["y"]
    one = res.field.sign(0)
    homotopies = {
        "p": linear_combination(res, 2, [(one, x @ y), (one, y @ x)]),
        "q": linear_combination(res, 2, [(one, x @ x), (one, y @ y), (one, x @ y)]),
        "r": x @ x @ x,
    }
    logger.info("Built Q8 generators")
    return GeneratorCatalog(res, maps, homotopies)


def q8_conjugation_identities(catalog: GeneratorCatalog, window: tuple[int, int]) -> CheckReport:
    """s̄p̄ = p̄s̄, s̄q̄ = (q̄+x̄+ȳ)s̄ and s̄r̄ = (r̄+x̄²)s̄ on the window."""
    c = catalog
    s, x, y, p, q, r = (c[k] for k in ("s", "x", "y", "p", "q", "r"))
    checks = {
        "sp=ps": (s @ p, p @ s),
        "sq=(q+x+y)s": (s @ q, (q + x + y) @ s),
        "sr=(r+x2)s": (s @ r, (r + x @ x) @ s),
    }
    failures = [name for name, (lhs, rhs) in checks.items() if not lhs.equal_on(rhs, window)]
    return CheckReport(name="q8-conjugation", passed=not failures, failures=failures)


# Abelian products ------------------------------------------------------------------


def _factor_entry(res: AbelianResolution, i: int, f: GradedMap, j: int) -> np.ndarray:
    """Global element of the (only) entry of a factor map's component j."""
    return res.embed(i, f.component(j)[0, 0])


def phi(res: AbelianResolution, f: GradedMap, j: int) -> GradedMap:
    """
    Φ(f) for a factor map f of degree n >= 0 on factor j (0-based).

    Ranges of Φ(f)_k : P_{k+n} -> P_k:

    - k >= 0: β ↦ (-1)^{n(β_0+..+β_{j-1})} f(β_j) at β - nε^j, when β_j >= n;
    - -n <= k <= -1: only the label (k+n)ε^j, sent to the all -1 label
      with k at slot j through ∂_0 on the other factors, no sign;
    - k < -n: as for k >= 0 with the extra sign (-1)^{n j}.
    """
    n = f.degree
    if n < 0:
        raise NegativeDegree(f"Φ needs a map of non-negative degree, got {n}")
    A = res.algebra
    field = res.field
    r = res.r

    def build(k: int) -> np.ndarray:
        targets = res.label_index(k)
        sources = res.labels(k + n)
        M = zero_map(A, len(targets), len(sources))
        if -n <= k <= -1:
            source = tuple(k + n if l == j else 0 for l in range(r))
            target = tuple(k if l == j else -1 for l in range(r))
            coeff = A.multiply(res.c0_product[j], _factor_entry(res, j, f, k))
            M[targets[target], res.label_index(k + n)[source]] = coeff
            return M
        extra = j if k < 0 else 0
        for col, beta in enumerate(sources):
            if k >= 0 and beta[j] < n:
                continue
            target = beta[:j] + (beta[j] - n,) + beta[j + 1 :]
            sign = field.sign(n * (sum(beta[:j]) + extra))
            M[targets[target], col] = field.mul(_factor_entry(res, j, f, beta[j] - n), sign)
        return M

    return rule(res, n, build, f"Φ{j + 1}({f.name})")


def psi(res: AbelianResolution, factors: Sequence[GradedMap]) -> GradedMap:
    """
    Ψ(f_1, .., f_r) for factor maps of degrees n_l <= 0, at most one of them 0.

    The degree n satisfies n + 1 = sum(n_l + 1). With N_l = n_1 + .. + n_l the
    ranges of Ψ_k : P_{k+n} -> P_k are calibrated to be disjoint:

    - k >= max(0, -n): source (k+n)ε^1, target (k+n-n_1, -1-n_2, .., -1-n_r),
      sign t + (n+n_1)(k+n) with t = sum_{l>=2} (n+N_l+l-1);
    - 0 <= k < -n: source β in N_{k+n}, target β - (n_1, .., n_r),
      sign sum_l (n+N_l+l-1) β_l;
    - k < 0: source (k+n_1, n_2, .., n_r), target (k, -1, .., -1),
      sign s + (n+n_1)(k+n_1) with s = sum_{l>=2} (n+N_l+l-1) n_l.
    """
    r = res.r
    if len(factors) != r:
        raise DegreeViolation(f"Ψ needs {r} factor maps, got {len(factors)}")
    degrees = [f.degree for f in factors]
    if any(d > 0 for d in degrees) or degrees.count(0) > 1:
        raise DegreeViolation(f"Ψ needs degrees <= 0 with at most one zero, got {degrees}")
    A = res.algebra
    field = res.field
    n = sum(d + 1 for d in degrees) - 1
    prefix = list(np.cumsum(degrees))
    # (n + N_l + l - 1) with 1-based l
    weights = [n + int(prefix[l]) + l for l in range(r)]
    t = sum(weights[1:])
    s = sum(w * d for w, d in zip(weights[1:], degrees[1:]))
    n1 = degrees[0]

    def entry(l: int, j: int) -> np.ndarray:
        return _factor_entry(res, l, factors[l], j)

    def build(k: int) -> np.ndarray:
        targets = res.label_index(k)
        source_index = res.label_index(k + n)
        M = zero_map(A, len(targets), len(source_index))
        if k >= max(0, -n):
            target = (k + n - n1,) + tuple(-1 - d for d in degrees[1:])
            if min(target) < 0:
                return M
            coeff = entry(0, k + n - n1)
            for l in range(1, r):
                coeff = A.multiply(coeff, A.multiply(res.factor_coefficient(l, 0), entry(l, -1 - degrees[l])))
            source = (k + n,) + (0,) * (r - 1)
            M[targets[target], source_index[source]] = field.mul(coeff, field.sign(t + (n + n1) * (k + n)))
        elif k >= 0:
            for beta, col in source_index.items():
                target = tuple(b - d for b, d in zip(beta, degrees))
                if min(target) < 0:
                    continue
                coeff = A.one()
                for l in range(r):
                    coeff = A.multiply(coeff, entry(l, target[l]))
                sign = field.sign(sum(w * b for w, b in zip(weights, beta)))
                M[targets[target], col] = field.mul(coeff, sign)
        else:
            source = (k + n1,) + tuple(degrees[1:])
            if max(source) >= 0:
                return M
            coeff = entry(0, k)
            for l in range(1, r):
                coeff = A.multiply(coeff, A.multiply(res.factor_coefficient(l, 0), entry(l, 0)))
            target = (k,) + (-1,) * (r - 1)
            M[targets[target], source_index[source]] = field.mul(coeff, field.sign(s + (n + n1) * (k + n1)))
        return M

    return rule(res, n, build, "Ψ(" + ",".join(f.name for f in factors) + ")")


def phi_commutator_homotopy(
    res: AbelianResolution, f: GradedMap, j: int, g: GradedMap, l: int
) -> GradedMap:
    """
    h with dh = Φ(f)Φ(g) - (-1)^{nm} Φ(g)Φ(f) for positive-degree factor cocycles.

    h_k is nonzero only for -n-m+1 <= k <= -1, on sources with a_j < n at slot j,
    a_l < m at slot l and 0 elsewhere, sending them through f, g and ∂_0 on the
    remaining factors with sign (-1)^{n + (m-1) a_j}.
    """
    if j == l:
        raise SameFactor(f"Commutator homotopy needs two different factors, got {j + 1} twice")
    n, m = f.degree, g.degree
    if n <= 0 or m <= 0:
        raise DegreeViolation(f"Commutator homotopy needs positive degrees, got {n} and {m}")
    field = res.field
    if j > l:
        swapped = phi_commutator_homotopy(res, g, l, f, j)
        return rule(
            res,
            n + m - 1,
            lambda k: field.mul(swapped.component(k), field.neg(field.sign(n * m))),
            f"h({f.name},{g.name})",
        )
    A = res.algebra
    r = res.r
    others = A.one()
    for i in range(r):
        if i not in (j, l):
            others = A.multiply(others, res.factor_coefficient(i, 0))

    def build(k: int) -> np.ndarray:
        targets = res.label_index(k)
        source_index = res.label_index(k + n + m - 1)
        M = zero_map(A, len(targets), len(source_index))
        if not -n - m + 1 <= k <= -1:
            return M
        total = k + n + m - 1
        for a_j in range(max(0, total - m + 1), min(n - 1, total) + 1):
            a_l = total - a_j
            source = tuple(a_j if i == j else a_l if i == l else 0 for i in range(r))
            target = tuple(a_j - n if i == j else a_l - m if i == l else -1 for i in range(r))
            coeff = A.multiply(others, A.multiply(_factor_entry(res, j, f, a_j - n), _factor_entry(res, l, g, a_l - m)))
            M[targets[target], source_index[source]] = field.mul(coeff, field.sign(n + (m - 1) * a_j))
        return M

    return rule(res, n + m - 1, build, f"h({f.name},{g.name})")


def degree_one_cocycle(res: AbelianResolution) -> GradedMap:
    """Degree-1 cocycle with component -1 equal to ∂_0 and zero elsewhere."""
    A = res.algebra

    def build(k: int) -> np.ndarray:
        if k == -1:
            return res.differential(0)
        return zero_map(A, res.rank(k), res.rank(k + 1))

    return rule(res, 1, build, "∂0")


def phi_factor(factor_catalog: GeneratorCatalog, alpha_i: int) -> GradedMap:
    """ȳ^β x̄^ε on one factor with -α_i - 1 = 2β + ε."""
    degree = -alpha_i - 1
    beta, eps = divmod(degree, 2)
    y_power = shift(factor_catalog.res, 2 * beta, f"y^{beta}")
    if eps:
        return compose(y_power, factor_catalog["x"]).named(f"y^{beta}x")
    return y_power


class AbelianCatalog(GeneratorCatalog):
    """
    ū_i = Φ(x̄_i), v̄_i = Φ(ȳ_i), v̄_i⁻¹ and φ̄_α = Ψ(ȳ_i^{β_i} x̄_i^{ε_i}).

    v̄_i⁻¹ is Ψ with ȳ_i⁻¹ at slot i and ȳ⁻¹x̄ elsewhere. With one factor that is
    the inverse of v̄; with r >= 2 factors v_i is a zero divisor (φ_{ε_i} v_i = 0)
    and v̄_i⁻¹ agrees with φ̄_{ε_i}.

    φ̄_α is built eagerly for |α| <= cap and on demand beyond.
    """

    def __init__(self, res: AbelianResolution, cap: Optional[int] = None):
        self.factor_catalogs = [cyclic_generators(f) for f in res.factors]
        self.cap = settings.PHI_CAP if cap is None else cap
        self._phi: dict[tuple[int, ...], GradedMap] = {}
        maps = {}
        for i, fc in enumerate(self.factor_catalogs):
            maps[f"u{i + 1}"] = phi(res, fc["x"], i).named(f"u{i + 1}")
            maps[f"v{i + 1}"] = phi(res, fc["y"], i).named(f"v{i + 1}")
        for i, fc in enumerate(self.factor_catalogs):
            factors = [fc["y^-1"] if l == i else phi_factor(other, 0) for l, other in enumerate(self.factor_catalogs)]
            maps[f"v{i + 1}^-1"] = psi(res, factors).named(f"v{i + 1}^-1")
        super().__init__(res, maps)
        for total in range(self.cap + 1):
            for alpha in compositions(total, res.r):
                self.maps[self.phi_name(alpha)] = self.phi(alpha)
        logger.info(f"Built abelian generators for {res.algebra} with φ cap {self.cap}")

    @staticmethod
    def phi_name(alpha: Sequence[int]) -> str:
        return "phi(" + ",".join(str(a) for a in alpha) + ")"

    def u(self, i: int) -> GradedMap:
        """ū_i, 1-based."""
        return self.maps[f"u{i}"]

    def v(self, i: int) -> GradedMap:
        """v̄_i, 1-based."""
        return self.maps[f"v{i}"]

    def v_inverse(self, i: int) -> GradedMap:
        """v̄_i⁻¹, 1-based."""
        return self.maps[f"v{i}^-1"]

    def y_inverse(self, i: int) -> GradedMap:
        """The factor map ȳ_i⁻¹ (1-based) that feeds Ψ."""
        return self.factor_catalogs[i - 1]["y^-1"]

    def phi(self, alpha: Sequence[int]) -> GradedMap:
        alpha = tuple(int(a) for a in alpha)
        cached = self._phi.get(alpha)
        if cached is None:
            factors = [phi_factor(fc, a) for fc, a in zip(self.factor_catalogs, alpha)]
            cached = psi(self.res, factors).named(self.phi_name(alpha))
            cached = self._phi.setdefault(alpha, cached)
        return cached

    def commutator_homotopy(self, f_name: str, i: int, g_name: str, j: int) -> GradedMap:
        """Homotopy between Φ(f_i)Φ(g_j) and its graded swap, 1-based factors."""
        f = self.factor_catalogs[i - 1][f_name]
        g = self.factor_catalogs[j - 1][g_name]
        return phi_commutator_homotopy(self.res, f, i - 1, g, j - 1)


def abelian_generators(res: AbelianResolution, cap: Optional[int] = None) -> AbelianCatalog:
    if not isinstance(res, AbelianResolution):
        raise WrongKind(f"Abelian generators need a product resolution, got {res}")
    return AbelianCatalog(res, cap)


@lru_cache(maxsize=None)
def _catalog_for(res) -> GeneratorCatalog:
    if isinstance(res, Q8Resolution):
        return q8_generators(res)
    if isinstance(res, CyclicResolution):
        return cyclic_generators(res)
    return abelian_generators(res)


def catalog_for(res) -> GeneratorCatalog:
    """The generator catalog for any supported resolution, one per resolution."""
    return _catalog_for(res)


def alphas_up_to(r: int, total: int) -> list[tuple[int, ...]]:
    return [alpha for t in range(total + 1) for alpha in compositions(t, r)]


def degree_words(r: int, degree: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(ε, β) with ε_i in {0,1} and |ε| + 2|β| = degree, for u^ε v^β."""
    out = []
    for eps in product((0, 1), repeat=r):
        rest = degree - sum(eps)
        if rest < 0 or rest % 2:
            continue
        for beta in compositions(rest // 2, r):
            out.append((eps, beta))
    return out
