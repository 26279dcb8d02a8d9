"""The endomorphism dga A = Hom*(P, P) of a complete resolution.

A degree-n graded map f is the family of module maps f_j : P_{j+n} -> P_j.
Components are produced on demand by a builder and memoized, so table,
periodic and rule-generated maps share one type.

Conventions used throughout:
    (df)_j = ∂_{j+1} f_{j+1} - (-1)^n f_j ∂_{j+n+1}
    (fg)_j = f_j o g_{j+|f|}
"""

from __future__ import annotations

import logging
import threading
from math import lcm
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.sparse import coo_matrix

from helpers.errors import DegreeMismatch, Infeasible, WindowTooSmall
from helpers.linalg import BlockSolver
from modules.group_algebra import IdealSpec
from modules.module_map import compose as compose_maps
from modules.module_map import format_map, identity_map, zero_map

logger = logging.getLogger(__name__)


class TateClass(BaseModel):
    """Element of Êxt^degree in coordinates over the dual basis of labels(degree)."""

    model_config = ConfigDict(frozen=True)

    degree: int
    coords: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)


def _combine_periods(*periods: Optional[int]) -> Optional[int]:
    if any(p is None for p in periods):
        return None
    return lcm(*periods)


class GradedMap:
    """A degree-n graded map with lazily built, shape-checked components."""

    def __init__(
        self,
        res,
        degree: int,
        builder: Callable[[int], np.ndarray],
        name: str = "",
        period: Optional[int] = None,
    ):
        self.res = res
        self.degree = degree
        self.name = name
        self.period = period
        self._builder = builder
        self._cache: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"GradedMap({self.name or '?'}, degree={self.degree})"

    def component(self, j: int) -> np.ndarray:
        M = self._cache.get(j)
        if M is not None:
            return M
        M = np.asarray(self._builder(j), dtype=np.int64)
        expected = (self.res.rank(j), self.res.rank(j + self.degree), self.res.algebra.dim)
        if M.shape != expected:
            raise DegreeMismatch(
                f"{self.name or 'map'} component {j} has shape {M.shape}, expected {expected}"
            )
        M.setflags(write=False)
        with self._lock:
            return self._cache.setdefault(j, M)

    __getitem__ = component

    def components(self, window: tuple[int, int]) -> dict[int, np.ndarray]:
        return {j: self.component(j) for j in range(window[0], window[1] + 1)}

    def equal_on(self, other: "GradedMap", window: tuple[int, int]) -> bool:
        if self.degree != other.degree:
            return False
        return all(
            np.array_equal(self.component(j), other.component(j))
            for j in range(window[0], window[1] + 1)
        )

    def is_zero_on(self, window: tuple[int, int]) -> bool:
        return not any(np.any(self.component(j)) for j in range(window[0], window[1] + 1))

    def dump(self, window: tuple[int, int]) -> dict[str, list[list[str]]]:
        A = self.res.algebra
        return {str(j): format_map(A, self.component(j)) for j in range(window[0], window[1] + 1)}

    def named(self, name: str) -> "GradedMap":
        self.name = name
        return self

    # algebra
    def __add__(self, other: "GradedMap") -> "GradedMap":
        return add(self, other)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return add(self, scale(other, self.res.field.sign(1)))

    def __neg__(self) -> "GradedMap":
        return scale(self, self.res.field.sign(1))

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return compose(self, other)

    def __rmul__(self, c: int) -> "GradedMap":
        return scale(self, c)

    @property
    def d(self) -> "GradedMap":
        return dga_differential(self)


# Constructors ----------------------------------------------------------------


def table(res, degree: int, comps: dict[int, np.ndarray], name: str = "") -> GradedMap:
    lo, hi = min(comps), max(comps)

    def build(j: int) -> np.ndarray:
        if j not in comps:
            raise WindowTooSmall(f"{name or 'table map'} only known on [{lo}, {hi}], asked for {j}")
        return comps[j]

    return GradedMap(res, degree, build, name)


def periodic(res, degree: int, comps: Sequence[np.ndarray], name: str = "") -> GradedMap:
    comps = [np.asarray(c, dtype=np.int64) for c in comps]
    P = len(comps)
    return GradedMap(res, degree, lambda j: comps[j % P], name, period=P)


def rule(res, degree: int, builder: Callable[[int], np.ndarray], name: str = "", period=None) -> GradedMap:
    return GradedMap(res, degree, builder, name, period)


def zero(res, degree: int) -> GradedMap:
    A = res.algebra
    return GradedMap(
        res, degree, lambda j: zero_map(A, res.rank(j), res.rank(j + degree)), "0", period=res.period or 1
    )


def identity(res) -> GradedMap:
    return shift(res, 0)


def shift(res, degree: int, name: str = "") -> GradedMap:
    """Identity matrices P_{j+degree} -> P_j; needs a resolution periodic in degree."""
    A = res.algebra
    return GradedMap(
        res, degree, lambda j: identity_map(A, res.rank(j)), name or f"shift({degree})", period=res.period
    )


# Operations ------------------------------------------------------------------


def add(f: GradedMap, g: GradedMap) -> GradedMap:
    if f.degree != g.degree:
        raise DegreeMismatch(f"Cannot add maps of degrees {f.degree} and {g.degree}")
    field = f.res.field
    return GradedMap(
        f.res,
        f.degree,
        lambda j: field.add(f.component(j), g.component(j)),
        f"({f.name}+{g.name})",
        _combine_periods(f.period, g.period),
    )


def scale(f: GradedMap, c: int) -> GradedMap:
    field = f.res.field
    return GradedMap(
        f.res, f.degree, lambda j: field.mul(f.component(j), c), f"{c}*{f.name}", f.period
    )


def linear_combination(res, degree: int, terms: Sequence[tuple[int, GradedMap]]) -> GradedMap:
    """sum c_i f_i, skipping zero coefficients."""
    field = res.field
    terms = [(int(c), f) for c, f in terms if int(c) != 0]
    if not terms:
        return zero(res, degree)
    for _, f in terms:
        if f.degree != degree:
            raise DegreeMismatch(f"Term {f.name} has degree {f.degree}, expected {degree}")
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]

    def build(j: int) -> np.ndarray:
        acc = zero_map(res.algebra, res.rank(j), res.rank(j + degree))
        for c, f in terms:
            acc = field.add(acc, field.mul(f.component(j), c))
        return acc

    return GradedMap(res, degree, build, "+".join(f.name for _, f in terms),
                     _combine_periods(*(f.period for _, f in terms)))


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    A = f.res.algebra
    n = f.degree
    return GradedMap(
        f.res,
        n + g.degree,
        lambda j: compose_maps(A, f.component(j), g.component(j + n)),
        f"{f.name}{g.name}",
        _combine_periods(f.period, g.period),
    )


def dga_differential(f: GradedMap) -> GradedMap:
    res = f.res
    A = res.algebra
    field = res.field
    n = f.degree
    sign = field.sign(n)

    def build(j: int) -> np.ndarray:
        left = compose_maps(A, res.differential(j + 1), f.component(j + 1))
        right = compose_maps(A, f.component(j), res.differential(j + n + 1))
        return field.sub(left, field.mul(right, sign))

    return GradedMap(res, n + 1, build, f"d({f.name})", _combine_periods(f.period, res.period))


def class_of(f: GradedMap) -> TateClass:
    """Augmentation of each entry of f_0 : P_n -> P_0; defined for any graded map."""
    A = f.res.algebra
    f0 = f.component(0)
    coords = tuple(A.augmentation(f0[0, b]) for b in range(f0.shape[1]))
    return TateClass(degree=f.degree, coords=coords)


def is_cocycle(f: GradedMap, window: tuple[int, int]) -> bool:
    return dga_differential(f).is_zero_on(window)


def is_ideal_map(f: GradedMap, spec: IdealSpec, window: tuple[int, int]) -> bool:
    A = f.res.algebra
    return all(A.entries_in_ideal(f.component(j), spec) for j in range(window[0], window[1] + 1))


def random_table(res, degree: int, window: tuple[int, int], rng: np.random.Generator, density: float = 0.3) -> GradedMap:
    """A table map with random sparse entries, for property checks."""
    field = res.field
    comps = {}
    for j in range(window[0], window[1] + 1):
        shape = (res.rank(j), res.rank(j + degree), res.algebra.dim)
        values = field.random(rng, shape)
        values[rng.random(shape) > density] = 0
        comps[j] = values
    return table(res, degree, comps, "random")


# Homotopy solving --------------------------------------------------------------


def homotopy_system(g: GradedMap, equations: Sequence[int], slot_of: Callable[[int], int]):
    """
    Sparse system for dh = g in the unknown components of h.

    ``slot_of(j)`` names the unknown standing for h_j; slots are themselves
    degrees giving the component shape. Returns (matrix, rhs, layout) where
    layout maps slot -> (offset, shape).
    """
    res = g.res
    A = res.algebra
    field = res.field
    d = A.dim
    n = g.degree
    hdeg = n - 1
    sign = field.sign(n)

    slots = sorted({slot_of(j) for j in equations} | {slot_of(j + 1) for j in equations})
    layout = {}
    offset = 0
    for s in slots:
        shape = (res.rank(s), res.rank(s + hdeg), d)
        layout[s] = (offset, shape)
        offset += int(np.prod(shape))

    rows, cols, vals, rhs = [], [], [], []
    eq_offset = 0
    for j in equations:
        L = res.rank(j + n)
        # ∂_{j+1} h_{j+1}
        D = res.differential(j + 1)
        off, (M, _, _) = layout[slot_of(j + 1)]
        i, m, x = np.nonzero(D)
        c = A.table[x]  # (nnz, d) over y
        y = np.arange(d)
        keep = (c >= 0)[:, None, :].repeat(L, axis=1)
        l = np.arange(L)[None, :, None]
        r_idx = eq_offset + (i[:, None, None] * L + l) * d + c[:, None, :]
        c_idx = off + (m[:, None, None] * L + l) * d + y[None, None, :]
        v = np.broadcast_to(D[i, m, x][:, None, None], r_idx.shape)
        rows.append(r_idx[keep]), cols.append(c_idx[keep]), vals.append(v[keep])

        # (-1)^n h_j ∂_{j+n}
        D = res.differential(j + n)
        off, (Irows, K, _) = layout[slot_of(j)]
        k, l2, a = np.nonzero(D)
        c = A.table[:, a].T  # (nnz, d) over b
        b = np.arange(d)
        keep = (c >= 0)[:, None, :].repeat(Irows, axis=1)
        ii = np.arange(Irows)[None, :, None]
        r_idx = eq_offset + (ii * L + l2[:, None, None]) * d + c[:, None, :]
        c_idx = off + (ii * K + k[:, None, None]) * d + b[None, None, :]
        v = np.broadcast_to(field.mul(D[k, l2, a], sign)[:, None, None], r_idx.shape)
        rows.append(r_idx[keep]), cols.append(c_idx[keep]), vals.append(v[keep])

        gj = g.component(j)
        rhs.append(gj.ravel())
        eq_offset += gj.size

    matrix = coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(eq_offset, offset),
    )
    return matrix, np.concatenate(rhs), layout


def unpack(solution: np.ndarray, layout: dict) -> dict[int, np.ndarray]:
    return {s: solution[off : off + int(np.prod(shape))].reshape(shape) for s, (off, shape) in layout.items()}


def find_homotopy(g: GradedMap, periods: Optional[Sequence[int]] = None) -> GradedMap:
    """
    Periodic h with dh = g, trying the given periods (default P, 2P, 4P).

    Raises Infeasible when no tried period admits a solution, which does not
    prove that g is not null-homotopic.
    """
    res = g.res
    if res.period is None:
        raise Infeasible(f"{res} is not periodic")
    P = res.period
    periods = periods or [P, 2 * P, 4 * P]
    for Q in periods:
        if g.period is not None and Q % g.period:
            continue
        matrix, rhs, layout = homotopy_system(g, range(Q), lambda j, Q=Q: j % Q)
        x = BlockSolver(res.field, matrix).solve(rhs)
        if x is None:
            logger.info(f"No {Q}-periodic homotopy for {g.name}")
            continue
        comps = unpack(x, layout)
        logger.info(f"Found {Q}-periodic homotopy for {g.name}")
        return periodic(res, g.degree - 1, [comps[j] for j in range(Q)], f"h({g.name})")
    raise Infeasible(f"No periodic homotopy for {g.name} with periods {list(periods)}")
