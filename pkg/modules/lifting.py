"""Null-homotopies built one component at a time by projective lifting.

For a degree-n map the entries of Hom(P_{k+n}, P_k) split as A_k + B_k and
those of Hom(P_{k+n-1}, P_k) as C_k + D_k, entry by entry, according to the
monomial sets ℐ_{α,β} and 𝒥_{α,β} below. Pre- and post-composition with ∂
respect the splitting, so a free lift projected to C stays a lift; elements of
C are I-maps because 1 always lies in ℐ.

Writing [a] for 1 when a is odd and m_i - 1 when a is even:

    ℐ_{α,β} = { prod_{s in S} z_s^{[α_s+1]-[β_s+1]} : [α_s+1] >= [β_s+1] for s in S }
    𝒥_{α,β} = { z_j^ν z : z in ℐ_{α,β}, ν in {[α_j+1], [β_j]}, z_j does not divide z }

Both sets only depend on the parities of α and β.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from itertools import combinations
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from helpers import settings
from helpers.errors import Infeasible, NoLift, NotACocycle, NotJ2Map, PositiveDegree
from helpers.linalg import BlockSolver, solve
from modules.graded_map import GradedMap, homotopy_system, is_cocycle, is_ideal_map, rule
from modules.group_algebra import J
from modules.module_map import (
    columns_as_rhs,
    compose,
    flat_right,
    rhs_to_columns,
    rhs_to_rows,
    rows_as_rhs,
    zero_map,
)

logger = logging.getLogger(__name__)


def bracket(a: int, m: int) -> int:
    return 1 if a % 2 else m - 1


class MonomialSplit(BaseModel):
    """ℐ_{α,β} (``inner``) and 𝒥_{α,β} (``outer``) as sets of exponent vectors."""

    model_config = ConfigDict(frozen=True)

    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    inner: frozenset[tuple[int, ...]]
    outer: frozenset[tuple[int, ...]]


def monomial_split(algebra, alpha, beta) -> MonomialSplit:
    ms = algebra.exponents
    r = len(ms)
    alpha, beta = tuple(alpha), tuple(beta)
    eligible = [s for s in range(r) if bracket(alpha[s] + 1, ms[s]) >= bracket(beta[s] + 1, ms[s])]
    inner = set()
    for size in range(len(eligible) + 1):
        for S in combinations(eligible, size):
            e = [0] * r
            for s in S:
                e[s] = bracket(alpha[s] + 1, ms[s]) - bracket(beta[s] + 1, ms[s])
            inner.add(tuple(e))
    outer = set()
    for z in inner:
        for j in range(r):
            if z[j]:
                continue
            for nu in (bracket(alpha[j] + 1, ms[j]), bracket(beta[j], ms[j])):
                outer.add(z[:j] + (nu,) + z[j + 1 :])
    return MonomialSplit(alpha=alpha, beta=beta, inner=frozenset(inner), outer=frozenset(outer))


def _times(algebra, monomials, i: int, e: int) -> tuple[set, bool]:
    """z_i^e * monomials, and whether some product vanished."""
    out, vanished = set(), False
    m = algebra.exponents[i]
    for z in monomials:
        if z[i] + e >= m:
            vanished = True
            continue
        out.add(z[:i] + (z[i] + e,) + z[i + 1 :])
    return out, vanished


def splitting_claims(algebra, alpha, beta, i: int) -> dict[str, bool]:
    """
    The inclusions behind the splitting, for one slot i (0-based).

    (i)/(ii) describe ∂ entering from the source side, (I)/(II) from the target
    side, (iii)/(III) the splice map ∂_0; ``pivot`` is [β_i]-[α_i+1] = [α_i+2]-[β_i+1].
    """
    ms = algebra.exponents
    monomials = set(algebra.basis)
    alpha, beta = tuple(alpha), tuple(beta)
    m = ms[i]
    e_i = tuple(1 if s == i else 0 for s in range(len(ms)))
    here = monomial_split(algebra, alpha, beta)
    left = monomial_split(algebra, alpha, tuple(b - e for b, e in zip(beta, e_i)))
    up = monomial_split(algebra, tuple(a + e for a, e in zip(alpha, e_i)), beta)
    b_i, a_i1 = bracket(beta[i], m), bracket(alpha[i] + 1, m)
    complement = monomials - here.outer
    unit = (0,) * len(ms)
    return {
        "i": _times(algebra, left.inner, i, b_i)[0] <= here.outer,
        "ii": _times(algebra, monomials - left.inner, i, b_i)[0] <= complement,
        "iii": unit in here.inner,
        "I": _times(algebra, up.inner, i, a_i1)[0] <= here.outer,
        "II": _times(algebra, monomials - up.inner, i, a_i1)[0] <= complement,
        "III": unit in here.inner,
        "pivot": b_i - a_i1 == bracket(alpha[i] + 2, m) - bracket(beta[i] + 1, m),
    }


def _multi_index(res, degree: int, label) -> tuple[int, ...]:
    return label if isinstance(label, tuple) else (degree,)


@lru_cache(maxsize=4096)
def _parity_masks(algebra, alpha_parity: tuple, beta_parity: tuple) -> tuple[np.ndarray, np.ndarray]:
    split = monomial_split(algebra, alpha_parity, beta_parity)
    inner = np.array([b in split.inner for b in algebra.basis])
    outer = np.array([b in split.outer for b in algebra.basis])
    return inner, outer


@lru_cache(maxsize=1024)
def split_masks(res, target_degree: int, source_degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean arrays (rows, cols, dim) marking ℐ and 𝒥 monomials entry by entry."""
    A = res.algebra
    targets = res.labels(target_degree)
    sources = res.labels(source_degree)
    inner = np.zeros((len(targets), len(sources), A.dim), dtype=bool)
    outer = np.zeros_like(inner)
    for a, alpha in enumerate(targets):
        # parity, shifted into {2, 3} so that [a] and [a+1] are unchanged
        ap = tuple(2 + x % 2 for x in _multi_index(res, target_degree, alpha))
        for b, beta in enumerate(sources):
            bp = tuple(2 + x % 2 for x in _multi_index(res, source_degree, beta))
            inner[a, b], outer[a, b] = _parity_masks(A, ap, bp)
    inner.setflags(write=False)
    outer.setflags(write=False)
    return inner, outer


def project_to_C(res, h: np.ndarray, target_degree: int, source_degree: int) -> np.ndarray:
    """Drop the ℐ monomials of every entry of h : P_source -> P_target."""
    inner, _ = split_masks(res, target_degree, source_degree)
    out = np.array(h, dtype=np.int64, copy=True)
    out[inner] = 0
    return out


def in_A(res, g: np.ndarray, target_degree: int, source_degree: int) -> bool:
    _, outer = split_masks(res, target_degree, source_degree)
    return not np.any(np.asarray(g)[outer])


def in_B(res, g: np.ndarray, target_degree: int, source_degree: int) -> bool:
    _, outer = split_masks(res, target_degree, source_degree)
    return not np.any(np.asarray(g)[~outer])


def in_C(res, h: np.ndarray, target_degree: int, source_degree: int) -> bool:
    inner, _ = split_masks(res, target_degree, source_degree)
    return not np.any(np.asarray(h)[inner])


def in_D(res, h: np.ndarray, target_degree: int, source_degree: int) -> bool:
    inner, _ = split_masks(res, target_degree, source_degree)
    return not np.any(np.asarray(h)[~inner])


def _ideal_columns(res, degree: int) -> list[int]:
    A = res.algebra
    d = A.dim
    return [j * d + b for j in range(res.rank(degree)) for b in range(d) if b != A.unit]


def lift_step_positive(res, g: np.ndarray, k: int, source: int, project: bool = True) -> np.ndarray:
    """
    h : P_source -> P_{k+1} with ∂_{k+1} o h = g.

    With ``project`` the free lift is projected to C_{k+1}; if the projection
    is no longer a lift, an I-constrained solve is tried before giving up.
    """
    A = res.algebra
    d = A.dim
    rows = res.rank(k + 1)
    rhs = columns_as_rhs(g)
    X = res.post_solver(k + 1).solve(rhs)
    if X is None:
        raise NoLift(f"No lift through ∂_{k + 1} for a map from P_{source}")
    h = rhs_to_columns(X, rows, d)
    if not project:
        return h
    h = project_to_C(res, h, k + 1, source)
    if np.array_equal(compose(A, res.differential(k + 1), h), g):
        return h
    logger.warning(f"Projected lift fails at ∂_{k + 1} (source P_{source}); solving with I-constraint")
    X = res.post_solver(k + 1, _ideal_columns(res, k + 1)).solve(rhs)
    if X is None:
        raise NoLift(f"No I-map lift through ∂_{k + 1} for a map from P_{source}")
    return rhs_to_columns(X, rows, d)


def lift_step_negative(res, g: np.ndarray, k: int, source: int, project: bool = True) -> np.ndarray:
    """h : P_{source-1} -> P_k with h o ∂_source = g, mirrored from the positive step."""
    A = res.algebra
    d = A.dim
    inner = res.rank(source - 1)
    rhs = rows_as_rhs(g)
    X = res.pre_solver(source).solve(rhs)
    if X is None:
        raise NoLift(f"No extension along ∂_{source} for a map into P_{k}")
    h = rhs_to_rows(X, inner, d)
    if not project:
        return h
    h = project_to_C(res, h, k, source - 1)
    if np.array_equal(compose(A, h, res.differential(source)), g):
        return h
    logger.warning(f"Projected extension fails at ∂_{source} (target P_{k}); solving with I-constraint")
    X = res.pre_solver(source, _ideal_columns(res, source - 1)).solve(rhs)
    if X is None:
        raise NoLift(f"No I-map extension along ∂_{source} for a map into P_{k}")
    return rhs_to_rows(X, inner, d)


def _two_sided(f: GradedMap, h0: np.ndarray, project: bool, name: str) -> GradedMap:
    """
    Lazy homotopy h of degree |f|-1 with dh = f, grown from h_0 in both directions:

        ∂_{k+1} h_{k+1} = f_k - (-1)^n h_k ∂_{k+n}          (k >= 0)
        h_k ∂_{k+n}     = (-1)^n (f_k - ∂_{k+1} h_{k+1})    (k < 0)
    """
    res = f.res
    A = res.algebra
    field = res.field
    n = f.degree
    sign = field.sign(n)
    h: Optional[GradedMap] = None

    def build(k: int) -> np.ndarray:
        if k == 0:
            return h0
        if k > 0:
            prev = h.component(k - 1)
            rhs = field.sub(f.component(k - 1), field.mul(compose(A, prev, res.differential(k - 1 + n)), sign))
            return lift_step_positive(res, rhs, k - 1, k - 1 + n, project)
        nxt = h.component(k + 1)
        rhs = field.mul(field.sub(f.component(k), compose(A, res.differential(k + 1), nxt)), sign)
        return lift_step_negative(res, rhs, k, k + n, project)

    h = rule(res, n - 1, build, name)
    return h


def _imap_homotopy(f: GradedMap, name: Optional[str] = None) -> GradedMap:
    """The I-map induction with h_0 = 0 and no degree or ideal precondition checks."""
    res = f.res
    h0 = zero_map(res.algebra, res.rank(0), res.rank(f.degree - 1))
    return _two_sided(f, h0, True, name or f"h({f.name})")


def null_homotopy_Imap(f: GradedMap, window: Optional[tuple[int, int]] = None) -> GradedMap:
    """
    An I-map h with dh = f for a J_2-cocycle f of non-positive degree.

    Parameters:
    -----------
    f: GradedMap
        Cocycle over an abelian product resolution.
    window: tuple
        Degrees on which the cocycle and J_2 conditions are checked (default ±TATE_WINDOW).

    Returns:
    --------
    GradedMap
        Lazily built homotopy; every component lies in C_k.
    """
    if f.degree > 0:
        raise PositiveDegree(f"I-map null-homotopies need degree <= 0, got {f.degree} for {f.name}")
    window = window or (-settings.WINDOW, settings.WINDOW)
    if not is_cocycle(f, window):
        raise NotACocycle(f"{f.name} is not a cocycle on {window}")
    if not is_ideal_map(f, J(2), window):
        raise NotJ2Map(f"{f.name} is not a J_2-map on {window}")
    return _imap_homotopy(f)


def null_homotopy(g: GradedMap, name: Optional[str] = None) -> GradedMap:
    """
    Some null-homotopy of a null-homotopic cocycle g, for any resolution.

    h_0 : P_{n-1} -> P_0 is solved from ∂_0 h_0 ∂_n = (-1)^n ∂_0 g_0, which is
    exactly what both one-sided inductions need; the rest are free lifts.
    """
    res = g.res
    A = res.algebra
    field = res.field
    d = A.dim
    n = g.degree
    if res.rank(0) != 1 or res.rank(-1) != 1:
        raise Infeasible(f"{res} does not splice through rank-one P_0, P_-1")
    c0 = res.differential(0)[0, 0]
    inner = res.rank(n - 1)
    right = flat_right(A, res.differential(n)).toarray().astype(np.int64)
    left = np.kron(np.eye(res.rank(n), dtype=np.int64), A.left_matrix(c0))
    system = field.matmul(left, right)
    target = field.mul(compose(A, res.differential(0), g.component(0)), field.sign(n))
    x = solve(field, system, rows_as_rhs(target)[:, 0])
    if x is None:
        raise Infeasible(f"{g.name} is not null-homotopic: no h_0 with ∂_0 h_0 ∂_{n} = ±∂_0 {g.name}_0")
    h0 = rhs_to_rows(x[:, None], inner, d)
    return _two_sided(g, h0, False, name or f"h({g.name})")


def imap_homotopy_exists(g: GradedMap, window: tuple[int, int]) -> bool:
    """Whether dh = g has an I-map solution on the equations of the window."""
    res = g.res
    A = res.algebra
    d = A.dim
    matrix, rhs, layout = homotopy_system(g, range(window[0], window[1]), lambda j: j)
    columns = [
        off + c
        for off, shape in layout.values()
        for c in range(int(np.prod(shape)))
        if c % d != A.unit
    ]
    feasible = BlockSolver(res.field, matrix, columns).solve(rhs) is not None
    logger.info(f"I-map homotopy for {g.name} on {window}: {'feasible' if feasible else 'infeasible'}")
    return feasible
