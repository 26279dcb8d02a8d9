"""Ordinary and matric Massey triple products over the named Tate ring.

For lifts with dT̄ = W̄X̄ and dŪ = X̄Ȳ (entrywise, as matrices of graded maps)
the representative is the class matrix of T̄Ȳ - W̄[1]Ū, where W̄[1] carries the
sign (-1)^{|W_{νμ}|} per entry. Indeterminacy subspaces are spanned explicitly
inside the finite-dimensional graded pieces, so contains_zero is one exact
linear solve.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, model_validator

from helpers.errors import DegreeMismatch, Infeasible, NotDefined
from helpers.linalg import in_span, row_space
from helpers.serialization import CheckReport, MasseyReport
from modules.graded_map import GradedMap, compose, linear_combination
from modules.lifting import null_homotopy
from modules.named_ring import NamedRing, RingElement
from modules.secondary import HomotopySelection

logger = logging.getLogger(__name__)


class GradedMatrix(BaseModel):
    """
    Matrix of named ring elements between sums of shifted free modules.

    Entry (ν, μ) has degree cols[μ] - rows[ν].
    """

    rows: list[int]
    cols: list[int]
    entries: list[list[RingElement]]

    @model_validator(mode="after")
    def _check_degrees(self):
        if len(self.entries) != len(self.rows) or any(len(r) != len(self.cols) for r in self.entries):
            raise DegreeMismatch(f"Matrix shape does not match shifts {self.rows} x {self.cols}")
        for nu, row in enumerate(self.entries):
            for mu, e in enumerate(row):
                if e.degree != self.cols[mu] - self.rows[nu]:
                    raise DegreeMismatch(
                        f"Entry ({nu},{mu}) has degree {e.degree}, expected {self.cols[mu] - self.rows[nu]}"
                    )
        return self

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @classmethod
    def from_strings(cls, ring: NamedRing, texts: Sequence[Sequence[str]], rows: Sequence[int], cols: Sequence[int]):
        entries = []
        for nu, row in enumerate(texts):
            out = []
            for mu, text in enumerate(row):
                degree = cols[mu] - rows[nu]
                out.append(ring.zero(degree) if text.strip() == "0" else ring.parse(text))
            entries.append(out)
        return cls(rows=list(rows), cols=list(cols), entries=entries)

    @classmethod
    def uniform(cls, ring: NamedRing, texts: Sequence[Sequence[str]], degree: int):
        """All entries of one degree."""
        return cls.from_strings(ring, texts, [0] * len(texts), [degree] * len(texts[0]))

    @classmethod
    def scalar(cls, a: RingElement):
        return cls(rows=[0], cols=[a.degree], entries=[[a]])

    def format(self, ring: NamedRing) -> list[list[str]]:
        return [[ring.format(e) for e in row] for row in self.entries]


class MasseyResult(BaseModel):
    inputs: list[str]
    degree: int
    representative: list[list[RingElement]]
    indeterminacy: list[list[list[RingElement]]]
    contains_zero: bool

    def report(self, ring: NamedRing, note: Optional[str] = None) -> MasseyReport:
        return MasseyReport(
            inputs=self.inputs,
            degree=self.degree,
            representative=[[ring.format(e) for e in row] for row in self.representative],
            indeterminacy=[[[ring.format(e) for e in row] for row in M] for M in self.indeterminacy],
            indeterminacy_dimension=len(self.indeterminacy),
            contains_zero=self.contains_zero,
            note=note,
        )


# Matrix helpers ----------------------------------------------------------------------


def mat_mul(ring: NamedRing, A: list[list[RingElement]], B: list[list[RingElement]]) -> list[list[RingElement]]:
    out = []
    for row in A:
        new_row = []
        for lam in range(len(B[0])):
            acc = ring.zero(row[0].degree + B[0][lam].degree)
            for mu, a in enumerate(row):
                acc = ring.add(acc, ring.multiply(a, B[mu][lam]))
            new_row.append(acc)
        out.append(new_row)
    return out


def is_zero_matrix(M: list[list[RingElement]]) -> bool:
    return all(e.is_zero() for row in M for e in row)


def flatten(M: list[list[RingElement]]) -> np.ndarray:
    return np.array([c for row in M for e in row for c in e.coords], dtype=np.int64)


def unflatten(ring: NamedRing, v: np.ndarray, template: list[list[RingElement]]) -> list[list[RingElement]]:
    out, offset = [], 0
    for row in template:
        new_row = []
        for e in row:
            size = len(e.coords)
            new_row.append(RingElement(degree=e.degree, coords=tuple(int(c) for c in v[offset : offset + size])))
            offset += size
        out.append(new_row)
    return out


def _elementary(ring: NamedRing, shape: tuple[int, int], degrees: list[list[int]]):
    """Every matrix with a single basis element in one entry, entry degrees given."""
    rows, cols = shape
    for i in range(rows):
        for j in range(cols):
            for key in ring.basis(degrees[i][j]):
                E = [[ring.zero(degrees[a][b]) for b in range(cols)] for a in range(rows)]
                E[i][j] = ring.element(key)
                yield E


def _span(ring: NamedRing, directions: list, template) -> list:
    field = ring.field
    if not directions:
        return []
    basis = row_space(field, np.vstack([flatten(D) for D in directions]))
    return [unflatten(ring, v, template) for v in basis]


def contains_zero(ring: NamedRing, representative, indeterminacy) -> bool:
    """Whether the representative lies in the span of the indeterminacy matrices."""
    target = flatten(representative)
    basis = np.array([flatten(D) for D in indeterminacy], dtype=np.int64).reshape(-1, target.size)
    return in_span(ring.field, basis, target)


# Lifts -------------------------------------------------------------------------------


def _lift(ring: NamedRing, g: GradedMap, f2: Optional[HomotopySelection], a=None, b=None) -> GradedMap:
    """A map T with dT = g, from f2 when the product comes from a stored pair."""
    if f2 is not None and a is not None:
        return f2.of(a, b)
    try:
        return null_homotopy(g)
    except Infeasible as e:
        logger.error(f"Cannot lift {g.name}: {str(e)}")
        raise NotDefined(f"{g.name} is not null-homotopic") from e


def _entry_map(ring: NamedRing, terms: list[tuple[int, GradedMap]], degree: int) -> GradedMap:
    return linear_combination(ring.res, degree, terms)


# Products ---------------------------------------------------------------------------


def triple_massey(
    ring: NamedRing,
    a: RingElement,
    b: RingElement,
    c: RingElement,
    f2: Optional[HomotopySelection] = None,
    T: Optional[GradedMap] = None,
    U: Optional[GradedMap] = None,
) -> MasseyResult:
    """
    ⟨a, b, c⟩ as representative plus indeterminacy a·Êxt^{|b|+|c|-1} + Êxt^{|a|+|b|-1}·c.

    Parameters:
    -----------
    ring: NamedRing
        The Tate ring of the group.
    a, b, c: RingElement
        Homogeneous classes with ab = 0 and bc = 0.
    f2: HomotopySelection
        Used for T and U when given; otherwise homotopies are solved.
    T, U: GradedMap
        Explicit lifts with dT = f1(a)f1(b) and dU = f1(b)f1(c).
    """
    if not ring.multiply(a, b).is_zero() or not ring.multiply(b, c).is_zero():
        names = ", ".join(ring.format(e) for e in (a, b, c))
        raise NotDefined(f"⟨{names}⟩ needs ab = 0 and bc = 0")
    fa, fb, fc = (ring.representative(e) for e in (a, b, c))
    field = ring.field
    if T is None:
        T = _lift(ring, compose(fa, fb), f2, a, b)
    if U is None:
        U = _lift(ring, compose(fb, fc), f2, b, c)
    degree = a.degree + b.degree + c.degree - 1
    B = _entry_map(ring, [(1, compose(T, fc)), (field.neg(field.sign(a.degree)), compose(fa, U))], degree)
    rep = [[ring.class_of(B)]]
    directions = [
        [[ring.multiply(a, ring.element(k))]] for k in ring.basis(b.degree + c.degree - 1)
    ] + [
        [[ring.multiply(ring.element(k), c)]] for k in ring.basis(a.degree + b.degree - 1)
    ]
    indeterminacy = _span(ring, directions, rep)
    result = MasseyResult(
        inputs=[ring.format(e) for e in (a, b, c)],
        degree=degree,
        representative=rep,
        indeterminacy=indeterminacy,
        contains_zero=contains_zero(ring, rep, indeterminacy),
    )
    logger.info(f"⟨{', '.join(result.inputs)}⟩ = {ring.format(rep[0][0])} (indeterminacy {len(indeterminacy)})")
    return result


def _lift_matrix(ring: NamedRing, A: GradedMatrix, B: GradedMatrix) -> list[list[GradedMap]]:
    field = ring.field
    one = field.sign(0)
    lifts = []
    for nu in range(A.shape[0]):
        row = []
        for lam in range(B.shape[1]):
            degree = A.entries[nu][0].degree + B.entries[0][lam].degree
            terms = [
                (one, compose(ring.representative(A.entries[nu][mu]), ring.representative(B.entries[mu][lam])))
                for mu in range(A.shape[1])
            ]
            row.append(_lift(ring, _entry_map(ring, terms, degree), None))
        lifts.append(row)
    return lifts


def matric_massey(
    ring: NamedRing,
    W: GradedMatrix,
    X: GradedMatrix,
    Y: GradedMatrix,
    T: Optional[list[list[GradedMap]]] = None,
    U: Optional[list[list[GradedMap]]] = None,
) -> MasseyResult:
    """
    ⟨W, X, Y⟩ with indeterminacy W·Mat + Mat·Y.

    T and U may be given as matrices of graded maps with dT = W̄X̄ and dU = X̄Ȳ;
    missing ones are solved entrywise.
    """
    if not is_zero_matrix(mat_mul(ring, W.entries, X.entries)) or not is_zero_matrix(mat_mul(ring, X.entries, Y.entries)):
        raise NotDefined("Matric Massey product needs WX = 0 and XY = 0")
    field = ring.field
    T = T or _lift_matrix(ring, W, X)
    U = U or _lift_matrix(ring, X, Y)
    rows, cols = W.shape[0], Y.shape[1]
    rep = []
    for nu in range(rows):
        row = []
        for lam in range(cols):
            degree = W.entries[nu][0].degree + X.entries[0][0].degree + Y.entries[0][lam].degree - 1
            terms = [(1, compose(T[nu][mu], ring.representative(Y.entries[mu][lam]))) for mu in range(Y.shape[0])]
            terms += [
                (field.neg(field.sign(W.entries[nu][mu].degree)), compose(ring.representative(W.entries[nu][mu]), U[mu][lam]))
                for mu in range(W.shape[1])
            ]
            row.append(ring.class_of(_entry_map(ring, terms, degree)))
        rep.append(row)

    # W·Q with Q of shape (cols W) x (cols Y), and R·Y with R of shape (rows W) x (rows Y)
    q_degrees = [[rep[0][lam].degree - W.entries[0][mu].degree for lam in range(cols)] for mu in range(W.shape[1])]
    r_degrees = [[rep[nu][0].degree - Y.entries[s][0].degree for s in range(Y.shape[0])] for nu in range(rows)]
    directions = [mat_mul(ring, W.entries, Q) for Q in _elementary(ring, (W.shape[1], cols), q_degrees)]
    directions += [mat_mul(ring, R, Y.entries) for R in _elementary(ring, (rows, Y.shape[0]), r_degrees)]
    indeterminacy = _span(ring, directions, rep)
    result = MasseyResult(
        inputs=[str(M.format(ring)) for M in (W, X, Y)],
        degree=rep[0][0].degree,
        representative=rep,
        indeterminacy=indeterminacy,
        contains_zero=contains_zero(ring, rep, indeterminacy),
    )
    logger.info(f"Matric Massey product: indeterminacy {len(indeterminacy)}, contains zero {result.contains_zero}")
    return result


def juggling_check(
    ring: NamedRing, W: GradedMatrix, X: GradedMatrix, Y: GradedMatrix, Z: GradedMatrix
) -> CheckReport:
    """
    W⟨X, Y, Z⟩ = (-1)^(|W|+1) ⟨W, X, Y⟩Z as cosets of W·Mat·Z.

    The sign follows from the representative TY - (-1)^|W| WU; the detail names it.
    """
    field = ring.field
    sign = field.sign(W.entries[0][0].degree + 1)
    left = mat_mul(ring, W.entries, matric_massey(ring, X, Y, Z).representative)
    right = mat_mul(ring, matric_massey(ring, W, X, Y).representative, Z.entries)
    degrees = [
        [left[0][0].degree - W.entries[0][mu].degree - Z.entries[s][0].degree for s in range(Z.shape[0])]
        for mu in range(W.shape[1])
    ]
    common = [
        mat_mul(ring, mat_mul(ring, W.entries, E), Z.entries)
        for E in _elementary(ring, (W.shape[1], Z.shape[0]), degrees)
    ]
    basis = np.array([flatten(D) for D in common], dtype=np.int64).reshape(-1, flatten(left).size)
    difference = field.sub(flatten(left), field.mul(flatten(right), sign))
    logger.info(f"Juggling with expected sign {field.format(sign)} over {len(common)} common directions")
    if in_span(field, basis, difference):
        return CheckReport(name="juggling", passed=True, detail=f"sign {field.format(sign)}")
    return CheckReport(name="juggling", passed=False, failures=[f"cosets differ at sign {field.format(sign)}"])


def trace(ring: NamedRing, M: list[list[RingElement]]) -> RingElement:
    out = M[0][0]
    for i in range(1, len(M)):
        out = ring.add(out, M[i][i])
    return out
