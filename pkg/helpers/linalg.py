"""Exact linear algebra over the supported finite fields.

Row reduction works on integer numpy arrays through the field's vectorized
arithmetic. Large sparse systems are first split into independent blocks with
``scipy.sparse.csgraph.connected_components`` and each block is reduced
densely, which keeps multigraded systems cheap.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import bmat, csr_matrix, issparse
from scipy.sparse.csgraph import connected_components

logger = logging.getLogger(__name__)


def rref(field, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """
    Reduced row echelon form of M over the field.

    Returns the reduced matrix and the list of pivot columns.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2 or R.size == 0:
        return R, []
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r, c:] = field.mul(R[r, c:], field.inv(R[r, c]))
        col = R[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            R[others, c:] = field.sub(
                R[others, c:], field.mul(col[others, None], R[r, c:][None, :])
            )
        pivots.append(c)
        r += 1
    return R, pivots


def rank(field, M: np.ndarray) -> int:
    return len(rref(field, M)[1])


def nullspace(field, M: np.ndarray) -> np.ndarray:
    """Basis of {v : M v = 0}, one vector per row."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, pivots = rref(field, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = field.neg(R[row, f])
    return basis


def row_space(field, M: np.ndarray) -> np.ndarray:
    """Reduced basis of the row space."""
    R, pivots = rref(field, M)
    return R[: len(pivots)]


def solve(field, A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """One solution x of A x = b, or None when the system is inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    rows, cols = A.shape
    if rows == 0:
        return np.zeros(cols, dtype=np.int64)
    R, pivots = rref(field, np.hstack([A, b.reshape(-1, 1)]))
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, cols]
    return x


def in_span(field, basis: np.ndarray, v: np.ndarray) -> bool:
    """Whether v lies in the span of the rows of basis."""
    v = np.asarray(v, dtype=np.int64).ravel()
    if not np.any(v):
        return True
    basis = np.asarray(basis, dtype=np.int64).reshape(-1, v.size)
    if basis.shape[0] == 0:
        return False
    return solve(field, basis.T, v) is not None


def inverse(field, M: np.ndarray) -> Optional[np.ndarray]:
    """M^{-1} for a square matrix, or None when M is singular."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return None
    T, pivots = _transform(field, M)
    return T if len(pivots) == M.shape[0] else None


def _transform(field, block: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """T with T @ block in reduced echelon form, plus its pivots."""
    m = block.shape[0]
    R, pivots = rref(field, np.hstack([block, np.eye(m, dtype=np.int64)]))
    ncols = block.shape[1]
    pivots = [c for c in pivots if c < ncols]
    return R[:, ncols:], pivots


class BlockSolver:
    """
    Factorizes a (sparse) system A x = b once for repeated right-hand sides.

    Args:
        field: coefficient field
        A: matrix of field elements, dense or scipy sparse
        columns: optional subset of unknowns allowed to be nonzero
    """

    def __init__(self, field, A, columns: Optional[Sequence[int]] = None):
        self.field = field
        A = csr_matrix(A) if not issparse(A) else A.tocsr()
        A.eliminate_zeros()
        self.shape = A.shape
        self.columns = None if columns is None else np.asarray(columns, dtype=np.int64)
        if self.columns is not None:
            A = A[:, self.columns]
        m, n = A.shape
        pattern = csr_matrix((np.ones(A.nnz), A.indices, A.indptr), shape=A.shape)
        adjacency = bmat([[None, pattern], [pattern.T, None]], format="csr") if m and n else None
        if adjacency is not None:
            _, labels = connected_components(adjacency, directed=False)
        else:
            labels = np.arange(m + n)
        row_labels, col_labels = labels[:m], labels[m:]

        row_order = np.argsort(row_labels, kind="stable")
        col_order = np.argsort(col_labels, kind="stable")
        row_groups = np.split(row_order, np.flatnonzero(np.diff(row_labels[row_order])) + 1) if m else []
        col_groups = {
            int(col_labels[g[0]]): g
            for g in (np.split(col_order, np.flatnonzero(np.diff(col_labels[col_order])) + 1) if n else [])
        }

        self.blocks = []
        zero_rows = []
        self.rank = 0
        for rows in row_groups:
            cols = col_groups.get(int(row_labels[rows[0]]))
            if cols is None:
                zero_rows.append(rows)
                continue
            dense = A[rows][:, cols].toarray().astype(np.int64)
            T, pivots = _transform(field, dense)
            self.blocks.append((rows, cols, T, pivots))
            self.rank += len(pivots)
        self.zero_rows = np.concatenate(zero_rows) if zero_rows else np.zeros(0, dtype=np.int64)
        logger.debug(f"BlockSolver {self.shape}: {len(self.blocks)} blocks, rank {self.rank}")

    def solve(self, B: np.ndarray) -> Optional[np.ndarray]:
        """Solution of A X = B (B may hold several columns), or None if infeasible."""
        B = np.asarray(B, dtype=np.int64)
        single = B.ndim == 1
        if single:
            B = B[:, None]
        n = self.shape[1] if self.columns is None else len(self.columns)
        X = np.zeros((n, B.shape[1]), dtype=np.int64)
        if self.zero_rows.size and np.any(B[self.zero_rows]):
            return None
        for rows, cols, T, pivots in self.blocks:
            TB = self.field.matmul(T, B[rows])
            r = len(pivots)
            if np.any(TB[r:]):
                return None
            X[cols[pivots]] = TB[:r]
        if self.columns is not None:
            full = np.zeros((self.shape[1], B.shape[1]), dtype=np.int64)
            full[self.columns] = X
            X = full
        return X[:, 0] if single else X
