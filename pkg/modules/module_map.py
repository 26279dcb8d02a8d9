"""Maps between free modules over a group algebra.

A module map P -> Q is an integer array of shape (rank Q, rank P, dim): entry
[i, j] is the algebra element multiplying target basis element i in the image
of source basis element j, multiplication from the left. Composition is
(A o B)[i, k] = sum_j A[i, j] * B[j, k].
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix

from helpers.errors import AlgebraMismatch


def zero_map(algebra, rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols, algebra.dim), dtype=np.int64)


def identity_map(algebra, rank: int) -> np.ndarray:
    M = zero_map(algebra, rank, rank)
    M[np.arange(rank), np.arange(rank), algebra.unit] = 1
    return M


def compose(algebra, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """A o B for A: Q -> R and B: P -> Q."""
    if A.shape[1] != B.shape[0]:
        raise AlgebraMismatch(f"Cannot compose maps of shapes {A.shape} and {B.shape}")
    f = algebra.field
    rows, inner, d = A.shape
    cols = B.shape[1]
    C = np.zeros((rows, cols * d), dtype=np.int64)
    if rows == 0 or cols == 0 or inner == 0:
        return C.reshape(rows, cols, d)
    B_pad = np.concatenate([B, np.zeros((inner, cols, 1), dtype=np.int64)], axis=2)
    for x in np.flatnonzero(A.reshape(-1, d).any(axis=0)):
        shifted = B_pad[:, :, algebra.ldiv[x]].reshape(inner, cols * d)
        C = f.add(C, f.matmul(A[:, :, x], shifted))
    return C.reshape(rows, cols, d)


def flat_left(algebra, M: np.ndarray) -> coo_matrix:
    """k-matrix of h -> M o h acting on one column of h (indices j*dim + b)."""
    rows, cols, d = M.shape
    i, j, x = np.nonzero(M)
    values = M[i, j, x]
    c = algebra.table[x]  # (nnz, d): x * b for every b
    b = np.broadcast_to(np.arange(d), c.shape)
    keep = c >= 0
    r_idx = (i[:, None] * d + c)[keep]
    c_idx = (j[:, None] * d + b)[keep]
    data = np.broadcast_to(values[:, None], c.shape)[keep]
    return coo_matrix((data, (r_idx, c_idx)), shape=(rows * d, cols * d))


def flat_right(algebra, D: np.ndarray) -> coo_matrix:
    """k-matrix of h -> h o D acting on one row of h (indices j*dim + b)."""
    inner, cols, d = D.shape
    j, l, a = np.nonzero(D)
    values = D[j, l, a]
    c = algebra.table[:, a].T  # (nnz, d): b * a for every b
    b = np.broadcast_to(np.arange(d), c.shape)
    keep = c >= 0
    r_idx = (l[:, None] * d + c)[keep]
    c_idx = (j[:, None] * d + b)[keep]
    data = np.broadcast_to(values[:, None], c.shape)[keep]
    return coo_matrix((data, (r_idx, c_idx)), shape=(cols * d, inner * d))


def columns_as_rhs(g: np.ndarray) -> np.ndarray:
    """Right-hand sides for post-composition solves, one column per source label."""
    rows, cols, d = g.shape
    return g.transpose(0, 2, 1).reshape(rows * d, cols)


def rhs_to_columns(X: np.ndarray, rows: int, d: int) -> np.ndarray:
    cols = X.shape[1]
    return X.reshape(rows, d, cols).transpose(0, 2, 1)


def rows_as_rhs(g: np.ndarray) -> np.ndarray:
    """Right-hand sides for pre-composition solves, one column per target label."""
    rows, cols, d = g.shape
    return g.reshape(rows, cols * d).T


def rhs_to_rows(X: np.ndarray, cols: int, d: int) -> np.ndarray:
    rows = X.shape[1]
    return X.T.reshape(rows, cols, d)


def format_map(algebra, M: np.ndarray) -> list[list[str]]:
    return [[algebra.format(M[i, j]) for j in range(M.shape[1])] for i in range(M.shape[0])]


def parse_map(algebra, rows: list[list[str]]) -> np.ndarray:
    M = zero_map(algebra, len(rows), len(rows[0]) if rows else 0)
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            M[i, j] = algebra.parse(entry)
    return M
