import numpy as np

from helpers.linalg import BlockSolver, in_span, inverse, nullspace, rank, row_space, rref, solve


def test_rref_and_rank(f3):
    M = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    R, pivots = rref(f3, M)
    # second row is twice the first over F3
    assert pivots == [0, 2]
    assert rank(f3, M) == 2
    assert np.array_equal(R[0], [1, 2, 0])


def test_nullspace_is_killed(f3):
    M = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    N = nullspace(f3, M)
    assert N.shape == (1, 3)
    assert not np.any(f3.matmul(M, N.T))


def test_solve_and_inconsistency(f3):
    A = np.array([[1, 1], [0, 1]])
    x = solve(f3, A, np.array([2, 1]))
    assert np.array_equal(f3.matmul(A, x[:, None])[:, 0], [2, 1])
    B = np.array([[1, 1], [2, 2]])
    assert solve(f3, B, np.array([1, 0])) is None


def test_in_span(f4):
    basis = np.array([[1, 2, 0]])
    assert in_span(f4, basis, f4.mul(basis[0], 3))
    assert not in_span(f4, basis, np.array([0, 0, 1]))
    assert in_span(f4, np.zeros((0, 3)), np.zeros(3))


def test_inverse(f4):
    M = np.array([[1, 2], [0, 3]])
    Minv = inverse(f4, M)
    assert np.array_equal(f4.matmul(M, Minv), np.eye(2, dtype=np.int64))
    assert inverse(f4, np.array([[1, 1], [1, 1]])) is None


def test_row_space_rank(f2):
    M = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert row_space(f2, M).shape == (2, 3)


def test_block_solver_splits_blocks(f3):
    # two independent 1x1 blocks and a zero row
    A = np.array([[2, 0, 0], [0, 0, 0], [0, 0, 1]])
    solver = BlockSolver(f3, A)
    assert solver.rank == 2
    assert len(solver.blocks) == 2
    x = solver.solve(np.array([1, 0, 2]))
    assert np.array_equal(f3.matmul(A, x[:, None])[:, 0], [1, 0, 2])
    assert solver.solve(np.array([0, 1, 0])) is None


def test_block_solver_column_subset(f2):
    A = np.array([[1, 1]])
    solver = BlockSolver(f2, A, columns=[1])
    x = solver.solve(np.array([1]))
    assert list(x) == [0, 1]
