"""Complete projective resolutions of the trivial module.

Three families are built lazily, one differential per degree:

- cyclic groups, rank 1 in every degree, differentials alternating z and -z^{m-1};
- Q8, ranks (1, 2, 2, 1) repeating with period 4;
- abelian products with r >= 2 factors, labelled by multi-indices (M_n for
  n >= 0, N_n for n < 0) with signs from the tensor-product differential.

``∂_n`` maps P_n -> P_{n-1}; ``∂_0`` splices the projective and injective halves.
"""

from __future__ import annotations

import logging
import threading
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from helpers.errors import WrongKind
from helpers.linalg import BlockSolver
from helpers.serialization import CheckReport
from modules.group_algebra import Algebra, I, truncated_polynomial_algebra
from modules.module_map import compose, flat_left, flat_right, zero_map

logger = logging.getLogger(__name__)


def compositions(n: int, r: int) -> list[tuple[int, ...]]:
    """Multi-indices with r non-negative entries summing to n, descending lex."""
    if r == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        out.extend((first,) + rest for rest in compositions(n - first, r - 1))
    return out


def dual_label(alpha: tuple[int, ...]) -> tuple[int, ...]:
    """(α)* = (-1 - α)."""
    return tuple(-1 - a for a in alpha)


class Resolution:
    """Lazy, memoized complete resolution over a group algebra."""

    family: str = ""
    period: Optional[int] = None

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self.field = algebra.field
        self._lock = threading.Lock()
        self._differentials: dict[int, np.ndarray] = {}
        self._post: dict[tuple, BlockSolver] = {}
        self._pre: dict[tuple, BlockSolver] = {}
        self._label_index: dict[int, dict] = {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.algebra})"

    # subclass hooks
    def labels(self, n: int) -> list:
        raise NotImplementedError

    def _build_differential(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def rank(self, n: int) -> int:
        return len(self.labels(n))

    def label_index(self, n: int) -> dict:
        if n not in self._label_index:
            self._label_index[n] = {lab: i for i, lab in enumerate(self.labels(n))}
        return self._label_index[n]

    def format_label(self, label) -> str:
        if isinstance(label, tuple):
            return "(" + ",".join(str(a) for a in label) + ")"
        return str(label)

    def differential(self, n: int) -> np.ndarray:
        """∂_n : P_n -> P_{n-1} as an array (rank(n-1), rank(n), dim)."""
        D = self._differentials.get(n)
        if D is None:
            D = self._build_differential(n)
            D.setflags(write=False)
            with self._lock:
                D = self._differentials.setdefault(n, D)
        return D

    def post_solver(self, n: int, columns=None) -> BlockSolver:
        """Solver for ∂_n o h = g."""
        key = (n, None if columns is None else tuple(columns))
        solver = self._post.get(key)
        if solver is None:
            solver = BlockSolver(self.field, flat_left(self.algebra, self.differential(n)), columns)
            with self._lock:
                solver = self._post.setdefault(key, solver)
        return solver

    def pre_solver(self, n: int, columns=None) -> BlockSolver:
        """Solver for h o ∂_n = g."""
        key = (n, None if columns is None else tuple(columns))
        solver = self._pre.get(key)
        if solver is None:
            solver = BlockSolver(self.field, flat_right(self.algebra, self.differential(n)), columns)
            with self._lock:
                solver = self._pre.setdefault(key, solver)
        return solver

    def flat_rank(self, n: int) -> int:
        """k-rank of ∂_n."""
        return self.post_solver(n).rank


class CyclicResolution(Resolution):
    family = "cyclic"
    period = 2

    def __init__(self, algebra: Algebra):
        super().__init__(algebra)
        self.m = algebra.exponents[0]

    def labels(self, n: int) -> list:
        return [0]

    def coefficient(self, k: int) -> np.ndarray:
        """The entry of ∂_k: z for k odd, -z^{m-1} for k even."""
        A = self.algebra
        if k % 2:
            return A.monomial((1,))
        return self.field.neg(A.monomial((self.m - 1,)))

    def _build_differential(self, n: int) -> np.ndarray:
        D = zero_map(self.algebra, 1, 1)
        D[0, 0] = self.coefficient(n)
        return D


Q8_RANKS = (1, 2, 2, 1)
Q8_DIFFERENTIALS = {
    1: [["I+E", "J+E"]],
    2: [["J+E", "K'+E"], ["K+E", "I+E"]],
    3: [["I+E"], ["J+E"]],
}


class Q8Resolution(Resolution):
    family = "q8"
    period = 4

    def labels(self, n: int) -> list:
        return list(range(Q8_RANKS[n % 4]))

    def _build_differential(self, n: int) -> np.ndarray:
        A = self.algebra
        if n % 4 == 0:
            D = zero_map(A, 1, 1)
            D[0, 0] = A.norm
            return D
        rows = Q8_DIFFERENTIALS[n % 4]
        D = zero_map(A, len(rows), len(rows[0]))
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                D[i, j] = A.parse(entry)
        return D


class AbelianResolution(Resolution):
    """Tensor product of the cyclic resolutions of the factors."""

    family = "abelian"

    def __init__(self, algebra: Algebra):
        super().__init__(algebra)
        self.r = algebra.r
        self.exponents = algebra.exponents
        self._labels: dict[int, list] = {}
        self.factors = [
            cyclic_resolution(truncated_polynomial_algebra(self.field, (m,)))
            for m in self.exponents
        ]

    def labels(self, n: int) -> list:
        if n not in self._labels:
            if n >= 0:
                labs = compositions(n, self.r)
            else:
                labs = [dual_label(a) for a in compositions(-n - 1, self.r)]
            self._labels[n] = labs
        return self._labels[n]

    def embed(self, i: int, element: np.ndarray) -> np.ndarray:
        """Embed an element of the i-th factor algebra (0-based) as a global element."""
        A = self.algebra
        out = A.zero()
        for e in np.flatnonzero(element):
            exps = [0] * self.r
            exps[i] = int(e)
            out[A.index[tuple(exps)]] = element[e]
        return out

    def factor_coefficient(self, i: int, k: int) -> np.ndarray:
        """Global element of the i-th factor differential ∂_k (0-based i)."""
        return self.embed(i, self.factors[i].coefficient(k))

    @cached_property
    def c0_product(self) -> list[np.ndarray]:
        """prod_{l != i} c_0^{(l)} for each i."""
        A = self.algebra
        out = []
        for i in range(self.r):
            prod = A.one()
            for l in range(self.r):
                if l != i:
                    prod = A.multiply(prod, self.factor_coefficient(l, 0))
            out.append(prod)
        return out

    def _build_differential(self, n: int) -> np.ndarray:
        A = self.algebra
        f = self.field
        sources = self.labels(n)
        targets = self.label_index(n - 1)
        D = zero_map(A, len(targets), len(sources))
        if n == 0:
            coeff = A.one()
            for i in range(self.r):
                coeff = A.multiply(coeff, self.factor_coefficient(i, 0))
            D[0, 0] = coeff
            return D
        for col, alpha in enumerate(sources):
            prefix = 0
            for i, a in enumerate(alpha):
                if n > 0 and a == 0:
                    prefix += a
                    continue
                exponent = prefix + (i if n < 0 else 0)
                target = alpha[:i] + (a - 1,) + alpha[i + 1 :]
                coeff = self.factor_coefficient(i, a)
                D[targets[target], col] = f.mul(coeff, f.sign(exponent))
                prefix += a
        return D


def cyclic_resolution(algebra: Algebra) -> CyclicResolution:
    if algebra.kind != "truncated" or algebra.r != 1:
        raise WrongKind(f"Cyclic resolution needs k[z]/z^m, got {algebra}")
    return CyclicResolution(algebra)


def q8_resolution(algebra: Algebra) -> Q8Resolution:
    if algebra.kind != "q8":
        raise WrongKind(f"Q8 resolution needs kQ8, got {algebra}")
    return Q8Resolution(algebra)


def abelian_resolution(algebra: Algebra) -> AbelianResolution:
    if algebra.kind != "truncated" or algebra.r < 2:
        raise WrongKind(f"Abelian product resolution needs r >= 2 factors, got {algebra}")
    return AbelianResolution(algebra)


def resolution_for(algebra: Algebra) -> Resolution:
    if algebra.kind == "q8":
        return q8_resolution(algebra)
    if algebra.r == 1:
        return cyclic_resolution(algebra)
    return abelian_resolution(algebra)


def verify_exact(
    res: Resolution,
    window: tuple[int, int],
    differential: Optional[Callable[[int], np.ndarray]] = None,
) -> CheckReport:
    """
    Check ∂∘∂ = 0 and exactness for every degree strictly inside the window.

    ``differential`` overrides the resolution's differentials, which lets a
    corrupted complex be checked as a negative control.
    """
    a, b = window
    diff = differential or res.differential
    A = res.algebra
    d = A.dim
    failures = []
    ranks = {}
    for n in range(a, b + 1):
        ranks[n] = BlockSolver(res.field, flat_left(A, diff(n))).rank
    for n in range(a + 1, b):
        if np.any(compose(A, diff(n), diff(n + 1))):
            failures.append(n)
            continue
        kernel = res.rank(n) * d - ranks[n]
        if kernel != ranks[n + 1]:
            failures.append(n)
    if a < 0 < b:
        # im ∂_1 = ker ε, with ε of k-rank 1
        d1 = diff(1)
        killed = all(A.augmentation(d1[0, j]) == 0 for j in range(d1.shape[1]))
        if not killed or ranks[1] != d - 1:
            failures.append(0)
    detail = ", ".join(f"{n}:{ranks[n]}" for n in sorted(ranks))
    passed = not failures
    logger.info(f"Exactness of {res} on [{a}, {b}]: {'pass' if passed else failures}")
    return CheckReport(name="exact", passed=passed, failures=sorted(set(failures)), detail=f"k-ranks {detail}")


def verify_minimal(
    res: Resolution,
    window: tuple[int, int],
    differential: Optional[Callable[[int], np.ndarray]] = None,
) -> CheckReport:
    diff = differential or res.differential
    failures = [
        n for n in range(window[0], window[1] + 1) if not res.algebra.entries_in_ideal(diff(n), I(1))
    ]
    return CheckReport(name="minimal", passed=not failures, failures=failures)
