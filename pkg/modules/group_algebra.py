"""Group algebras kG as structure-constant algebras.

Two kinds are supported: truncated polynomial algebras k[z_1..z_r]/(z_i^{m_i})
for abelian p-groups (z_i = g_i - 1) and the group ring kQ8 of the quaternion
group in characteristic 2. Elements are coefficient vectors over the basis.
"""

from __future__ import annotations

import logging
import re
from functools import cached_property, lru_cache
from itertools import product
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from helpers.errors import AlgebraMismatch, InvalidSpec, NotPPower, WrongCharacteristic
from helpers.linalg import nullspace, row_space
from modules.scalars import Field

logger = logging.getLogger(__name__)

Q8_NAMES = ["E", "I", "J", "K", "E'", "I'", "J'", "K'"]

# normal forms i^a j^b of ⟨i, j | i^4, i^2 = j^2, j i j^-1 = i^-1⟩ by basis name
Q8_WORDS = {"E": (0, 0), "I": (1, 0), "J": (0, 1), "K": (1, 1), "E'": (2, 0), "I'": (3, 0), "J'": (2, 1), "K'": (3, 1)}


def q8_word_product(u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    """(i^a j^b)(i^c j^d) in normal form, using j^b i^c = i^((-1)^b c) j^b and j^2 = i^2."""
    (a, b), (c, d) = u, v
    a = a + (-c if b else c)
    b = b + d
    if b == 2:
        a, b = a + 2, 0
    return a % 4, b


class IdealSpec(BaseModel):
    """I^m (augmentation_power) or J_m (j_power)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["augmentation_power", "j_power"]
    m: int

    @model_validator(mode="after")
    def _check_power(self):
        if self.kind == "augmentation_power" and self.m < 1:
            raise InvalidSpec(f"I^{self.m} needs m >= 1")
        if self.m < 0:
            raise InvalidSpec(f"J_{self.m} needs m >= 0")
        return self


def I(m: int = 1) -> IdealSpec:
    return IdealSpec(kind="augmentation_power", m=m)


def J(m: int) -> IdealSpec:
    return IdealSpec(kind="j_power", m=m)


class Algebra:
    """
    Finite-dimensional group algebra with a multiplicative basis.

    ``table[a, b]`` is the basis index of the product, or -1 when it is zero.
    """

    def __init__(self, field: Field, kind: str, basis: list, table: np.ndarray, exponents=()):
        self.field = field
        self.kind = kind
        self.basis = basis
        self.exponents = tuple(exponents)
        self.dim = len(basis)
        self.table = table
        self.unit = 0
        self.index = {b: i for i, b in enumerate(basis)}
        pad = self.dim
        # ldiv[x, c] = y with x*y = c ; rdiv[y, c] = x with x*y = c ; pad when none
        self.ldiv = np.full((self.dim, self.dim), pad, dtype=np.int64)
        self.rdiv = np.full((self.dim, self.dim), pad, dtype=np.int64)
        xs, ys = np.nonzero(table >= 0)
        cs = table[xs, ys]
        self.ldiv[xs, cs] = ys
        self.rdiv[ys, cs] = xs
        self._ideal_cache: dict = {}

    def __repr__(self) -> str:
        if self.kind == "q8":
            return f"{self.field}Q8"
        return f"{self.field}[z]/({','.join(str(m) for m in self.exponents)})"

    @property
    def r(self) -> int:
        return len(self.exponents)

    # Elements ----------------------------------------------------------------

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def one(self) -> np.ndarray:
        return self.basis_element(self.unit)

    def basis_element(self, i: int, coeff: int = 1) -> np.ndarray:
        e = self.zero()
        e[i] = coeff
        return e

    def monomial(self, exps) -> np.ndarray:
        """z^exps, or 0 if some exponent overflows."""
        exps = tuple(int(e) for e in exps)
        if any(e >= m for e, m in zip(exps, self.exponents)):
            return self.zero()
        return self.basis_element(self.index[exps])

    def generator(self, i: int) -> np.ndarray:
        """z_i (1-based) for truncated algebras."""
        exps = [0] * self.r
        exps[i - 1] = 1
        return self.monomial(exps)

    def element(self, name: str) -> np.ndarray:
        """A Q8 group element by letter, e.g. ``J'``."""
        return self.basis_element(Q8_NAMES.index(name))

    @cached_property
    def norm(self) -> np.ndarray:
        if self.kind == "q8":
            return np.ones(self.dim, dtype=np.int64)
        return self.monomial([m - 1 for m in self.exponents])

    def partial_norm(self, i: int) -> np.ndarray:
        """N_i with z_i N_i = N and z_j N_i = 0 for j != i (1-based)."""
        exps = [m - 1 for m in self.exponents]
        exps[i - 1] -= 1
        return self.monomial(exps)

    def check_same(self, other: "Algebra") -> None:
        if other is not self:
            raise AlgebraMismatch(f"Elements of {self} and {other} cannot be combined")

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        f = self.field
        a = np.asarray(a, dtype=np.int64)
        b_pad = np.append(np.asarray(b, dtype=np.int64), 0)
        if a.shape != (self.dim,) or b_pad.shape != (self.dim + 1,):
            raise AlgebraMismatch(f"Vectors of wrong length for {self}")
        terms = f.mul(a[:, None], b_pad[self.ldiv])
        return f.sum(terms, axis=0)

    def augmentation_vector(self) -> np.ndarray:
        if self.kind == "q8":
            return np.ones(self.dim, dtype=np.int64)
        return self.one()

    def augmentation(self, a: np.ndarray) -> int:
        f = self.field
        return int(f.sum(f.mul(np.asarray(a, dtype=np.int64), self.augmentation_vector())))

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        """L with L @ b = a*b."""
        a_pad = np.append(np.asarray(a, dtype=np.int64), 0)
        return a_pad[self.rdiv.T]

    # Ideals ------------------------------------------------------------------

    def _monomial_degrees(self) -> np.ndarray:
        return np.array([sum(b) for b in self.basis], dtype=np.int64)

    def ideal_checker(self, spec: IdealSpec) -> np.ndarray:
        """Matrix C with a in the ideal iff a @ C == 0."""
        key = (spec.kind, spec.m)
        if key in self._ideal_cache:
            return self._ideal_cache[key]
        if self.kind == "q8":
            if spec.kind == "j_power":
                raise InvalidSpec("J_m ideals are defined for truncated algebras only")
            C = nullspace(self.field, self.ideal_basis(spec)).T
        else:
            if spec.kind == "augmentation_power":
                inside = self._monomial_degrees() >= spec.m
            else:
                top = np.array(
                    [sum(e == m - 1 for e, m in zip(b, self.exponents)) for b in self.basis]
                )
                inside = top >= spec.m
            C = np.eye(self.dim, dtype=np.int64)[:, ~inside]
        self._ideal_cache[key] = C
        return C

    def ideal_basis(self, spec: IdealSpec) -> np.ndarray:
        """k-basis of the ideal, one vector per row."""
        if self.kind != "q8":
            C = self.ideal_checker(spec)
            outside = C.sum(axis=1) > 0
            return np.eye(self.dim, dtype=np.int64)[~outside]
        f = self.field
        aug = np.array([f.sub(self.basis_element(g), self.one()) for g in range(1, self.dim)])
        span = row_space(f, aug)
        for _ in range(spec.m - 1):
            products = [self.multiply(u, v) for u in span for v in aug]
            span = row_space(f, np.array(products)) if products else span[:0]
        return span

    def ideal_member(self, a: np.ndarray, spec: IdealSpec) -> bool:
        a = np.asarray(a, dtype=np.int64)
        return not np.any(self.field.matmul(a.reshape(-1, self.dim), self.ideal_checker(spec)))

    def entries_in_ideal(self, entries: np.ndarray, spec: IdealSpec) -> bool:
        """Whether every algebra element in an array of shape (..., dim) lies in the ideal."""
        entries = np.asarray(entries, dtype=np.int64)
        if entries.size == 0:
            return True
        return self.ideal_member(entries, spec)

    # Rendering ---------------------------------------------------------------

    def basis_name(self, i: int) -> str:
        if self.kind == "q8":
            return Q8_NAMES[i]
        exps = self.basis[i]
        parts = []
        for k, e in enumerate(exps, start=1):
            if e == 1:
                parts.append(f"z{k}")
            elif e > 1:
                parts.append(f"z{k}^{e}")
        return "*".join(parts) if parts else "1"

    def format(self, a: np.ndarray) -> str:
        f = self.field
        terms = []
        for i in np.flatnonzero(a):
            c = f.format(a[i])
            name = self.basis_name(i)
            if c == "1":
                terms.append(name)
            elif not c.isdigit():
                terms.append(f"({c})*{name}")
            elif name == "1":
                terms.append(c)
            else:
                terms.append(f"{c}*{name}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> np.ndarray:
        f = self.field
        result = self.zero()
        text = text.replace(" ", "")
        if text == "0":
            return result
        for term in re.split(r"\+(?![^(]*\))", text):
            coeff = 1
            m = re.match(r"^\(([^)]*)\)\*(.*)$", term) or re.match(r"^(\d+)\*(.*)$", term)
            if m:
                coeff, term = f.parse(m.group(1)), m.group(2)
            elif term.isdigit():
                coeff, term = f.parse(term), "1"
            if self.kind == "q8":
                if term not in Q8_NAMES:
                    raise InvalidSpec(f"Unknown quaternion element: {term}")
                idx = Q8_NAMES.index(term)
                result[idx] = f.add(result[idx], coeff)
                continue
            exps = [0] * self.r
            if term != "1":
                for factor in term.split("*"):
                    fm = re.fullmatch(r"z(\d+)(?:\^(\d+))?", factor)
                    if not fm or not 1 <= int(fm.group(1)) <= self.r:
                        raise InvalidSpec(f"Invalid monomial factor: {factor}")
                    exps[int(fm.group(1)) - 1] += int(fm.group(2) or 1)
            result = f.add(result, f.mul(self.monomial(exps), coeff))
        return np.asarray(result, dtype=np.int64)


def _is_power_of(m: int, p: int) -> bool:
    while m > 1 and m % p == 0:
        m //= p
    return m == 1


def truncated_polynomial_algebra(field: Field, exponents) -> Algebra:
    return _truncated(field, tuple(int(m) for m in exponents))


@lru_cache(maxsize=None)
def _truncated(field: Field, exponents: tuple[int, ...]) -> Algebra:
    if not exponents or any(m < 2 or not _is_power_of(m, field.p) for m in exponents):
        raise NotPPower(f"Exponents {exponents} must be powers of {field.p} (>= 2)")
    monomials = list(product(*[range(m) for m in exponents]))
    monomials.sort(key=lambda a: (sum(a), tuple(-e for e in a)))
    index = {b: i for i, b in enumerate(monomials)}
    d = len(monomials)
    table = np.full((d, d), -1, dtype=np.int64)
    for i, a in enumerate(monomials):
        for j, b in enumerate(monomials):
            c = tuple(x + y for x, y in zip(a, b))
            if all(e < m for e, m in zip(c, exponents)):
                table[i, j] = index[c]
    logger.info(f"Built truncated polynomial algebra with exponents {exponents} over {field}")
    return Algebra(field, "truncated", monomials, table, exponents)


@lru_cache(maxsize=None)
def quaternion_algebra(field: Field) -> Algebra:
    if field.p != 2:
        raise WrongCharacteristic(f"kQ8 needs characteristic 2, got {field.p}")
    index = {Q8_WORDS[name]: i for i, name in enumerate(Q8_NAMES)}
    table = np.zeros((8, 8), dtype=np.int64)
    for a, name_a in enumerate(Q8_NAMES):
        for b, name_b in enumerate(Q8_NAMES):
            table[a, b] = index[q8_word_product(Q8_WORDS[name_a], Q8_WORDS[name_b])]
    logger.info(f"Built quaternion group algebra over {field}")
    return Algebra(field, "q8", list(Q8_NAMES), table)
