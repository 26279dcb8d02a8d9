"""Exact arithmetic in small finite fields F_{p^n}.

A scalar is a plain ``int`` in ``0..q-1``; its base-p digits are the
coordinates with respect to the power basis 1, a, a^2, ... of the modulus.
All array operations broadcast like numpy ufuncs, so module maps and linear
systems never leave integer arrays.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import numpy as np

from helpers.errors import DivisionByZero, InvalidSpec, NotPrime, Reducible

logger = logging.getLogger(__name__)

MAX_ORDER = 256


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a by the monic polynomial b over F_p (coefficients low to high)."""
    rem = [c % p for c in a]
    db = len(b) - 1
    while len(rem) - 1 >= db:
        lead = rem[-1]
        if lead:
            shift = len(rem) - 1 - db
            for i, c in enumerate(b):
                rem[shift + i] = (rem[shift + i] - lead * c) % p
        rem.pop()
    return rem


def _monic_polys(degree: int, p: int):
    for low in product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    n = len(modulus) - 1
    for d in range(1, n // 2 + 1):
        for divisor in _monic_polys(d, p):
            if not any(_poly_rem(modulus, divisor, p)):
                return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree n, reading coefficients as a base-p integer."""
    if n == 1:
        return (0, 1)
    for code in range(p**n):
        low = [(code // p**i) % p for i in range(n)]
        candidate = low + [1]
        if low[0] != 0 and is_irreducible(candidate, p):
            return tuple(candidate)
    raise Reducible(f"No irreducible polynomial of degree {n} over F_{p}")


class Field:
    """The finite field F_q, q = p^n, with arithmetic tables."""

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = modulus
        self.is_prime_field = n == 1
        self._powers = p ** np.arange(n, dtype=np.int64)
        elements = np.arange(self.q, dtype=np.int64)
        self._digits = (elements[:, None] // self._powers[None, :]) % p

        if not self.is_prime_field:
            # digits of a^k for k < 2n-1, reduced by the modulus
            self._power_digits = np.zeros((2 * n - 1, n), dtype=np.int64)
            for k in range(2 * n - 1):
                rem = _poly_rem([0] * k + [1], modulus, p)
                rem = rem + [0] * (n - len(rem))
                self._power_digits[k] = rem[:n]
            D = self._digits
            self._add = ((D[:, None, :] + D[None, :, :]) % p) @ self._powers
            self._neg = ((-D) % p) @ self._powers
            prod = np.zeros((self.q, self.q, n), dtype=np.int64)
            for i in range(n):
                for j in range(n):
                    coeff = D[:, None, i] * D[None, :, j]
                    prod += coeff[:, :, None] * self._power_digits[i + j][None, None, :]
            self._mul = (prod % p) @ self._powers
        self._inv = self._inverse_table()

    def _inverse_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        elements = np.arange(self.q)
        for a in range(1, self.q):
            products = self.mul(a, elements)
            inv[a] = int(np.flatnonzero(products == 1)[0])
        return inv

    def __repr__(self) -> str:
        if self.is_prime_field:
            return f"F{self.p}"
        return f"F{self.p}^{self.n}/{','.join(map(str, self.modulus))}"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.n, self.modulus) == (
            other.p,
            other.n,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    @property
    def generator(self) -> int:
        """The class of X, i.e. ``a`` (or 1 for prime fields)."""
        return 1 if self.is_prime_field else self.p

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # Vectorized arithmetic ---------------------------------------------------

    def add(self, a, b):
        if self.is_prime_field:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        return self._add[a, b]

    def neg(self, a):
        if self.is_prime_field:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        return self._neg[a]

    def sub(self, a, b):
        if self.is_prime_field:
            return (np.asarray(a, dtype=np.int64) - b) % self.p
        return self._add[a, self._neg[b]]

    def mul(self, a, b):
        if self.is_prime_field:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        return self._mul[a, b]

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero(f"Zero has no inverse in {self}")
        return self._inv[a]

    def sum(self, a, axis=None):
        a = np.asarray(a, dtype=np.int64)
        if self.is_prime_field:
            return a.sum(axis=axis) % self.p
        digits = self._digits[a]
        if axis is None:
            return int((digits.reshape(-1, self.n).sum(axis=0) % self.p) @ self._powers)
        axis = axis % a.ndim
        return (digits.sum(axis=axis) % self.p) @ self._powers

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Matrix product over the field."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] == 0 or A.size == 0 or B.size == 0:
            return np.zeros(A.shape[:-1] + B.shape[-1:], dtype=np.int64)
        if self.is_prime_field:
            C = np.rint(A.astype(np.float64) @ B.astype(np.float64))
            return C.astype(np.int64) % self.p
        p = self.p
        Ad = self._digits[A].astype(np.float64)
        Bd = self._digits[B].astype(np.float64)
        out = np.zeros(A.shape[:-1] + B.shape[-1:] + (self.n,), dtype=np.int64)
        for i in range(self.n):
            for j in range(self.n):
                P = np.rint(Ad[..., i] @ Bd[..., j]).astype(np.int64) % p
                out += P[..., None] * self._power_digits[i + j]
        return (out % p) @ self._powers

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    # Scalars -----------------------------------------------------------------

    def format(self, c: int) -> str:
        c = int(c)
        if self.is_prime_field:
            return str(c)
        terms = []
        for i in reversed(range(self.n)):
            d = int(self._digits[c, i])
            if not d:
                continue
            mono = "1" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if i == 0:
                terms.append(str(d))
            else:
                terms.append(mono if d == 1 else f"{d}*{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> int:
        """Parse an integer or, for extension fields, a polynomial in ``a``."""
        text = text.replace(" ", "")
        try:
            if self.is_prime_field:
                return int(text) % self.p
            total = 0
            for term in text.split("+"):
                if term.isdigit():
                    value = self.from_int(int(term))
                else:
                    coeff, _, mono = term.rpartition("*")
                    if mono == "a":
                        k = 1
                    elif mono.startswith("a^"):
                        k = int(mono[2:])
                    else:
                        raise ValueError(term)
                    value = self.mul(self.from_int(int(coeff or "1")), self.power(self.generator, k))
                total = int(self.add(total, value))
            return total
        except ValueError:
            raise InvalidSpec(f"Invalid scalar for {self}: {text}")

    def from_int(self, k: int) -> int:
        """Image of the integer k under Z -> F."""
        return k % self.p

    def power(self, a: int, k: int) -> int:
        result = 1
        for _ in range(k):
            result = int(self.mul(result, a))
        return result

    def sign(self, exponent: int) -> int:
        """(-1)^exponent as a field element."""
        return 1 if exponent % 2 == 0 else self.p - 1


@lru_cache(maxsize=None)
def make_field(p: int, n: int = 1, modulus: Optional[tuple[int, ...]] = None) -> Field:
    """
    Build the field F_{p^n}.

    Parameters:
    -----------
    p : int
        Characteristic, must be prime
    n : int
        Extension degree
    modulus : tuple of int, optional
        Monic irreducible polynomial, coefficients low to high; defaults to the
        smallest irreducible one

    Returns:
    --------
    Field
    """
    if not is_prime(p):
        raise NotPrime(f"Characteristic {p} is not prime")
    if n < 1 or p**n > MAX_ORDER:
        raise InvalidSpec(f"Field order {p}^{n} outside 2..{MAX_ORDER}")
    if modulus is None:
        modulus = default_modulus(p, n)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if n > 1:
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise InvalidSpec(f"Modulus {modulus} is not monic of degree {n}")
            if not is_irreducible(modulus, p):
                raise Reducible(f"Modulus {modulus} is reducible over F_{p}")
    if n == 1:
        modulus = (0, 1)
    logger.info(f"Building field F_{p}^{n} with modulus {modulus}")
    return Field(p, n, modulus)


def invert(a: int, field: Field) -> int:
    return int(field.inv(a))
