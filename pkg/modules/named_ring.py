"""The Tate cohomology ring in named form.

Each family has a canonical basis of Êxt^n with a chosen cocycle per basis
element (the cycle selection f1):

- cyclic: x^ε y^i, represented by x̄ȳ^i;
- Q8: b s^i for b in 1, x, y, x^2, y^2, x^2*y, represented by b̄ s̄^i;
- abelian: u^ε v^β in degrees >= 0 and phi(α) in negative degrees.

Classes of arbitrary maps are converted to named coordinates through the
inverse of the change-of-basis matrix of one degree, and products are the
classes of composites of representatives.
"""

from __future__ import annotations

import logging
import re
import threading
from typing import Hashable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from helpers.errors import DegreeMismatch, InvalidSpec, NotDefined
from helpers.linalg import inverse
from helpers.serialization import CheckReport
from modules.generators import AbelianCatalog, GeneratorCatalog, catalog_for
from modules.graded_map import GradedMap, TateClass, class_of, compose, identity, linear_combination, shift
from modules.resolution import AbelianResolution, CyclicResolution, Q8Resolution, compositions

logger = logging.getLogger(__name__)

Q8_CORE = ["1", "x", "y", "x2", "y2", "x2y"]
Q8_CORE_DEGREE = {"1": 0, "x": 1, "y": 1, "x2": 2, "y2": 2, "x2y": 3}
Q8_CORE_WORD = {"1": "", "x": "x", "y": "y", "x2": "xx", "y2": "yy", "x2y": "xxy"}


class RingElement(BaseModel):
    """Element of Êxt^degree in coordinates over the named basis of that degree."""

    model_config = ConfigDict(frozen=True)

    degree: int
    coords: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)


class NamedRing:
    """Named basis, cycle selection and multiplication for one resolution."""

    def __init__(self, res, catalog: Optional[GeneratorCatalog] = None):
        self.res = res
        self.field = res.field
        self.catalog = catalog or catalog_for(res)
        self._basis: dict[int, list] = {}
        self._f1: dict[Hashable, GradedMap] = {}
        self._inverse: dict[int, np.ndarray] = {}
        self._products: dict[tuple, RingElement] = {}
        self._lock = threading.Lock()
        if isinstance(res, Q8Resolution):
            self.family = "q8"
        elif isinstance(res, CyclicResolution):
            self.family = "cyclic"
        elif isinstance(res, AbelianResolution):
            self.family = "abelian"
        else:
            raise InvalidSpec(f"No named ring for {res}")

    # Basis ---------------------------------------------------------------------

    def basis(self, degree: int) -> list:
        keys = self._basis.get(degree)
        if keys is None:
            keys = self._build_basis(degree)
            self._basis[degree] = keys
        return keys

    def _build_basis(self, n: int) -> list:
        if self.family == "cyclic":
            return [(n % 2, n // 2)]
        if self.family == "q8":
            i, rest = divmod(n, 4)
            return [(b, i) for b in Q8_CORE if Q8_CORE_DEGREE[b] == rest]
        r = self.res.r
        if n >= 0:
            return [("pos", alpha) for alpha in compositions(n, r)]
        return [("phi", alpha) for alpha in compositions(-n - 1, r)]

    def degree_of(self, key) -> int:
        if self.family == "cyclic":
            return key[0] + 2 * key[1]
        if self.family == "q8":
            return Q8_CORE_DEGREE[key[0]] + 4 * key[1]
        kind, alpha = key
        return sum(alpha) if kind == "pos" else -sum(alpha) - 1

    def key_name(self, key) -> str:
        if self.family == "cyclic":
            eps, i = key
            parts = ["x"] if eps else []
            if i:
                parts.append("y" if i == 1 else f"y^{i}")
            return "*".join(parts) or "1"
        if self.family == "q8":
            b, i = key
            parts = [] if b == "1" else [{"x2": "x^2", "y2": "y^2", "x2y": "x^2*y"}.get(b, b)]
            if i:
                parts.append("s" if i == 1 else f"s^{i}")
            return "*".join(parts) or "1"
        kind, alpha = key
        if kind == "phi":
            return AbelianCatalog.phi_name(alpha)
        parts = []
        for i, a in enumerate(alpha, start=1):
            eps, beta = a % 2, a // 2
            if eps:
                parts.append(f"u{i}")
            if beta:
                parts.append(f"v{i}" if beta == 1 else f"v{i}^{beta}")
        return "*".join(parts) or "1"

    # Cycle selection -----------------------------------------------------------------

    def f1(self, key) -> GradedMap:
        f = self._f1.get(key)
        if f is None:
            f = self._build_f1(key).named(self.key_name(key))
            with self._lock:
                f = self._f1.setdefault(key, f)
        return f

    def _chain(self, factors: list[GradedMap]) -> GradedMap:
        if not factors:
            return identity(self.res)
        out = factors[0]
        for g in factors[1:]:
            out = compose(out, g)
        return out

    def _build_f1(self, key) -> GradedMap:
        c = self.catalog
        if self.family == "cyclic":
            eps, i = key
            factors = [c["x"]] if eps else []
            if i:
                factors.append(shift(self.res, 2 * i, f"y^{i}"))
            return self._chain(factors)
        if self.family == "q8":
            b, i = key
            factors = [c[letter] for letter in Q8_CORE_WORD[b]]
            if i:
                factors.append(shift(self.res, 4 * i, f"s^{i}"))
            return self._chain(factors)
        kind, alpha = key
        if kind == "phi":
            return c.phi(alpha)
        factors = []
        for i, a in enumerate(alpha, start=1):
            if a % 2:
                factors.append(c.u(i))
            factors.extend([c.v(i)] * (a // 2))
        return self._chain(factors)

    # Classes -------------------------------------------------------------------

    def _basis_inverse(self, degree: int) -> np.ndarray:
        inv = self._inverse.get(degree)
        if inv is None:
            rows = np.array([class_of(self.f1(k)).coords for k in self.basis(degree)], dtype=np.int64)
            inv = inverse(self.field, rows)
            if inv is None:
                raise NotDefined(f"Named basis of degree {degree} is not a basis over {self.res}")
            with self._lock:
                inv = self._inverse.setdefault(degree, inv)
        return inv

    def from_class(self, c: TateClass) -> RingElement:
        coords = np.asarray(c.coords, dtype=np.int64)[None, :]
        named = self.field.matmul(coords, self._basis_inverse(c.degree))[0]
        return RingElement(degree=c.degree, coords=tuple(int(v) for v in named))

    def class_of(self, f: GradedMap) -> RingElement:
        return self.from_class(class_of(f))

    def element(self, key, coeff: int = 1) -> RingElement:
        keys = self.basis(self.degree_of(key))
        coords = [0] * len(keys)
        coords[keys.index(key)] = coeff
        return RingElement(degree=self.degree_of(key), coords=tuple(coords))

    def zero(self, degree: int) -> RingElement:
        return RingElement(degree=degree, coords=(0,) * len(self.basis(degree)))

    def one(self) -> RingElement:
        return self.element(self.basis(0)[0])

    def representative(self, a: RingElement) -> GradedMap:
        """The k-linear combination of f1 images representing a."""
        keys = self.basis(a.degree)
        terms = [(c, self.f1(k)) for c, k in zip(a.coords, keys)]
        return linear_combination(self.res, a.degree, terms)

    def terms(self, a: RingElement) -> list[tuple[int, Hashable]]:
        return [(c, k) for c, k in zip(a.coords, self.basis(a.degree)) if c]

    # Arithmetic -----------------------------------------------------------------

    def add(self, a: RingElement, b: RingElement) -> RingElement:
        if a.degree != b.degree:
            raise DegreeMismatch(f"Cannot add classes of degrees {a.degree} and {b.degree}")
        coords = self.field.add(np.array(a.coords), np.array(b.coords))
        return RingElement(degree=a.degree, coords=tuple(int(v) for v in coords))

    def scale(self, a: RingElement, c: int) -> RingElement:
        coords = self.field.mul(np.array(a.coords), c)
        return RingElement(degree=a.degree, coords=tuple(int(v) for v in coords))

    def neg(self, a: RingElement) -> RingElement:
        return self.scale(a, self.field.sign(1))

    def sub(self, a: RingElement, b: RingElement) -> RingElement:
        return self.add(a, self.neg(b))

    def basis_product(self, ka, kb) -> RingElement:
        key = (ka, kb)
        out = self._products.get(key)
        if out is None:
            out = self.class_of(compose(self.f1(ka), self.f1(kb)))
            with self._lock:
                out = self._products.setdefault(key, out)
        return out

    def multiply(self, a: RingElement, b: RingElement) -> RingElement:
        out = self.zero(a.degree + b.degree)
        f = self.field
        for ca, ka in self.terms(a):
            for cb, kb in self.terms(b):
                out = self.add(out, self.scale(self.basis_product(ka, kb), f.mul(ca, cb)))
        return out

    # Rendering and parsing ------------------------------------------------------------

    def format(self, a: RingElement) -> str:
        parts = []
        for c, k in self.terms(a):
            name = self.key_name(k)
            coeff = self.field.format(c)
            if coeff == "1":
                parts.append(name)
            elif not coeff.isdigit():
                parts.append(f"({coeff})*{name}")
            elif name == "1":
                parts.append(coeff)
            else:
                parts.append(f"{coeff}*{name}")
        return "+".join(parts) if parts else "0"

    def _atom(self, text: str) -> RingElement:
        m = re.fullmatch(r"phi\(([\d,\s]+)\)", text)
        if m:
            if self.family != "abelian":
                raise InvalidSpec(f"phi(...) only names classes of abelian products, got {text}")
            alpha = tuple(int(a) for a in m.group(1).split(","))
            if len(alpha) != self.res.r or min(alpha) < 0:
                raise InvalidSpec(f"phi needs {self.res.r} non-negative entries, got {text}")
            return self.element(("phi", alpha))
        m = re.fullmatch(r"([a-z])(\d*)(?:\^(-?\d+))?", text)
        if not m:
            raise InvalidSpec(f"Cannot parse ring element factor: {text}")
        letter, index, power = m.group(1), m.group(2), int(m.group(3) or 1)
        if self.family == "cyclic" and not index:
            if letter == "y":
                return self.element((0, power))
            if letter == "x" and power >= 0:
                return self._power(self.element((1, 0)), power)
        if self.family == "q8" and not index:
            if letter == "s":
                return self.element(("1", power))
            if letter in ("x", "y") and power >= 0:
                return self._power(self.element((letter, 0)), power)
        if self.family == "abelian" and index and letter in ("u", "v") and power >= 0:
            i = int(index)
            if not 1 <= i <= self.res.r:
                raise InvalidSpec(f"Factor index {i} out of range 1..{self.res.r}")
            alpha = [0] * self.res.r
            alpha[i - 1] = 1 if letter == "u" else 2
            return self._power(self.element(("pos", tuple(alpha))), power)
        raise InvalidSpec(f"Unknown generator {text} for the {self.family} family")

    def _power(self, a: RingElement, k: int) -> RingElement:
        out = self.one()
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def parse(self, text: str) -> RingElement:
        """
        Parse sums of products, e.g. ``x^2*y*s^-1``, ``u1*v2^3``, ``phi(0,1)``
        or ``2*x+y``.
        """
        text = text.replace(" ", "")
        if not text:
            raise InvalidSpec("Empty ring element")
        total: Optional[RingElement] = None
        for term in re.split(r"\+(?![^(]*\))", text):
            negative = term.startswith("-")
            term = term.lstrip("-")
            value: Optional[RingElement] = None
            coeff = 1
            for factor in re.split(r"\*(?![^(]*\))", term):
                if factor.isdigit():
                    coeff = self.field.mul(coeff, self.field.from_int(int(factor)))
                    continue
                if factor.startswith("("):
                    coeff = self.field.mul(coeff, self.field.parse(factor.strip("()")))
                    continue
                atom = self._atom(factor)
                value = atom if value is None else self.multiply(value, atom)
            if value is None:
                value = self.one()
            value = self.scale(value, self.field.sign(1) if negative else 1)
            value = self.scale(value, coeff)
            total = value if total is None else self.add(total, value)
        return total

    def named_basis(self, degrees) -> dict[str, list[str]]:
        return {str(n): [self.key_name(k) for k in self.basis(n)] for n in degrees}


# Relation checks ----------------------------------------------------------------------


# core products b*c of the Q8 ring over k, as sums of core basis names; absent pairs are zero
Q8_CORE_PRODUCTS = {
    ("x", "x"): ["x2"],
    ("y", "y"): ["y2"],
    ("x", "y"): ["x2", "y2"],
    ("y", "x"): ["x2", "y2"],
    ("x", "y2"): ["x2y"],
    ("y2", "x"): ["x2y"],
    ("y", "x2"): ["x2y"],
    ("x2", "y"): ["x2y"],
}


def _q8_expected(ring: NamedRing, ka, kb) -> RingElement:
    (b, i), (c, j) = ka, kb
    if b == "1" or c == "1":
        names = [c if b == "1" else b]
    else:
        names = Q8_CORE_PRODUCTS.get((b, c), [])
    out = ring.zero(ring.degree_of(ka) + ring.degree_of(kb))
    for name in names:
        out = ring.add(out, ring.element((name, i + j)))
    return out


def q8_relations(ring: NamedRing, degree: int = 3) -> CheckReport:
    """
    x^2 + y^2 = xy, x^3 = y^3 = 0, x^2y = xy^2 and xy = yx, then every product
    of named basis elements of degrees -degree..degree against b s^i * c s^j = (bc) s^(i+j).
    """
    p = ring.parse
    checks = {
        "x^2+y^2=xy": (p("x^2+y^2"), p("x*y")),
        "x^3=0": (p("x^3"), ring.zero(3)),
        "y^3=0": (p("y^3"), ring.zero(3)),
        "x^2y=xy^2": (p("x^2*y"), p("x*y^2")),
        "xy=yx": (p("x*y"), p("y*x")),
    }
    failures = [name for name, (lhs, rhs) in checks.items() if lhs != rhs]
    keys = [k for n in range(-degree, degree + 1) for k in ring.basis(n)]
    for ka in keys:
        for kb in keys:
            if ring.basis_product(ka, kb) != _q8_expected(ring, ka, kb):
                failures.append(f"{ring.key_name(ka)}*{ring.key_name(kb)}")
    logger.info(f"Q8 relations over {ring.res} up to degree {degree}: {len(failures)} failures")
    return CheckReport(name="q8-relations", passed=not failures, failures=failures)


def _monomial_product(exponents, alpha, beta) -> Optional[tuple[int, tuple[int, ...]]]:
    """(sign exponent, exponent vector) of u^ε v^β * u^ε' v^β' by graded commutativity, None if zero."""
    odd_a = [a % 2 for a in alpha]
    odd_b = [b % 2 for b in beta]
    if any(x and y and m != 2 for x, y, m in zip(odd_a, odd_b, exponents)):
        return None
    swaps = sum(odd_a[i] * odd_b[j] for i in range(len(alpha)) for j in range(i))
    return swaps, tuple(a + b for a, b in zip(alpha, beta))


def abelian_relations(ring: NamedRing, degree: int = 3) -> CheckReport:
    """
    The product relations of the abelian ring in degrees -degree..degree.

    φ_α u_i = (-1)^(α_i+...+α_r+i) φ_(α-ε_i) when α_i is odd, or even, positive
    and m_i = 2, and zero otherwise; φ_α v_i = φ_(α-2ε_i) for α_i >= 2; φ_α φ_β = 0.
    Products of monomials u^ε v^β with total degree at most ``degree`` follow
    graded commutativity with u_i^2 = v_i for m_i = 2 and zero otherwise.
    """
    res = ring.res
    r = res.r
    field = ring.field
    failures = []

    def unit(i: int, a: int) -> tuple[int, ...]:
        return tuple(a if l == i else 0 for l in range(r))

    def u(i: int) -> RingElement:
        return ring.element(("pos", unit(i, 1)))

    def v(i: int) -> RingElement:
        return ring.element(("pos", unit(i, 2)))

    def phi_el(alpha) -> RingElement:
        return ring.element(("phi", tuple(alpha)))

    for i in range(r):
        square = ring.multiply(u(i), u(i))
        expected = v(i) if res.exponents[i] == 2 else ring.zero(2)
        if square != expected:
            failures.append(f"u{i + 1}^2")
        for j in range(i + 1, r):
            if ring.multiply(u(i), u(j)) != ring.neg(ring.multiply(u(j), u(i))):
                failures.append(f"u{i + 1}u{j + 1}=-u{j + 1}u{i + 1}")
    positive = [("pos", a) for n in range(degree + 1) for a in compositions(n, r)]
    for ka in positive:
        for kb in positive:
            if ring.degree_of(ka) + ring.degree_of(kb) > degree:
                continue
            product = _monomial_product(res.exponents, ka[1], kb[1])
            n = ring.degree_of(ka) + ring.degree_of(kb)
            if product is None:
                expected = ring.zero(n)
            else:
                swaps, gamma = product
                expected = ring.element(("pos", gamma), field.sign(swaps))
            if ring.basis_product(ka, kb) != expected:
                failures.append(f"{ring.key_name(ka)}*{ring.key_name(kb)}")
    alphas = [a for t in range(degree) for a in compositions(t, r)]
    for alpha in alphas:
        for i in range(r):
            a_i = alpha[i]
            value = ring.multiply(phi_el(alpha), u(i))
            if a_i % 2 or (a_i > 0 and res.exponents[i] == 2):
                lowered = tuple(a - (l == i) for l, a in enumerate(alpha))
                expected = ring.scale(phi_el(lowered), field.sign(sum(alpha[i:]) + i + 1))
                if value != expected:
                    observed = "opposite sign" if value == ring.neg(expected) else ring.format(value)
                    failures.append(f"{AbelianCatalog.phi_name(alpha)}u{i + 1}: {observed}")
            elif not value.is_zero():
                failures.append(f"{AbelianCatalog.phi_name(alpha)}u{i + 1}=0")
            value = ring.multiply(phi_el(alpha), v(i))
            if a_i >= 2:
                expected = phi_el(tuple(a - 2 * (l == i) for l, a in enumerate(alpha)))
            else:
                expected = ring.zero(value.degree)
            if value != expected:
                failures.append(f"{AbelianCatalog.phi_name(alpha)}v{i + 1}")
        for beta in alphas:
            if not ring.multiply(phi_el(alpha), phi_el(beta)).is_zero():
                failures.append(f"{AbelianCatalog.phi_name(alpha)}{AbelianCatalog.phi_name(beta)}=0")
    logger.info(f"Abelian relations over {res.algebra} up to degree {degree}: {len(failures)} failures")
    return CheckReport(name="abelian-relations", passed=not failures, failures=failures)


def multiplication_table(ring: NamedRing, degrees: range) -> list[tuple[str, str, str]]:
    """(a, b, ab) over the named basis of the given degrees, nonzero products only."""
    keys = [k for n in degrees for k in ring.basis(n)]
    rows = []
    for ka in keys:
        for kb in keys:
            value = ring.basis_product(ka, kb)
            if not value.is_zero():
                rows.append((ring.key_name(ka), ring.key_name(kb), ring.format(value)))
    logger.info(f"Multiplication table over {ring.res} for degrees {degrees.start}..{degrees.stop - 1}: {len(rows)} nonzero")
    return rows
