"""Cycle and homotopy selections and the secondary multiplication m.

A homotopy selection satisfies df2(b,c) = f1(b)f1(c) - f1(bc). With that
convention the map

    m(a,b,c) = f2(a,b)f1(c) - f2(a,bc) + f2(ab,c) - (-1)^{|a|} f1(a)f2(b,c)

is a cocycle, and its class (in named form) is the Hochschild cocycle
representing γ.
"""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Callable, Hashable, Iterable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from helpers import settings
from helpers.errors import (
    CrossCheckMismatch,
    NotACocycle,
    NotJ2Map,
    RegimeViolation,
    TranscriptionFailure,
    WrongKind,
)
from helpers.linalg import nullspace, solve
from helpers.serialization import CheckReport, MEntry, MTableReport
from modules.generators import phi, phi_factor, psi
from modules.graded_map import (
    GradedMap,
    compose,
    dga_differential,
    identity,
    is_cocycle,
    is_ideal_map,
    linear_combination,
    scale,
    shift,
    zero,
)
from modules.group_algebra import I, IdealSpec, J
from modules.lifting import _imap_homotopy, null_homotopy_Imap
from modules.named_ring import Q8_CORE, NamedRing, RingElement

logger = logging.getLogger(__name__)

Key = Hashable
Triple = tuple[Key, Key, Key]


def _window(window: Optional[tuple[int, int]]) -> tuple[int, int]:
    return window or (-settings.WINDOW, settings.WINDOW)


# Cycle selection ---------------------------------------------------------------------


class CycleSelection:
    """f1: named basis key -> cocycle, extended k-linearly."""

    def __init__(self, ring: NamedRing):
        self.ring = ring

    def __call__(self, key: Key) -> GradedMap:
        return self.ring.f1(key)

    def of(self, a: RingElement) -> GradedMap:
        return self.ring.representative(a)

    def check(self, degrees: Iterable[int], window: Optional[tuple[int, int]] = None) -> CheckReport:
        """Every f1(b) is a cocycle and class_of(f1(b)) is the coordinate vector of b."""
        window = _window(window)
        ring = self.ring
        failures = []
        for n in degrees:
            for key in ring.basis(n):
                f = ring.f1(key)
                if not is_cocycle(f, window):
                    failures.append(f"d f1({ring.key_name(key)}) != 0")
                elif ring.class_of(f) != ring.element(key):
                    failures.append(f"class of f1({ring.key_name(key)})")
        return CheckReport(name="f1", passed=not failures, failures=failures)


def build_f1(ring: NamedRing) -> CycleSelection:
    return CycleSelection(ring)


# Homotopy selection -----------------------------------------------------------------------


class HomotopySelection:
    """f2 on pairs of named basis keys, built on demand and extended bilinearly."""

    def __init__(self, ring: NamedRing, builder: Callable[[Key, Key], GradedMap], name: str = "f2"):
        self.ring = ring
        self.res = ring.res
        self.name = name
        self._builder = builder
        self._cache: dict[tuple[Key, Key], GradedMap] = {}
        self._lock = threading.Lock()

    def __call__(self, kb: Key, kc: Key) -> GradedMap:
        f = self._cache.get((kb, kc))
        if f is None:
            f = self._builder(kb, kc)
            with self._lock:
                f = self._cache.setdefault((kb, kc), f)
        return f

    def label(self, kb: Key, kc: Key) -> str:
        return f"{self.name}({self.ring.key_name(kb)},{self.ring.key_name(kc)})"

    def of(self, b: RingElement, c: RingElement) -> GradedMap:
        field = self.ring.field
        terms = [
            (field.mul(cb, cc), self(kb, kc))
            for cb, kb in self.ring.terms(b)
            for cc, kc in self.ring.terms(c)
        ]
        return linear_combination(self.res, b.degree + c.degree - 1, terms)

    def defect(self, kb: Key, kc: Key) -> GradedMap:
        """df2(b,c) - f1(b)f1(c) + f1(bc), zero for a valid selection."""
        ring = self.ring
        product_rep = ring.representative(ring.basis_product(kb, kc))
        return dga_differential(self(kb, kc)) - compose(ring.f1(kb), ring.f1(kc)) + product_rep

    def check(
        self,
        pairs: Iterable[tuple[Key, Key]],
        window: Optional[tuple[int, int]] = None,
        ideal: Optional[IdealSpec] = None,
    ) -> CheckReport:
        """d-condition and 𝒞(f2) = 0 per pair, plus the ideal condition when given."""
        window = _window(window)
        failures = []
        for kb, kc in pairs:
            label = self.label(kb, kc)
            f = self(kb, kc)
            if not self.defect(kb, kc).is_zero_on(window):
                failures.append(f"d {label}")
            if not self.ring.class_of(f).is_zero():
                failures.append(f"C {label}")
            if ideal is not None and not is_ideal_map(f, ideal, window):
                failures.append(f"ideal {label}")
        logger.info(f"{self.name} check on {window}: {len(failures)} failures")
        return CheckReport(name=self.name, passed=not failures, failures=failures)


def normalize_f2(selection: HomotopySelection) -> HomotopySelection:
    """f2 - f1 o 𝒞 o f2; keeps the d-condition and makes 𝒞 o f2 vanish."""
    ring = selection.ring

    def build(kb: Key, kc: Key) -> GradedMap:
        raw = selection(kb, kc)
        correction = ring.class_of(raw)
        if correction.is_zero():
            return raw
        logger.info(f"Normalizing {selection.label(kb, kc)} by {ring.format(correction)}")
        return (raw - ring.representative(correction)).named(selection.label(kb, kc))

    return HomotopySelection(ring, build, selection.name)


# Cyclic groups ---------------------------------------------------------------------------


def build_f2_cyclic(ring: NamedRing) -> HomotopySelection:
    """f2(xy^i, xy^j) = q̄ȳ^{i+j} for m >= 3, every other pair (and every pair for m = 2) 0."""
    if ring.family != "cyclic":
        raise WrongKind(f"Cyclic f2 needs a cyclic ring, got {ring.family}")
    res = ring.res
    q = ring.catalog["q"] if res.m >= 3 else None

    def build(kb: Key, kc: Key) -> GradedMap:
        (eb, i), (ec, j) = kb, kc
        degree = eb + ec + 2 * (i + j) - 1
        if q is None or not (eb and ec):
            return zero(res, degree)
        if i + j == 0:
            return q
        return compose(q, shift(res, 2 * (i + j), f"y^{i + j}"))

    return HomotopySelection(ring, build)


# Q8 --------------------------------------------------------------------------------------

# Words in x̄, ȳ, p̄, q̄, r̄ on the core basis, read as composites left to right.
Q8_F2 = {
    ("x", "x"): "0",
    ("x", "y"): "q",
    ("x", "x2"): "r",
    ("x", "y2"): "xq+r",
    ("x", "x2y"): "ry",
    ("y", "x"): "p+q",
    ("y", "y"): "0",
    ("y", "x2"): "px+xp+xx",
    ("y", "y2"): "xq+qy+r",
    ("y", "x2y"): "pxy+xpy+xxq+ry+rx+xxy",
    ("x2", "x"): "r",
    ("x2", "y"): "0",
    ("x2", "x2"): "rx",
    ("x2", "y2"): "rx+ry+xxq",
    ("x2", "x2y"): "rxy",
    ("y2", "x"): "r+qx+xp+xx",
    ("y2", "y"): "xq+qy+r",
    ("y2", "x2"): "qxx+rx+pxx+yr",
    ("y2", "y2"): "xqy+qyy+ry",
    ("y2", "x2y"): "qxxy+rxy+pxxy+yry",
    ("x2y", "x"): "xxp+ry",
    ("x2y", "y"): "rx+ry+xxq",
    ("x2y", "x2"): "xxpx+ryx",
    ("x2y", "y2"): "xxqy+rxy+ryy",
    ("x2y", "x2y"): "xxpxy+ryxy",
}

Q8_CORE_KEYS = [(b, 0) for b in Q8_CORE]


def q8_word(catalog, word: str) -> GradedMap:
    maps = [catalog[letter] for letter in word]
    out = maps[0]
    for g in maps[1:]:
        out = compose(out, g)
    return out.named(word)


def _q8_entry(ring: NamedRing, text: str, degree: int) -> GradedMap:
    if text == "0":
        return zero(ring.res, degree)
    one = ring.field.sign(0)
    terms = [(one, q8_word(ring.catalog, w)) for w in text.split("+")]
    return linear_combination(ring.res, degree, terms).named(text)


def build_f2_q8(ring: NamedRing, window: Optional[tuple[int, int]] = None) -> HomotopySelection:
    """
    The literal f2 table on the core basis, extended by f2(bs^i, cs^j) = f2(b,c)s̄^{i+j}.

    Every core entry is checked for the d-condition and 𝒞 = 0; a miss raises
    TranscriptionFailure.
    """
    if ring.family != "q8":
        raise WrongKind(f"Q8 f2 needs the Q8 ring, got {ring.family}")
    res = ring.res
    core = {
        pair: _q8_entry(ring, text, ring.degree_of((pair[0], 0)) + ring.degree_of((pair[1], 0)) - 1)
        for pair, text in Q8_F2.items()
    }

    def build(kb: Key, kc: Key) -> GradedMap:
        (b, i), (c, j) = kb, kc
        degree = ring.degree_of(kb) + ring.degree_of(kc) - 1
        base = core.get((b, c))
        if base is None:
            return zero(res, degree)
        if i + j == 0:
            return base
        return compose(base, shift(res, 4 * (i + j), f"s^{i + j}"))

    selection = HomotopySelection(ring, build)
    report = selection.check([((b, 0), (c, 0)) for b, c in core], window)
    if not report.passed:
        logger.error(f"Q8 f2 table fails verification: {report.failures}")
        raise TranscriptionFailure(f"Q8 f2 table fails at {report.failures}")
    logger.info("Q8 f2 table verified")
    return selection


def q8_h(f2: HomotopySelection, kb: Key, kc: Key) -> GradedMap:
    """h(b,c) = s̄ f2(b,c) s̄⁻¹ - f2(b,c), the failure of f2 to be 4-periodic."""
    c = f2.ring.catalog
    raw = f2(kb, kc)
    return (compose(compose(c["s"], raw), c["s^-1"]) - raw).named(f"h{f2.label(kb, kc)}")


def q8_h_class_table(f2: HomotopySelection) -> dict[tuple[str, str], RingElement]:
    ring = f2.ring
    return {(b, c): ring.class_of(q8_h(f2, (b, 0), (c, 0))) for b in Q8_CORE for c in Q8_CORE}


def q8_left_class_table(f2: HomotopySelection, letter: str) -> dict[tuple[str, str], RingElement]:
    """𝒞(ℓ̄ f2(b,c)) for ℓ in x, y over the core basis."""
    ring = f2.ring
    left = ring.catalog[letter]
    return {
        (b, c): ring.class_of(compose(left, f2((b, 0), (c, 0))))
        for b in Q8_CORE
        for c in Q8_CORE
    }


def q8_m_via_h(f2: HomotopySelection, kb: Key, kc: Key) -> RingElement:
    """m(s,b,c) = -𝒞(h(b,c))s."""
    ring = f2.ring
    value = ring.multiply(ring.class_of(q8_h(f2, kb, kc)), ring.element(("1", 1)))
    return ring.neg(value)


def q8_class_identities(ring: NamedRing, max_degree: int = 3) -> CheckReport:
    """
    𝒞 on monomials around p̄, q̄, r̄:

    𝒞(p̄α) = 𝒞(q̄α) = 𝒞(x̄q̄α) = 0, 𝒞(x̄p̄α) = x²𝒞(α), 𝒞(ȳp̄α) = 𝒞(ȳq̄α) = y²𝒞(α),
    𝒞(βp̄α) = 𝒞(βq̄α) = 0 for |β| >= 2 and 𝒞(βr̄α) = 0, for monomials α, β in
    x̄, ȳ of degree at most ``max_degree``.
    """
    c = ring.catalog
    words = [""] + ["".join(w) for n in range(1, max_degree + 1) for w in product("xy", repeat=n)]
    x2, y2 = ring.parse("x^2"), ring.parse("y^2")

    def word_map(word: str) -> GradedMap:
        return q8_word(c, word) if word else identity(ring.res)

    failures = []
    for alpha in words:
        a = word_map(alpha)
        ca = ring.class_of(a)
        expectations = {
            f"p{alpha}": ring.zero(ca.degree + 1),
            f"q{alpha}": ring.zero(ca.degree + 1),
            f"xq{alpha}": ring.zero(ca.degree + 2),
            f"xp{alpha}": ring.multiply(x2, ca),
            f"yp{alpha}": ring.multiply(y2, ca),
            f"yq{alpha}": ring.multiply(y2, ca),
        }
        for beta in words:
            expectations[f"{beta}r{alpha}"] = ring.zero(len(beta) + 2 + ca.degree)
            if len(beta) >= 2:
                expectations[f"{beta}p{alpha}"] = ring.zero(len(beta) + 1 + ca.degree)
                expectations[f"{beta}q{alpha}"] = ring.zero(len(beta) + 1 + ca.degree)
        for word, expected in expectations.items():
            if ring.class_of(q8_word(c, word)) != expected:
                failures.append(word)
    logger.info(f"Q8 class identities up to degree {max_degree}: {len(failures)} failures")
    return CheckReport(name="q8-class-identities", passed=not failures, failures=failures)


# Abelian products --------------------------------------------------------------------------

Letter = tuple  # ("u", i) | ("v", i) | ("phi", alpha), factor indices 1-based


class AbelianRewriter:
    """
    f2(b,c) for abelian products by rewriting the word f1(b)f1(c) into f1(bc).

    Each step replaces a subword X of A X B by X' with dH = X - X' and adds
    (-1)^{|A|} A H B to the homotopy. Steps, in order of preference:

    - a φ̄ letter absorbs its left (else right) neighbour; X' is the named
      representative of the class of X and H an I-map null-homotopy of the
      difference, corrected by dΨ(.., ȳ^β q̄, ..) when the difference is not J_2;
    - letters on different factors are swapped with the commutator homotopy;
    - v̄_i ū_i = ū_i v̄_i exactly;
    - ū_i ū_i is v̄_i (m_i = 2) or dΦ(q̄_i) (m_i >= 4).
    """

    def __init__(self, ring: NamedRing, window: Optional[tuple[int, int]] = None):
        if ring.family != "abelian":
            raise WrongKind(f"Abelian f2 needs an abelian ring, got {ring.family}")
        self.ring = ring
        self.res = ring.res
        self.field = ring.field
        self.catalog = ring.catalog
        self.window = _window(window)
        self.exponents = self.res.exponents

    # words
    def letter_map(self, letter: Letter) -> GradedMap:
        kind, index = letter
        if kind == "phi":
            return self.catalog.phi(index)
        return self.catalog.u(index) if kind == "u" else self.catalog.v(index)

    def letter_degree(self, letter: Letter) -> int:
        kind, index = letter
        if kind == "phi":
            return -sum(index) - 1
        return 1 if kind == "u" else 2

    def degree(self, word: Sequence[Letter]) -> int:
        return sum(self.letter_degree(L) for L in word)

    def word_map(self, word: Sequence[Letter]) -> Optional[GradedMap]:
        if not word:
            return None
        out = self.letter_map(word[0])
        for L in word[1:]:
            out = compose(out, self.letter_map(L))
        return out

    def word_of(self, key: Key) -> tuple:
        kind, alpha = key
        if kind == "phi":
            return (("phi", tuple(alpha)),)
        word = []
        for i, a in enumerate(alpha, start=1):
            if a % 2:
                word.append(("u", i))
            word.extend([("v", i)] * (a // 2))
        return tuple(word)

    def key_of(self, word: Sequence[Letter]) -> Key:
        if len(word) == 1 and word[0][0] == "phi":
            return word[0]
        alpha = [0] * self.res.r
        for kind, i in word:
            alpha[i - 1] += 1 if kind == "u" else 2
        return ("pos", tuple(alpha))

    def _sandwich(self, left: Sequence[Letter], H: GradedMap, right: Sequence[Letter]) -> GradedMap:
        out = H
        A = self.word_map(left)
        B = self.word_map(right)
        if A is not None:
            out = compose(A, out)
        if B is not None:
            out = compose(out, B)
        return out

    # steps
    @staticmethod
    def _rank(letter: Letter) -> tuple[int, int]:
        kind, i = letter
        return i, 0 if kind == "u" else 1

    def _step(self, word: tuple):
        """(start, stop, replacements, H) for the first applicable rewrite, or None."""
        phis = [k for k, L in enumerate(word) if L[0] == "phi"]
        if phis:
            if len(word) == 1:
                return None
            k = phis[0]
            start = k - 1 if k > 0 else 0
            replacements, H = self._absorb(word[start : start + 2])
            return start, start + 2, replacements, H
        for k in range(len(word) - 1):
            L, R = word[k], word[k + 1]
            if self._rank(L) <= self._rank(R):
                continue
            if L[1] == R[1]:
                return k, k + 2, [(1, (R, L))], None
            sign = self.field.sign(self.letter_degree(L) * self.letter_degree(R))
            name = {"u": "x", "v": "y"}
            h = self.catalog.commutator_homotopy(name[L[0]], L[1], name[R[0]], R[1])
            return k, k + 2, [(sign, (R, L))], h
        for k in range(len(word) - 1):
            L, R = word[k], word[k + 1]
            if L == R and L[0] == "u":
                i = L[1]
                if self.exponents[i - 1] == 2:
                    return k, k + 2, [(1, (("v", i),))], None
                fc = self.catalog.factor_catalogs[i - 1]
                return k, k + 2, [], phi(self.res, fc["q"], i - 1).named(f"Φ{i}(q)")
        return None

    def _absorb(self, X: tuple):
        ring = self.ring
        full = self.word_map(X)
        cls = ring.class_of(full)
        replacements = [(c, self.word_of(key)) for c, key in ring.terms(cls)]
        g = (full - ring.representative(cls)).named(f"[{full.name}]")
        return replacements, self._null_homotopy(g, X)

    def _q_correction(self, alpha: tuple, i: int) -> GradedMap:
        """Ψ of the φ̄_α factors with ȳ^β x̄ replaced by ȳ^β q̄ on factor i."""
        fcs = self.catalog.factor_catalogs
        factors = [phi_factor(fc, a) for fc, a in zip(fcs, alpha)]
        beta = (-alpha[i - 1] - 2) // 2
        fc = fcs[i - 1]
        factors[i - 1] = compose(shift(fc.res, 2 * beta, f"y^{beta}"), fc["q"]).named(f"y^{beta}q")
        return psi(self.res, factors)

    def _null_homotopy(self, g: GradedMap, X: tuple) -> GradedMap:
        if g.degree <= 0:
            try:
                return null_homotopy_Imap(g, self.window)
            except NotJ2Map:
                pass
        elif is_ideal_map(g, J(2), self.window):
            return _imap_homotopy(g)
        letters = [L for L in X if L[0] != "phi"]
        phis = [L for L in X if L[0] == "phi"]
        if len(letters) == 1 and len(phis) == 1 and letters[0][0] == "u":
            i = letters[0][1]
            alpha = phis[0][1]
            if alpha[i - 1] % 2 == 0 and self.exponents[i - 1] >= 4:
                Q = self._q_correction(alpha, i)
                dQ = dga_differential(Q)
                for c in dict.fromkeys((1, self.field.sign(1))):
                    logger.warning(f"{g.name} is not J_2; trying the correction {c}*d{Q.name}")
                    shifted = g - scale(dQ, c)
                    if is_ideal_map(shifted, J(2), self.window):
                        return _imap_homotopy(shifted) + scale(Q, c)
        raise NotJ2Map(f"{g.name} admits no J_2 correction on {self.window}")

    # f2
    def f2(self, kb: Key, kc: Key) -> GradedMap:
        ring = self.ring
        field = self.field
        degree = ring.degree_of(kb) + ring.degree_of(kc) - 1
        terms = [(1, self.word_of(kb) + self.word_of(kc))]
        pieces: list[tuple[int, GradedMap]] = []
        normal: dict[Key, int] = {}
        while terms:
            c, word = terms.pop()
            step = self._step(word)
            if step is None:
                key = self.key_of(word)
                normal[key] = field.add(normal.get(key, 0), c)
                continue
            start, stop, replacements, H = step
            left, right = word[:start], word[stop:]
            for s, new in replacements:
                terms.append((field.mul(c, s), left + tuple(new) + right))
            if H is not None:
                pieces.append((field.mul(c, field.sign(self.degree(left))), self._sandwich(left, H, right)))
        got = ring.zero(degree + 1)
        for key, c in normal.items():
            got = ring.add(got, ring.element(key, c))
        expected = ring.basis_product(kb, kc)
        if got != expected:
            raise CrossCheckMismatch(
                f"Rewriting {ring.key_name(kb)}*{ring.key_name(kc)} gave {ring.format(got)}, "
                f"ring product is {ring.format(expected)}"
            )
        name = f"f2({ring.key_name(kb)},{ring.key_name(kc)})"
        return linear_combination(self.res, degree, pieces).named(name)


def check_abelian_regime(res) -> None:
    if res.r < 3 or 3 in res.exponents:
        raise RegimeViolation(
            f"I-map f2 needs r >= 3 and no factor of order 3, got exponents {res.exponents}"
        )


def build_f2_abelian(ring: NamedRing, window: Optional[tuple[int, int]] = None) -> HomotopySelection:
    """
    I-map homotopy selection for abelian products with r >= 3 and every m_i != 3.

    Parameters:
    -----------
    ring: NamedRing
        Named ring of an abelian product resolution.
    window: tuple
        Degrees for the J_2 checks of the lifting steps.
    """
    check_abelian_regime(ring.res)
    rewriter = AbelianRewriter(ring, window)
    return HomotopySelection(ring, rewriter.f2)


def build_f2(ring: NamedRing, window: Optional[tuple[int, int]] = None) -> HomotopySelection:
    if ring.family == "q8":
        return build_f2_q8(ring, window)
    if ring.family == "cyclic":
        return build_f2_cyclic(ring)
    return build_f2_abelian(ring, window)


# m ----------------------------------------------------------------------------------------


def m_map(f2: HomotopySelection, a: RingElement, b: RingElement, c: RingElement) -> GradedMap:
    ring = f2.ring
    field = ring.field
    minus = field.sign(1)
    ab = ring.multiply(a, b)
    bc = ring.multiply(b, c)
    degree = a.degree + b.degree + c.degree - 1
    terms = [
        (1, compose(f2.of(a, b), ring.representative(c))),
        (minus, f2.of(a, bc)),
        (1, f2.of(ab, c)),
        (field.neg(field.sign(a.degree)), compose(ring.representative(a), f2.of(b, c))),
    ]
    return linear_combination(ring.res, degree, terms)


def secondary_m(
    f2: HomotopySelection,
    a: RingElement,
    b: RingElement,
    c: RingElement,
    window: Optional[tuple[int, int]] = None,
    check: bool = True,
) -> RingElement:
    """
    m(a,b,c) as a named ring element.

    Raises NotACocycle when the assembled map is not a cocycle on the window,
    which means f1 and f2 are inconsistent.
    """
    g = m_map(f2, a, b, c)
    if check:
        window = _window(window)
        if not is_cocycle(g, window):
            ring = f2.ring
            names = ", ".join(ring.format(e) for e in (a, b, c))
            logger.error(f"m({names}) is not a cocycle on {window}")
            raise NotACocycle(f"m({names}) is not a cocycle on {window}")
    return f2.ring.class_of(g)


class MTable:
    """
    m on named basis triples.

    ``entries`` holds the computed domain; other triples go through ``resolve``
    (extension rules or direct evaluation) and are zero when there is none.
    """

    def __init__(
        self,
        ring: NamedRing,
        entries: dict[Triple, RingElement],
        resolve: Optional[Callable[[Key, Key, Key], RingElement]] = None,
        family: str = "",
    ):
        self.ring = ring
        self.entries = dict(entries)
        self.family = family or ring.family
        self._resolve = resolve
        self._extra: dict[Triple, RingElement] = {}

    def value(self, ka: Key, kb: Key, kc: Key) -> RingElement:
        triple = (ka, kb, kc)
        v = self.entries.get(triple)
        if v is not None:
            return v
        v = self._extra.get(triple)
        if v is None:
            ring = self.ring
            degree = sum(ring.degree_of(k) for k in triple) - 1
            v = self._resolve(self, *triple) if self._resolve else ring.zero(degree)
            self._extra[triple] = v
        return v

    def of(self, a: RingElement, b: RingElement, c: RingElement) -> RingElement:
        ring = self.ring
        field = ring.field
        out = ring.zero(a.degree + b.degree + c.degree - 1)
        for ca, ka in ring.terms(a):
            for cb, kb in ring.terms(b):
                for cc, kc in ring.terms(c):
                    coeff = field.mul(ca, field.mul(cb, cc))
                    out = ring.add(out, ring.scale(self.value(ka, kb, kc), coeff))
        return out

    def with_entry(self, triple: Triple, value: RingElement) -> "MTable":
        entries = dict(self.entries)
        entries[triple] = value
        return MTable(self.ring, entries, self._resolve, self.family)

    def nonzero(self) -> list[tuple[Triple, RingElement]]:
        return [(t, v) for t, v in self.entries.items() if not v.is_zero()]

    def is_zero(self) -> bool:
        return not self.nonzero()

    def triple_name(self, triple: Triple) -> tuple[str, str, str]:
        return tuple(self.ring.key_name(k) for k in triple)

    def report(self, group: str, field: str, checks: Sequence[CheckReport] = ()) -> MTableReport:
        entries = [
            MEntry(triple=self.triple_name(t), value=self.ring.format(v)) for t, v in self.nonzero()
        ]
        return MTableReport(
            group=group,
            field=field,
            entries=entries,
            zero_count=len(self.entries) - len(entries),
            checks=list(checks),
        )


def q8_domain() -> list[Triple]:
    """(ℬ ∪ ℬs) × ℬ × ℬ in the order of Q8_CORE, ℬs after ℬ."""
    firsts = Q8_CORE_KEYS + [(b, 1) for b in Q8_CORE]
    return [(a, b, c) for a in firsts for b in Q8_CORE_KEYS for c in Q8_CORE_KEYS]


def _q8_resolve(table: MTable, ka: Key, kb: Key, kc: Key) -> RingElement:
    """m(as^{2h+e}, bs^i, cs^j) = m(as^e, b, c)s^{2h+i+j}."""
    ring = table.ring
    (a, i), (b, j), (c, l) = ka, kb, kc
    e = i % 2
    value = table.entries[((a, e), (b, 0), (c, 0))]
    power = i - e + j + l
    if power == 0:
        return value
    return ring.multiply(value, ring.element(("1", power)))


def default_triples(ring: NamedRing, bound: Optional[int] = None) -> list[Triple]:
    bound = settings.TRIPLE_DEGREE if bound is None else bound
    keys = [k for n in range(-bound, bound + 1) for k in ring.basis(n)]
    return [(a, b, c) for a in keys for b in keys for c in keys]


def full_m_table(
    f2: HomotopySelection,
    triples: Optional[Sequence[Triple]] = None,
    window: Optional[tuple[int, int]] = None,
    check: bool = True,
) -> MTable:
    """
    m on a finite domain of named triples.

    For Q8 the domain is (ℬ ∪ ℬs) × ℬ × ℬ; the ℬs rows are also derived from
    m(s,b,c) = -𝒞(h(b,c))s and m(as,b,c) = (-1)^{|a|} a·m(s,b,c) + m(a,b,c)s,
    and any disagreement with direct evaluation raises CrossCheckMismatch.
    """
    ring = f2.ring
    q8 = ring.family == "q8"
    if triples is None:
        triples = q8_domain() if q8 else default_triples(ring)

    def evaluate(triple: Triple) -> RingElement:
        a, b, c = (ring.element(k) for k in triple)
        return secondary_m(f2, a, b, c, window, check)

    with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as pool:
        values = list(pool.map(evaluate, triples))
    entries = dict(zip(triples, values))
    logger.info(f"m-table over {ring.res}: {len(entries)} triples, {sum(not v.is_zero() for v in values)} nonzero")

    if not q8:
        def resolve(table: MTable, ka: Key, kb: Key, kc: Key) -> RingElement:
            return evaluate((ka, kb, kc))

        return MTable(ring, entries, resolve)

    table = MTable(ring, entries, _q8_resolve)
    field = ring.field
    s = ring.element(("1", 1))
    for (a, e), kb, kc in triples:
        if e != 1 or ((a, 1), kb, kc) not in entries:
            continue
        via_h = q8_m_via_h(f2, kb, kc)
        direct_s = entries.get((("1", 1), kb, kc), via_h)
        if via_h != direct_s:
            raise CrossCheckMismatch(f"m(s,{ring.key_name(kb)},{ring.key_name(kc)}): h-route {ring.format(via_h)} vs {ring.format(direct_s)}")
        ka = (a, 0)
        sign = field.sign(ring.degree_of(ka))
        derived = ring.add(
            ring.scale(ring.multiply(ring.element(ka), via_h), sign),
            ring.multiply(entries[(ka, kb, kc)], s),
        )
        direct = entries[((a, 1), kb, kc)]
        if derived != direct:
            name = f"m({ring.key_name((a, 1))},{ring.key_name(kb)},{ring.key_name(kc)})"
            logger.error(f"{name}: derived {ring.format(derived)}, direct {ring.format(direct)}")
            raise CrossCheckMismatch(f"{name}: derived {ring.format(derived)}, direct {ring.format(direct)}")
    return table


# Hochschild checks --------------------------------------------------------------------------


def hochschild_cocycle_check(table: MTable, keys: Sequence[Key]) -> CheckReport:
    """
    (-1)^{|a|} a·m(b,c,d) - m(ab,c,d) + m(a,bc,d) - m(a,b,cd) + m(a,b,c)·d = 0
    for all 4-tuples of the given keys.
    """
    ring = table.ring
    field = ring.field
    minus = field.sign(1)
    failures = []
    for ka, kb, kc, kd in product(keys, repeat=4):
        a, b, c, d = (ring.element(k) for k in (ka, kb, kc, kd))
        total = ring.scale(ring.multiply(a, table.of(b, c, d)), field.sign(a.degree))
        total = ring.add(total, ring.scale(table.of(ring.multiply(a, b), c, d), minus))
        total = ring.add(total, table.of(a, ring.multiply(b, c), d))
        total = ring.add(total, ring.scale(table.of(a, b, ring.multiply(c, d)), minus))
        total = ring.add(total, ring.multiply(table.of(a, b, c), d))
        if not total.is_zero():
            failures.append(",".join(ring.key_name(k) for k in (ka, kb, kc, kd)))
    logger.info(f"Hochschild check over {len(keys)} keys: {len(failures)} failures")
    return CheckReport(name="hochschild", passed=not failures, failures=failures[:20])


class Obstruction(BaseModel):
    """Outcome of solving m = δg on a sector of pairs."""

    consistent: bool
    rows: int
    unknowns: int
    g: dict[str, str] = Field(default_factory=dict)
    certificate: list[str] = Field(default_factory=list)
    required_rows_present: bool = True


# rows of the hand argument that m is not a coboundary
Q8_OBSTRUCTION_TRIPLES = [("y", "x", "y"), ("x", "y", "y"), ("x", "x", "x"), ("x", "y", "x"), ("y", "y", "x")]


def coboundary_obstruction(
    table: MTable,
    sector: Sequence[Key],
    required: Sequence[Triple] = (),
) -> Obstruction:
    """
    Decide whether m = δg for a cochain g on sector × sector, with

        (δg)(a,b,c) = (-1)^{|a|} a g(b,c) - g(ab,c) + g(a,bc) - g(a,b)c,

    using every triple whose expansion only meets pairs of the sector. When the
    system is inconsistent, the certificate is a row combination annihilating
    δ but not m, of smallest support among a nullspace basis.
    """
    ring = table.ring
    field = ring.field
    minus = field.sign(1)
    sector = list(sector)
    inside = set(sector)

    offsets: dict[tuple[Key, Key], int] = {}
    total = 0
    for kb, kc in product(sector, repeat=2):
        offsets[(kb, kc)] = total
        total += len(ring.basis(ring.degree_of(kb) + ring.degree_of(kc) - 1))

    def expand(x: RingElement) -> Optional[list[tuple[int, Key]]]:
        terms = ring.terms(x)
        return terms if all(k in inside for _, k in terms) else None

    def multiplication_matrix(x: RingElement, degree: int, on_left: bool) -> np.ndarray:
        sources = ring.basis(degree)
        M = np.zeros((len(ring.basis(degree + x.degree)), len(sources)), dtype=np.int64)
        for col, k in enumerate(sources):
            e = ring.element(k)
            M[:, col] = (ring.multiply(x, e) if on_left else ring.multiply(e, x)).coords
        return M

    blocks, rhs, labels, used = [], [], [], set()
    for ka, kb, kc in product(sector, repeat=3):
        a, b, c = (ring.element(k) for k in (ka, kb, kc))
        ab, bc = expand(ring.multiply(a, b)), expand(ring.multiply(b, c))
        if ab is None or bc is None:
            continue
        degree = a.degree + b.degree + c.degree - 1
        height = len(ring.basis(degree))
        row = np.zeros((height, total), dtype=np.int64)

        def add_block(pair, M, coeff):
            off = offsets[pair]
            row[:, off : off + M.shape[1]] = field.add(row[:, off : off + M.shape[1]], field.mul(M, coeff))

        bc_degree = b.degree + c.degree - 1
        add_block((kb, kc), multiplication_matrix(a, bc_degree, True), field.sign(a.degree))
        for coeff, k in ab:
            eye = np.eye(height, dtype=np.int64)
            add_block((k, kc), eye, field.mul(coeff, minus))
        for coeff, k in bc:
            eye = np.eye(height, dtype=np.int64)
            add_block((ka, k), eye, coeff)
        add_block((ka, kb), multiplication_matrix(c, a.degree + b.degree - 1, False), minus)
        blocks.append(row)
        rhs.extend(table.value(ka, kb, kc).coords)
        name = ",".join(ring.key_name(k) for k in (ka, kb, kc))
        labels.extend(f"({name})[{ring.key_name(k)}]" for k in ring.basis(degree))
        used.add((ka, kb, kc))

    required_present = all(t in used for t in required)
    M = np.vstack(blocks) if blocks else np.zeros((0, total), dtype=np.int64)
    b = np.array(rhs, dtype=np.int64)
    x = solve(field, M, b)
    logger.info(f"Coboundary system: {M.shape[0]} rows, {total} unknowns, {'consistent' if x is not None else 'inconsistent'}")
    if x is not None:
        g = {}
        for (kb, kc), off in offsets.items():
            n = ring.degree_of(kb) + ring.degree_of(kc) - 1
            value = tuple(int(v) for v in x[off : off + len(ring.basis(n))])
            if any(value):
                g[f"{ring.key_name(kb)},{ring.key_name(kc)}"] = ring.format(RingElement(degree=n, coords=value))
        return Obstruction(consistent=True, rows=M.shape[0], unknowns=total, g=g, required_rows_present=required_present)

    left_null = nullspace(field, M.T)
    witnesses = [y for y in left_null if field.sum(field.mul(y, b)) != 0]
    y = min(witnesses, key=lambda v: int(np.count_nonzero(v)))
    certificate = [f"{field.format(int(c))}*{labels[i]}" for i, c in enumerate(y) if c]
    return Obstruction(
        consistent=False,
        rows=M.shape[0],
        unknowns=total,
        certificate=certificate,
        required_rows_present=required_present,
    )


def q8_obstruction(table: MTable) -> Obstruction:
    required = [tuple((b, 0) for b in t) for t in Q8_OBSTRUCTION_TRIPLES]
    result = coboundary_obstruction(table, Q8_CORE_KEYS, required)
    if not result.required_rows_present:
        raise CrossCheckMismatch("Coboundary system over the core basis misses a required row")
    return result


def selection_certificate(
    f2: HomotopySelection, keys: Sequence[Key], window: Optional[tuple[int, int]] = None
) -> CheckReport:
    """Every f2(b,c) on the given keys is a valid, normalized I-map."""
    report = f2.check(product(keys, repeat=2), window, I())
    return report.model_copy(update={"name": "imap-f2"})
