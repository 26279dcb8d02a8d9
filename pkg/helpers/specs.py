"""Parsing of the group, field and window strings accepted on the command line.

Groups: ``Q8`` or products of cyclic factors written ``C4``, ``Z/4`` or
``Z4`` joined by ``x`` (``C2xC4xC4``). Fields: a prime ``p``, a prime power
``q`` (``4``), ``p^n`` or ``F4`` / ``GF(4)``, optionally followed by an explicit
modulus ``/c0,c1,...,1`` (``2^2/1,1,1`` is F4 with X^2+X+1). Windows: ``-9..9``.
"""

import re
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from helpers.errors import InvalidSpec, NotPrime, UnsupportedGroup

_FACTOR = re.compile(r"(?:C|Z/?)(\d+)")


class GroupSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str
    kind: Literal["q8", "abelian"]
    exponents: tuple[int, ...] = ()


class FieldSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    n: int = 1
    modulus: Optional[tuple[int, ...]] = None

    @property
    def order(self) -> int:
        return self.p**self.n

    def __str__(self) -> str:
        text = str(self.p) if self.n == 1 else f"{self.p}^{self.n}"
        if self.modulus is not None:
            text += "/" + ",".join(str(c) for c in self.modulus)
        return text


def parse_group(text: str) -> GroupSpec:
    cleaned = text.replace(" ", "")
    if not cleaned:
        raise InvalidSpec("Empty group spec")
    if cleaned.upper() == "Q8":
        return GroupSpec(text=cleaned, kind="q8")
    exponents = []
    for part in re.split(r"[x×*]", cleaned):
        m = _FACTOR.fullmatch(part)
        if not m:
            raise UnsupportedGroup(f"Unsupported group factor {part!r} in {text!r}")
        order = int(m.group(1))
        if order < 2:
            raise InvalidSpec(f"Cyclic factor of order {order} in {text!r}")
        exponents.append(order)
    return GroupSpec(text=cleaned, kind="abelian", exponents=tuple(exponents))


def _smallest_prime_factor(q: int) -> int:
    d = 2
    while d * d <= q:
        if q % d == 0:
            return d
        d += 1
    return q


def parse_field(text: str) -> FieldSpec:
    cleaned = text.replace(" ", "")
    m = re.fullmatch(r"(?:GF\((\d+)\)|F(\d+)|(\d+)(?:\^(\d+))?)(?:/(\d+(?:,\d+)*))?", cleaned)
    if not m:
        raise InvalidSpec(f"Cannot parse field spec {text!r}")
    modulus = tuple(int(c) for c in m.group(5).split(",")) if m.group(5) else None
    if m.group(3) and m.group(4):
        return FieldSpec(p=int(m.group(3)), n=int(m.group(4)), modulus=modulus)
    q = int(m.group(1) or m.group(2) or m.group(3))
    if q < 2:
        raise InvalidSpec(f"Field order {q} is too small")
    p = _smallest_prime_factor(q)
    n = 0
    while q % p == 0:
        q //= p
        n += 1
    if q != 1:
        raise NotPrime(f"Field order {text} is not a prime power")
    return FieldSpec(p=p, n=n, modulus=modulus)


def parse_window(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise InvalidSpec(f"Cannot parse window {text!r}, expected lo..hi")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise InvalidSpec(f"Empty window {text!r}")
    return lo, hi
