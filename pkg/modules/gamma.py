"""Group contexts and the verdict on the canonical class γ.

The verdict dispatches on the group:

- Q8: the m-table is not a Hochschild coboundary on the core sector;
- cyclic of order 3: 0 is not in ⟨x, x, x⟩;
- abelian with a factor of order 3: 0 is not in ⟨u_i, u_i, u_i⟩;
- abelian with two factors: ⟨v_2, φ_(0,1), v_1⟩ = u_1 without indeterminacy;
- every other group: an I-map homotopy selection exists, hence m = 0.
"""

from __future__ import annotations

import logging
from functools import cached_property, lru_cache
from typing import Optional

from helpers import settings
from helpers.errors import CrossCheckMismatch, UnsupportedGroup
from helpers.serialization import GammaVerdict, Witness
from helpers.specs import FieldSpec, GroupSpec, parse_field, parse_group
from modules.group_algebra import quaternion_algebra, truncated_polynomial_algebra
from modules.massey import triple_massey
from modules.named_ring import NamedRing
from modules.resolution import resolution_for
from modules.scalars import make_field
from modules.secondary import (
    HomotopySelection,
    build_f2,
    default_triples,
    full_m_table,
    q8_obstruction,
    selection_certificate,
)

logger = logging.getLogger(__name__)


class GroupContext:
    """Field, algebra, resolution and named ring of one group, built once."""

    def __init__(self, group: GroupSpec, field_spec: FieldSpec):
        self.group = group
        self.field_spec = field_spec
        self.field = make_field(field_spec.p, field_spec.n, field_spec.modulus)
        if group.kind == "q8":
            self.algebra = quaternion_algebra(self.field)
        else:
            self.algebra = truncated_polynomial_algebra(self.field, group.exponents)
        self.res = resolution_for(self.algebra)

    def __repr__(self) -> str:
        return f"GroupContext({self.group.text} over {self.field_spec})"

    @cached_property
    def ring(self) -> NamedRing:
        return NamedRing(self.res)

    @cached_property
    def family(self) -> str:
        return self.ring.family

    def f2(self, window: Optional[tuple[int, int]] = None) -> HomotopySelection:
        return build_f2(self.ring, window)


@lru_cache(maxsize=None)
def _load(group_text: str, field_text: str) -> GroupContext:
    return GroupContext(parse_group(group_text), parse_field(field_text))


def load_context(group_text: str, field_text: str) -> GroupContext:
    return _load(group_text.replace(" ", ""), field_text.replace(" ", ""))


# Witnesses ------------------------------------------------------------------------


def _massey_witness(ctx: GroupContext, names: tuple[str, str, str], f2=None) -> Witness:
    ring = ctx.ring
    a, b, c = (ring.parse(n) for n in names)
    result = triple_massey(ring, a, b, c, f2)
    rep = ring.format(result.representative[0][0])
    return Witness(
        kind="massey",
        summary=f"⟨{', '.join(names)}⟩ ∋ {rep}, indeterminacy {len(result.indeterminacy)}, contains 0: {result.contains_zero}",
        data=result.report(ring).model_dump(mode="json"),
    )


def _imap_witness(ctx: GroupContext, window: tuple[int, int], bound: int) -> Witness:
    ring = ctx.ring
    f2 = ctx.f2(window)
    keys = [k for n in range(-bound, bound + 1) for k in ring.basis(n)]
    certificate = selection_certificate(f2, keys, window)
    table = full_m_table(f2, default_triples(ring, bound), window, check=False)
    nonzero = [table.triple_name(t) for t, _ in table.nonzero()]
    if not certificate.passed or nonzero:
        logger.error(f"I-map certificate for {ctx.group.text} failed: {certificate.failures[:5]}, nonzero m at {nonzero[:5]}")
        raise CrossCheckMismatch(f"No zero m-table certificate for {ctx.group.text}")
    return Witness(
        kind="imap_f2",
        summary=(
            f"{len(keys) ** 2} f2 pairs certified I-maps on {window}: {certificate.passed}; "
            f"m-table over {len(table.entries)} triples is zero: {not nonzero}"
        ),
        data={
            "pairs": len(keys) ** 2,
            "failures": certificate.failures,
            "degree_bound": bound,
            "nonzero_m": [list(t) for t in nonzero],
        },
    )


def gamma_verdict(
    ctx: GroupContext, window: Optional[tuple[int, int]] = None, bound: Optional[int] = None
) -> GammaVerdict:
    """
    Decide whether γ vanishes and attach a replayable witness.

    Parameters:
    -----------
    ctx: GroupContext
        The group and field.
    window: tuple
        Degrees on which homotopies and cocycles are checked.
    bound: int
        Degree bound for named keys in the trivial-case certificate.
    """
    window = window or (-settings.WINDOW, settings.WINDOW)
    bound = settings.TRIPLE_DEGREE if bound is None else bound
    family = ctx.family
    exponents = ctx.group.exponents

    def verdict(nontrivial: bool, witness: Witness) -> GammaVerdict:
        logger.info(f"γ for {ctx.group.text}: {'nontrivial' if nontrivial else 'trivial'} ({witness.kind})")
        return GammaVerdict(
            group=ctx.group.text,
            field=str(ctx.field_spec),
            verdict="nontrivial" if nontrivial else "trivial",
            witness=witness,
            seed=settings.SEED,
        )

    if family == "q8":
        table = full_m_table(ctx.f2(window), window=window)
        obstruction = q8_obstruction(table)
        witness = Witness(
            kind="coboundary",
            summary=(
                f"m = δg over the core sector: {'solvable' if obstruction.consistent else 'inconsistent'} "
                f"({obstruction.rows} rows, {obstruction.unknowns} unknowns)"
            ),
            data=obstruction.model_dump(mode="json"),
        )
        return verdict(not obstruction.consistent, witness)

    if family == "cyclic":
        if exponents[0] == 3:
            witness = _massey_witness(ctx, ("x", "x", "x"), ctx.f2(window))
            return verdict(not witness.data["contains_zero"], witness)
        return verdict(False, _imap_witness(ctx, window, bound))

    if family == "abelian":
        if 3 in exponents:
            i = exponents.index(3) + 1
            witness = _massey_witness(ctx, (f"u{i}", f"u{i}", f"u{i}"))
            return verdict(not witness.data["contains_zero"], witness)
        if len(exponents) == 2:
            witness = _massey_witness(ctx, ("v2", "phi(0,1)", "v1"))
            return verdict(not witness.data["contains_zero"], witness)
        return verdict(False, _imap_witness(ctx, window, bound))

    raise UnsupportedGroup(f"No γ verdict for {ctx.group.text}")
