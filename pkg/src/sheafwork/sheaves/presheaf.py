"""Presheaf tables over all open sets, sheafification and the sheaf axioms.

Tables are exponential in the number of points, so they are only built
for axiom checks and sheafification; sheaves themselves are stalk functors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

from sheafwork.core.errors import (
    FunctorialityViolation,
    IllFormedHom,
    NaturalityViolation,
    NotACover,
    SchemaError,
)
from sheafwork.exactalg import (
    FpGroup,
    GroupHom,
    GroupInvariants,
    IntMatrix,
    cohomology_at,
    direct_sum,
    hom_parts,
)
from sheafwork.finspace import DEFAULT_OPENS_CAP, FiniteSpace, OpenSet
from sheafwork.sheaves.sheaf import (
    Sheaf,
    SheafHom,
    build_sheaf,
    restriction_map,
    section_map,
    sections,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PresheafTable:
    """A group for every open set and a restriction for every V ⊊ U."""

    space: FiniteSpace
    opens: tuple[OpenSet, ...]
    groups: Mapping[OpenSet, FpGroup]
    restrictions: Mapping[tuple[OpenSet, OpenSet], GroupHom]
    name: str = "presheaf"

    def group(self, U: OpenSet) -> FpGroup:
        try:
            return self.groups[U]
        except KeyError:
            raise SchemaError(f"Presheaf '{self.name}' has no group over {U.label()}", path="$.groups")

    def restrict(self, U: OpenSet, V: OpenSet) -> GroupHom:
        """ρ^U_V : P(U) → P(V) for V ⊆ U."""
        if U == V:
            return GroupHom.identity(self.group(U))
        try:
            return self.restrictions[(U, V)]
        except KeyError:
            raise SchemaError(
                f"Presheaf '{self.name}' has no restriction {U.label()} → {V.label()}",
                path="$.restrictions",
            )


def build_table(
    space: FiniteSpace,
    groups: Mapping[OpenSet, FpGroup],
    restrictions: Mapping[tuple[OpenSet, OpenSet], GroupHom],
    name: str = "presheaf",
    cap: int = DEFAULT_OPENS_CAP,
) -> PresheafTable:
    """Validate a presheaf table: a group on every open, functorial restrictions."""
    opens = tuple(space.enumerate_opens(cap))
    for U in opens:
        if U not in groups:
            raise SchemaError(f"No group given over {U.label()}", path="$.groups")
    for U in opens:
        for V in opens:
            if V == U or not V.issubset(U):
                continue
            hom = restrictions.get((U, V))
            if hom is None:
                raise SchemaError(
                    f"No restriction given for {U.label()} → {V.label()}", path="$.restrictions"
                )
            if hom.source != groups[U] or hom.target != groups[V]:
                raise IllFormedHom(f"Restriction {U.label()} → {V.label()} has the wrong ends")
    table = PresheafTable(
        space=space,
        opens=opens,
        groups=MappingProxyType(dict(groups)),
        restrictions=MappingProxyType(dict(restrictions)),
        name=name,
    )
    for U in opens:
        for V in opens:
            if V == U or not V.issubset(U):
                continue
            for W in opens:
                if W == V or not W.issubset(V):
                    continue
                composite = table.restrict(V, W).after(table.restrict(U, V))
                if not composite.equals(table.restrict(U, W)):
                    raise FunctorialityViolation(
                        f"Restrictions {U.label()} ⊇ {V.label()} ⊇ {W.label()} do not compose",
                        triple=[list(U.points), list(V.points), list(W.points)],
                    )
    return table


def _table_from(space: FiniteSpace, group_of, map_of, name: str, cap: int) -> PresheafTable:
    opens = space.enumerate_opens(cap)
    groups = {U: group_of(U) for U in opens}
    restrictions = {
        (U, V): map_of(U, V, groups[U], groups[V])
        for U in opens
        for V in opens
        if V != U and V.issubset(U)
    }
    return build_table(space, groups, restrictions, name=name, cap=cap)


def zero_presheaf(space: FiniteSpace, cap: int = DEFAULT_OPENS_CAP) -> PresheafTable:
    return _table_from(
        space,
        lambda U: FpGroup.trivial(),
        lambda U, V, a, b: GroupHom.zero(a, b),
        "zero",
        cap,
    )


def constant_functions_presheaf(
    space: FiniteSpace, group: FpGroup, cap: int = DEFAULT_OPENS_CAP
) -> PresheafTable:
    """Constant G-valued functions: G on every nonempty open, 0 on ∅."""

    def group_of(U: OpenSet) -> FpGroup:
        return group if len(U) else FpGroup.trivial()

    def map_of(U, V, a, b) -> GroupHom:
        return GroupHom.identity(group) if len(V) else GroupHom.zero(a, b)

    return _table_from(space, group_of, map_of, "constant_functions", cap)


def global_only_presheaf(
    space: FiniteSpace, group: FpGroup, cap: int = DEFAULT_OPENS_CAP
) -> PresheafTable:
    """G over the whole space, 0 over every smaller open."""
    whole = space.whole

    def group_of(U: OpenSet) -> FpGroup:
        return group if U == whole else FpGroup.trivial()

    return _table_from(space, group_of, lambda U, V, a, b: GroupHom.zero(a, b), "global_only", cap)


def table_of_sheaf(F: Sheaf, cap: int = DEFAULT_OPENS_CAP) -> PresheafTable:
    """The presheaf of sections of a sheaf."""
    return _table_from(
        F.space,
        lambda U: sections(F, U).group,
        lambda U, V, a, b: restriction_map(F, U, V),
        f"Γ({F.name})",
        cap,
    )


def stalk_of_table(P: PresheafTable, p: str) -> FpGroup:
    """The direct limit over opens containing p, attained at U_p."""
    return P.group(P.space.minimal_open(p))


@dataclass(frozen=True)
class Sheafification:
    sheaf: Sheaf
    unit: Mapping[OpenSet, GroupHom]

    def unit_is_isomorphism(self) -> bool:
        return all(
            parts.is_injective and parts.is_surjective
            for parts in (hom_parts(theta) for theta in self.unit.values())
        )


def _stack_restrictions(P: PresheafTable, U: OpenSet, targets: Sequence[OpenSet]) -> IntMatrix:
    return IntMatrix.vstack(
        [P.restrict(U, V).matrix for V in targets], cols=P.group(U).generators
    )


def sheafify(P: PresheafTable) -> Sheafification:
    space = P.space
    stalks = {p: stalk_of_table(P, p) for p in space.points}
    restrictions = {
        (p, q): P.restrict(space.minimal_open(p), space.minimal_open(q))
        for q, p in space.covering_pairs
    }
    sheaf = build_sheaf(space, stalks, restrictions, name=f"{P.name}+")
    unit = {}
    for U in P.opens:
        gamma = sections(sheaf, U)
        stacked = _stack_restrictions(P, U, [space.minimal_open(p) for p in U.points])
        unit[U] = GroupHom(P.group(U), gamma.group, gamma.quotient.coordinates_matrix(stacked))
    return Sheafification(sheaf=sheaf, unit=MappingProxyType(unit))


@dataclass(frozen=True)
class SheafAxiomReport:
    open_set: OpenSet
    cover: tuple[OpenSet, ...]
    uniqueness: bool
    gluing: bool
    kernel: GroupInvariants
    obstruction: GroupInvariants

    def to_dict(self) -> dict:
        return {
            "open": list(self.open_set.points),
            "cover": [list(V.points) for V in self.cover],
            "uniqueness": self.uniqueness,
            "gluing": self.gluing,
            "kernel": self.kernel.to_dict(),
            "obstruction": self.obstruction.to_dict(),
        }


def check_sheaf_axioms(P: PresheafTable, U: OpenSet, cover: Sequence[OpenSet]) -> SheafAxiomReport:
    """Run 0 → P(U) → ∏ P(U_i) → ∏_{i<j} P(U_i ∩ U_j) with (δω)_ij = ω_j − ω_i."""
    space = P.space
    for V in cover:
        if not space.is_open(V.members) or not V.issubset(U):
            raise NotACover(f"{V.label()} is not an open subset of {U.label()}")
    union = frozenset().union(*(V.members for V in cover))
    if union != U.members:
        raise NotACover(f"Cover does not cover {U.label()}", missing=sorted(U.members - union))
    cover = tuple(cover)

    product = direct_sum([P.group(V) for V in cover])
    r = GroupHom(P.group(U), product, _stack_restrictions(P, U, cover))

    offsets = []
    offset = 0
    for V in cover:
        offsets.append(offset)
        offset += P.group(V).generators
    overlaps = [
        (i, j, space.open_set(cover[i].members & cover[j].members))
        for i in range(len(cover))
        for j in range(i + 1, len(cover))
    ]
    rows = []
    for i, j, W in overlaps:
        to_i = P.restrict(cover[i], W).matrix.to_rows()
        to_j = P.restrict(cover[j], W).matrix.to_rows()
        for k in range(P.group(W).generators):
            row = [0] * product.generators
            for c, value in enumerate(to_j[k]):
                row[offsets[j] + c] += value
            for c, value in enumerate(to_i[k]):
                row[offsets[i] + c] -= value
            rows.append(row)
    overlap_product = direct_sum([P.group(W) for _, _, W in overlaps])
    delta = GroupHom(product, overlap_product, IntMatrix.from_rows(rows, cols=product.generators))

    kernel = hom_parts(r).kernel
    obstruction = cohomology_at(r, delta).group
    return SheafAxiomReport(
        open_set=U,
        cover=cover,
        uniqueness=kernel.is_trivial,
        gluing=obstruction.is_trivial,
        kernel=kernel.invariants,
        obstruction=obstruction.invariants,
    )


def minimal_open_cover(space: FiniteSpace, U: OpenSet) -> tuple[OpenSet, ...]:
    return tuple(space.minimal_open(p) for p in U.points)


def extend_through_sheafification(
    sheafification: Sheafification,
    P: PresheafTable,
    G: Sheaf,
    phi: Mapping[OpenSet, GroupHom],
) -> SheafHom:
    """The unique φ⁺: P⁺ → G with φ⁺ ∘ θ = φ, for a presheaf map φ: P → Γ(·, G)."""
    space = P.space
    for U in P.opens:
        hom = phi.get(U)
        if hom is None or hom.source != P.group(U) or hom.target != sections(G, U).group:
            raise IllFormedHom(f"Presheaf map is missing or ill-formed over {U.label()}")
    for U in P.opens:
        for V in P.opens:
            if V != U and V.issubset(U):
                left = restriction_map(G, U, V).after(phi[U])
                right = phi[V].after(P.restrict(U, V))
                if not left.equals(right):
                    raise NaturalityViolation(
                        f"Presheaf map does not commute with {U.label()} → {V.label()}"
                    )
    stalk_maps = {}
    for p in space.points:
        Up = space.minimal_open(p)
        stalk_maps[p] = sections(G, Up).projections[p].after(phi[Up])
    extension = SheafHom(sheafification.sheaf, G, stalk_maps)
    for U in P.opens:
        composite = section_map(extension, U).after(sheafification.unit[U])
        if not composite.equals(phi[U]):
            raise NaturalityViolation(f"Extension does not factor the map over {U.label()}")
    return extension
