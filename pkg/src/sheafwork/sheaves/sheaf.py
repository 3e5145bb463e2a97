"""Sheaves on finite spaces as functors on the specialization order.

A sheaf is a stalk F_p for every point and a restriction F_p → F_q for
every q ⪯ p. Sections over an open U are the compatible families
(s_p)_{p∈U}; they are computed on demand and cached per open.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from sheafwork.core.errors import (
    ChainMismatch,
    FunctorialityViolation,
    IllFormedHom,
    MissingRestriction,
    NaturalityViolation,
    NotOpen,
    SchemaError,
)
from sheafwork.exactalg import (
    FpGroup,
    GroupHom,
    IntMatrix,
    Subquotient,
    direct_sum,
    induced_map,
    subquotient,
)
from sheafwork.exactalg.smith import preimage_lattice
from sheafwork.finspace import FiniteSpace, OpenSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SectionGroup:
    """Γ(U, F) with its projections to the stalks over U."""

    open_set: OpenSet
    group: FpGroup
    projections: Mapping[str, GroupHom]
    quotient: Subquotient
    offsets: Mapping[str, int]


@dataclass(frozen=True, eq=False)
class Sheaf:
    """Stalks plus restrictions ``restrictions[(p, q)]: F_p → F_q`` for q ≺ p.

    Construct with ``build_sheaf`` (or a builder) so functoriality is checked.
    """

    space: FiniteSpace
    stalks: Mapping[str, FpGroup]
    restrictions: Mapping[tuple[str, str], GroupHom]
    name: str = "sheaf"
    _sections: dict = field(default_factory=dict, repr=False, compare=False)

    def __repr__(self) -> str:
        return f"Sheaf(name={self.name!r}, space={self.space.name!r})"

    def stalk(self, p: str) -> FpGroup:
        return self.stalks[self.space.check_point(p)]

    def restrict(self, p: str, q: str) -> GroupHom:
        """The restriction F_p → F_q for q ⪯ p."""
        if p == q:
            return GroupHom.identity(self.stalk(p))
        try:
            return self.restrictions[(p, q)]
        except KeyError:
            self.space.check_point(p)
            self.space.check_point(q)
            raise MissingRestriction(f"'{q}' is not below '{p}' in '{self.space.name}'", pair=[p, q])

    def sections(self, U: OpenSet) -> SectionGroup:
        return sections(self, U)

    def global_sections(self) -> SectionGroup:
        return sections(self, self.space.whole)

    def same_as(self, other: "Sheaf") -> bool:
        """Structural equality: same space, stalks and restrictions."""
        if self is other:
            return True
        return (
            self.space == other.space
            and dict(self.stalks) == dict(other.stalks)
            and dict(self.restrictions) == dict(other.restrictions)
        )

    def is_zero(self) -> bool:
        return all(self.stalk(p).is_trivial for p in self.space.points)


def build_sheaf(
    space: FiniteSpace,
    stalks: Mapping[str, FpGroup],
    restrictions: Mapping[tuple[str, str], GroupHom],
    name: str = "sheaf",
) -> Sheaf:
    """Validate a stalk functor and derive the restrictions along every comparable pair.

    ``restrictions`` must cover every covering pair (q ⋖ p) as key (p, q);
    maps along longer pairs are optional and checked against the composites.
    """
    for p in stalks:
        space.check_point(p)
    for p in space.points:
        if p not in stalks:
            raise SchemaError(f"No stalk given for point '{p}'", path=f"$.stalks.{p}")

    given: dict[tuple[str, str], GroupHom] = {}
    for (p, q), hom in restrictions.items():
        space.check_point(p)
        space.check_point(q)
        if hom.source != stalks[p] or hom.target != stalks[q]:
            raise IllFormedHom(
                f"Restriction {p}:{q} does not map stalk '{p}' to stalk '{q}'", pair=[p, q]
            )
        if p == q:
            if not hom.equals(GroupHom.identity(stalks[p])):
                raise FunctorialityViolation(
                    f"Restriction {p}:{p} is not the identity", triple=[p, p, p]
                )
            continue
        if not space.leq(q, p):
            raise SchemaError(
                f"Restriction given along non-comparable pair '{p}:{q}'", path=f"$.restrictions.{p}:{q}"
            )
        given[(p, q)] = hom

    pairs = sorted(
        space.comparable_pairs(),
        key=lambda e: (len(space.strictly_between(*e)), space.index(e[1]), space.index(e[0])),
    )
    derived: dict[tuple[str, str], GroupHom] = {}
    for q, p in pairs:
        routes: list[tuple[str | None, GroupHom]] = []
        if (p, q) in given:
            routes.append((None, given[(p, q)]))
        for m in space.strictly_between(q, p):
            routes.append((m, derived[(m, q)].after(derived[(p, m)])))
        if not routes:
            raise MissingRestriction(f"No restriction given along covering pair '{p}:{q}'", pair=[p, q])
        _, reference = routes[0]
        for m, hom in routes[1:]:
            if not hom.equals(reference):
                raise FunctorialityViolation(
                    f"Restrictions along {p} ⪰ {m} ⪰ {q} disagree with the direct route",
                    triple=[p, m, q],
                )
        derived[(p, q)] = reference

    logger.debug(f"Built sheaf '{name}' on '{space.name}' ({len(derived)} restrictions)")
    return Sheaf(
        space=space,
        stalks=MappingProxyType(dict(stalks)),
        restrictions=MappingProxyType(derived),
        name=name,
    )


def sections(F: Sheaf, U: OpenSet) -> SectionGroup:
    """Compatible families over U: the kernel of ⊕_{p∈U} F_p → ⊕_{q⋖p} F_q, s ↦ ρ(s_p) − s_q."""
    if not F.space.is_open(U.members):
        raise NotOpen(f"{U.label()} is not open in '{F.space.name}'")
    cached = F._sections.get(U.members)
    if cached is not None:
        return cached

    pts = U.points
    ambient = direct_sum([F.stalk(p) for p in pts])
    offsets: dict[str, int] = {}
    offset = 0
    for p in pts:
        offsets[p] = offset
        offset += F.stalk(p).generators

    pairs = [(q, p) for q, p in F.space.covering_pairs if p in U]
    target = direct_sum([F.stalk(q) for q, _ in pairs])
    rows = []
    for q, p in pairs:
        block = [[0] * ambient.generators for _ in range(F.stalk(q).generators)]
        rho = F.restrict(p, q).matrix.to_rows()
        for i, row in enumerate(rho):
            for j, value in enumerate(row):
                block[i][offsets[p] + j] += value
            block[i][offsets[q] + i] -= 1
        rows.extend(block)
    constraint = IntMatrix.from_rows(rows, cols=ambient.generators)
    compatible = preimage_lattice(constraint, target.relation_lattice)
    quotient = subquotient(ambient, compatible, IntMatrix.zeros(ambient.generators, 0))

    projections = {}
    for p in pts:
        size = F.stalk(p).generators
        block = quotient.lift.select_rows(range(offsets[p], offsets[p] + size))
        projections[p] = GroupHom(quotient.group, F.stalk(p), block)
    result = SectionGroup(
        open_set=U,
        group=quotient.group,
        projections=MappingProxyType(projections),
        quotient=quotient,
        offsets=MappingProxyType(offsets),
    )
    F._sections[U.members] = result
    return result


def restriction_map(F: Sheaf, U: OpenSet, V: OpenSet) -> GroupHom:
    """Γ(U, F) → Γ(V, F) for V ⊆ U."""
    if not V.issubset(U):
        raise NotOpen(f"{V.label()} is not contained in {U.label()}")
    source = sections(F, U)
    target = sections(F, V)
    total = source.quotient.ambient.generators
    rows = []
    for p in V.points:
        for i in range(F.stalk(p).generators):
            row = [0] * total
            row[source.offsets[p] + i] = 1
            rows.append(row)
    selection = IntMatrix.from_rows(rows, cols=total)
    return induced_map(source.quotient, target.quotient, selection)


@dataclass(frozen=True, eq=False)
class SheafHom:
    """A natural transformation given by its stalk maps."""

    source: Sheaf
    target: Sheaf
    stalk_maps: Mapping[str, GroupHom]

    def __post_init__(self):
        space = self.source.space
        if space != self.target.space:
            raise NaturalityViolation("Source and target sheaves live on different spaces")
        for p in self.stalk_maps:
            space.check_point(p)
        for p in space.points:
            hom = self.stalk_maps.get(p)
            if hom is None:
                raise SchemaError(f"No stalk map given at point '{p}'", path=f"$.stalk_maps.{p}")
            if hom.source != self.source.stalk(p) or hom.target != self.target.stalk(p):
                raise IllFormedHom(f"Stalk map at '{p}' has the wrong source or target", point=p)
        for q, p in space.covering_pairs:
            left = self.target.restrict(p, q).after(self.stalk_maps[p])
            right = self.stalk_maps[q].after(self.source.restrict(p, q))
            if not left.equals(right):
                raise NaturalityViolation(
                    f"Stalk maps do not commute with the restriction {p}:{q}", pair=[p, q]
                )
        object.__setattr__(self, "stalk_maps", MappingProxyType(dict(self.stalk_maps)))

    @classmethod
    def identity(cls, F: Sheaf) -> "SheafHom":
        return cls(F, F, {p: GroupHom.identity(F.stalk(p)) for p in F.space.points})

    @classmethod
    def zero(cls, F: Sheaf, G: Sheaf) -> "SheafHom":
        return cls(F, G, {p: GroupHom.zero(F.stalk(p), G.stalk(p)) for p in F.space.points})

    def at(self, p: str) -> GroupHom:
        return self.stalk_maps[self.source.space.check_point(p)]

    def after(self, other: "SheafHom") -> "SheafHom":
        """Composite self ∘ other."""
        if not other.target.same_as(self.source):
            raise ChainMismatch("Cannot compose sheaf maps: target and source differ")
        return SheafHom(
            other.source,
            self.target,
            {p: self.stalk_maps[p].after(other.stalk_maps[p]) for p in self.source.space.points},
        )

    def __add__(self, other: "SheafHom") -> "SheafHom":
        return SheafHom(
            self.source,
            self.target,
            {p: self.stalk_maps[p] + other.stalk_maps[p] for p in self.source.space.points},
        )

    def is_zero(self) -> bool:
        return all(hom.is_zero() for hom in self.stalk_maps.values())

    def equals(self, other: "SheafHom") -> bool:
        return all(
            self.stalk_maps[p].equals(other.stalk_maps[p]) for p in self.source.space.points
        )


def section_map(phi: SheafHom, U: OpenSet) -> GroupHom:
    """Γ(U, F) → Γ(U, G) induced by a sheaf map."""
    source = sections(phi.source, U)
    target = sections(phi.target, U)
    block = IntMatrix.block_diagonal([phi.at(p).matrix for p in U.points])
    return induced_map(source.quotient, target.quotient, block)


# builders


def constant_sheaf(space: FiniteSpace, group: FpGroup, name: str = "const") -> Sheaf:
    identity = GroupHom.identity(group)
    return build_sheaf(
        space,
        {p: group for p in space.points},
        {(p, q): identity for q, p in space.covering_pairs},
        name=name,
    )


def skyscraper(space: FiniteSpace, point: str, group: FpGroup, name: str | None = None) -> Sheaf:
    """Stalk G on the closure of {point}, 0 elsewhere."""
    support = space.closure(point)
    trivial = FpGroup.trivial()
    stalks = {p: group if p in support else trivial for p in space.points}
    restrictions = {}
    for q, p in space.covering_pairs:
        if q in support:
            restrictions[(p, q)] = GroupHom.identity(group)
        else:
            restrictions[(p, q)] = GroupHom.zero(stalks[p], trivial)
    return build_sheaf(space, stalks, restrictions, name=name or f"skyscraper:{point}")


def zero_sheaf(space: FiniteSpace) -> Sheaf:
    return constant_sheaf(space, FpGroup.trivial(), name="zero")


def direct_sum_sheaves(sheaves: Sequence[Sheaf], name: str = "sum") -> Sheaf:
    space = sheaves[0].space
    stalks = {p: direct_sum([F.stalk(p) for F in sheaves]) for p in space.points}
    restrictions = {
        (p, q): GroupHom(
            stalks[p],
            stalks[q],
            IntMatrix.block_diagonal([F.restrict(p, q).matrix for F in sheaves]),
        )
        for q, p in space.covering_pairs
    }
    return build_sheaf(space, stalks, restrictions, name=name)
