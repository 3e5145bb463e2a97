"""Subgroups, subquotients, and the constructions built from them.

Every kernel, image, cokernel and cohomology group is a ``Subquotient``:
a numerator lattice N and a denominator lattice D ⊆ N inside the free
cover Z^n of some ambient group, both containing the ambient relations.
The subquotient carries a reduced presentation of N / D plus the maps
needed to move elements in (``coordinates``) and out (``lift``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from sheafwork.core.errors import (
    AmbientMismatch,
    ChainMismatch,
    NotAComplex,
    NotSolvable,
)
from sheafwork.exactalg.groups import FpGroup, GroupHom
from sheafwork.exactalg.matrix import IntMatrix
from sheafwork.exactalg.smith import (
    contains,
    contains_all,
    intersect,
    kernel_basis,
    lattice_basis,
    preimage_lattice,
    solve,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Subgroup:
    """The subgroup of ``ambient`` generated by the columns of ``generators``."""

    ambient: FpGroup
    generators: IntMatrix

    def __post_init__(self):
        if self.generators.rows != self.ambient.generators:
            raise AmbientMismatch(
                f"Generators live in Z^{self.generators.rows}, ambient has "
                f"{self.ambient.generators} generators"
            )

    @classmethod
    def whole(cls, ambient: FpGroup) -> "Subgroup":
        return cls(ambient, IntMatrix.identity(ambient.generators))

    @classmethod
    def zero(cls, ambient: FpGroup) -> "Subgroup":
        return cls(ambient, IntMatrix.zeros(ambient.generators, 0))

    @property
    def lattice(self) -> IntMatrix:
        """Preimage lattice in Z^n: generators plus ambient relations."""
        return lattice_basis(
            IntMatrix.hstack(
                [self.generators, self.ambient.relation_lattice], rows=self.ambient.generators
            )
        )

    def contains(self, vector: Sequence[int]) -> bool:
        return contains(self.lattice, vector)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        _same_ambient(self, other)
        return contains_all(self.lattice, other.generators)

    def as_group(self) -> FpGroup:
        return subquotient(self.ambient, self.generators, IntMatrix.zeros(self.ambient.generators, 0)).group

    def quotient(self) -> FpGroup:
        """ambient / self"""
        return subquotient(
            self.ambient, IntMatrix.identity(self.ambient.generators), self.generators
        ).group


def _same_ambient(a: Subgroup, b: Subgroup) -> None:
    if a.ambient != b.ambient:
        raise AmbientMismatch("Subgroups live in different ambient groups")


@dataclass(frozen=True)
class Subquotient:
    """N / D inside an ambient group, with a reduced presentation.

    ``projection`` sends coordinates with respect to the basis ``numerator``
    to the reduced generators; ``lift`` sends reduced generators to ambient
    vectors.
    """

    ambient: FpGroup
    numerator: IntMatrix
    group: FpGroup
    projection: IntMatrix
    lift: IntMatrix

    def coordinates(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Class of an ambient vector lying in the numerator."""
        c = solve(self.numerator, vector)
        if c is None:
            raise NotSolvable("Element does not lie in the numerator subgroup")
        return self.projection.apply(c)

    def coordinates_matrix(self, vectors: IntMatrix) -> IntMatrix:
        return IntMatrix.from_columns(
            [self.coordinates(col) for col in vectors.iter_columns()], rows=self.group.generators
        )

    def inclusion(self) -> GroupHom:
        """The map N/D → ambient/D given by lifting; a hom when D is the relation lattice."""
        return GroupHom(self.group, self.ambient, self.lift)


def subquotient(ambient: FpGroup, numerator: IntMatrix, denominator: IntMatrix) -> Subquotient:
    """Build (⟨numerator⟩ + R) / (⟨denominator⟩ + R) for ambient relations R."""
    n = ambient.generators
    relations = ambient.relation_lattice
    top = lattice_basis(IntMatrix.hstack([numerator, relations], rows=n))
    bottom = lattice_basis(IntMatrix.hstack([denominator, relations], rows=n))
    g = top.cols
    # relations among the numerator basis: coefficients c with top·c ∈ bottom
    kernel = kernel_basis(IntMatrix.hstack([top, -bottom], rows=n))
    raw = FpGroup(g, kernel.select_rows(range(g)).T)
    reduction = raw.reduced()
    logger.debug(
        f"Subquotient in Z^{n}: numerator rank {g}, denominator rank {bottom.cols}, "
        f"result {reduction.group.describe()}"
    )
    return Subquotient(
        ambient=ambient,
        numerator=top,
        group=reduction.group,
        projection=reduction.to_reduced.matrix,
        lift=top @ reduction.from_reduced.matrix,
    )


def induced_map(source: Subquotient, target: Subquotient, matrix: IntMatrix) -> GroupHom:
    """The map source.group → target.group induced by an ambient matrix."""
    images = matrix @ source.lift
    try:
        coords = target.coordinates_matrix(images)
    except NotSolvable as e:
        raise NotSolvable("Ambient map does not carry the numerator into the target numerator") from e
    return GroupHom(source.group, target.group, coords)


class HomParts(NamedTuple):
    """Kernel, image and cokernel of a homomorphism, in reduced form."""

    kernel: FpGroup
    kernel_inclusion: GroupHom
    image: FpGroup
    image_inclusion: GroupHom
    corestriction: GroupHom
    cokernel: FpGroup
    cokernel_projection: GroupHom
    kernel_quotient: Subquotient
    image_quotient: Subquotient
    cokernel_quotient: Subquotient

    @property
    def is_injective(self) -> bool:
        return self.kernel.is_trivial

    @property
    def is_surjective(self) -> bool:
        return self.cokernel.is_trivial


def hom_parts(f: GroupHom) -> HomParts:
    source, target = f.source, f.target
    kernel_q = subquotient(
        source,
        preimage_lattice(f.matrix, target.relation_lattice),
        IntMatrix.zeros(source.generators, 0),
    )
    image_q = subquotient(target, f.matrix, IntMatrix.zeros(target.generators, 0))
    cokernel_q = subquotient(target, IntMatrix.identity(target.generators), f.matrix)
    return HomParts(
        kernel=kernel_q.group,
        kernel_inclusion=GroupHom(kernel_q.group, source, kernel_q.lift),
        image=image_q.group,
        image_inclusion=GroupHom(image_q.group, target, image_q.lift),
        corestriction=GroupHom(source, image_q.group, image_q.coordinates_matrix(f.matrix)),
        cokernel=cokernel_q.group,
        cokernel_projection=GroupHom(
            target, cokernel_q.group, cokernel_q.coordinates_matrix(IntMatrix.identity(target.generators))
        ),
        kernel_quotient=kernel_q,
        image_quotient=image_q,
        cokernel_quotient=cokernel_q,
    )


class LatticeResult(NamedTuple):
    sum: Subgroup
    intersection: Subgroup
    a_contains_b: bool
    b_contains_a: bool


def subgroup_lattice(a: Subgroup, b: Subgroup) -> LatticeResult:
    """Sum, intersection and both containments of two subgroups."""
    _same_ambient(a, b)
    n = a.ambient.generators
    total = Subgroup(a.ambient, lattice_basis(IntMatrix.hstack([a.generators, b.generators], rows=n)))
    meet = Subgroup(a.ambient, intersect(a.lattice, b.lattice))
    return LatticeResult(
        sum=total,
        intersection=meet,
        a_contains_b=a.contains_subgroup(b),
        b_contains_a=b.contains_subgroup(a),
    )


def preimage(f: GroupHom, subgroup: Subgroup) -> Subgroup:
    """{x : f(x) ∈ subgroup}"""
    if subgroup.ambient != f.target:
        raise AmbientMismatch("Subgroup does not live in the target of the map")
    return Subgroup(f.source, preimage_lattice(f.matrix, subgroup.lattice))


def factor_through(inclusion: GroupHom, f: GroupHom) -> GroupHom:
    """The map g with inclusion ∘ g = f, when f lands in the image of inclusion."""
    if inclusion.target != f.target:
        raise ChainMismatch("The map and the inclusion have different targets")
    system = IntMatrix.hstack(
        [inclusion.matrix, f.target.relation_lattice], rows=f.target.generators
    )
    columns = []
    for col in f.matrix.iter_columns():
        c = solve(system, col)
        if c is None:
            raise NotSolvable("Map does not factor through the inclusion")
        columns.append(c[: inclusion.source.generators])
    return GroupHom(
        f.source,
        inclusion.source,
        IntMatrix.from_columns(columns, rows=inclusion.source.generators),
    )


@dataclass(frozen=True)
class Cohomology:
    """ker g / im f at the middle of f: A → B, g: B → C."""

    group: FpGroup
    cycles: FpGroup
    cycle_inclusion: GroupHom
    projection: GroupHom
    quotient: Subquotient

    @property
    def invariants(self):
        return self.group.invariants


def check_composable(f: GroupHom, g: GroupHom) -> None:
    if f.target != g.source:
        raise ChainMismatch("Target of the first map is not the source of the second")
    if not g.after(f).is_zero():
        raise NotAComplex("Composite of consecutive maps is not zero")


def cohomology_at(f: GroupHom, g: GroupHom) -> Cohomology:
    check_composable(f, g)
    middle = f.target
    cycles = preimage_lattice(g.matrix, g.target.relation_lattice)
    quotient = subquotient(middle, cycles, f.matrix)
    cycle_q = subquotient(middle, cycles, IntMatrix.zeros(middle.generators, 0))
    return Cohomology(
        group=quotient.group,
        cycles=cycle_q.group,
        cycle_inclusion=GroupHom(cycle_q.group, middle, cycle_q.lift),
        projection=GroupHom(cycle_q.group, quotient.group, quotient.coordinates_matrix(cycle_q.lift)),
        quotient=quotient,
    )


def sequence_cohomology(terms: Sequence[FpGroup], maps: Sequence[GroupHom]) -> list[Cohomology]:
    """Cohomology at every term of terms[0] → terms[1] → …, zero outside."""
    if len(maps) != max(0, len(terms) - 1):
        raise ChainMismatch(f"{len(terms)} terms need {len(terms) - 1} maps, got {len(maps)}")
    trivial = FpGroup.trivial()
    result = []
    for k, term in enumerate(terms):
        incoming = maps[k - 1] if k > 0 else GroupHom.zero(trivial, term)
        outgoing = maps[k] if k < len(maps) else GroupHom.zero(term, trivial)
        result.append(cohomology_at(incoming, outgoing))
    return result
