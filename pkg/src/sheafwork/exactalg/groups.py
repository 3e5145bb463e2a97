"""Finitely presented abelian groups and their homomorphisms.

A group is Z^n modulo the row span of its relation matrix. Structural
equality compares presentations; ``isomorphic`` compares canonical
invariants, which is what every cohomology comparison uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from sheafwork.core.errors import ChainMismatch, IllFormedGroup, IllFormedHom
from sheafwork.exactalg.matrix import IntMatrix
from sheafwork.exactalg.smith import (
    contains,
    contains_all,
    invariant_factors,
    smith_normal_form,
    unimodular_inverse,
)


class GroupInvariants(NamedTuple):
    """Isomorphism class of a finitely generated abelian group."""

    rank: int
    torsion: tuple[int, ...]

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.rank == 1:
            parts.insert(0, "Z")
        elif self.rank > 1:
            parts.insert(0, f"Z^{self.rank}")
        return " ⊕ ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion


@dataclass(frozen=True)
class FpGroup:
    """Z^generators / rowspace(relations)."""

    generators: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.cols != self.generators:
            raise IllFormedGroup(
                f"Relations have {self.relations.cols} columns for {self.generators} generators",
                columns=self.relations.cols,
                generators=self.generators,
            )

    @classmethod
    def free(cls, n: int) -> "FpGroup":
        return cls(n, IntMatrix.zeros(0, n))

    @classmethod
    def trivial(cls) -> "FpGroup":
        return cls.free(0)

    @classmethod
    def cyclic(cls, order: int) -> "FpGroup":
        """Z/order; order 0 gives Z."""
        if order == 0:
            return cls.free(1)
        return cls(1, IntMatrix.from_rows([[order]]))

    @classmethod
    def from_invariants(cls, rank: int, torsion: Sequence[int] = ()) -> "FpGroup":
        """The Smith presentation: torsion generators first, free ones last."""
        torsion = [d for d in torsion if d != 1]
        n = len(torsion) + rank
        rows = [[d if j == i else 0 for j in range(n)] for i, d in enumerate(torsion)]
        return cls(n, IntMatrix.from_rows(rows, cols=n))

    @cached_property
    def invariants(self) -> GroupInvariants:
        return canonical_invariants(self)

    @property
    def is_trivial(self) -> bool:
        return self.invariants.is_trivial

    @cached_property
    def relation_lattice(self) -> IntMatrix:
        """Relations as columns: the lattice Z^n is divided by."""
        return self.relations.T

    def is_zero_element(self, vector: Sequence[int]) -> bool:
        if not any(vector):
            return True
        return contains(self.relation_lattice, vector)

    def equal_elements(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.is_zero_element([a - b for a, b in zip(x, y)])

    def isomorphic(self, other: "FpGroup") -> bool:
        return self.invariants == other.invariants

    def describe(self) -> str:
        return self.invariants.describe()

    @cached_property
    def _reduction(self) -> "ReducedPresentation":
        return _reduce(self)

    def reduced(self) -> "ReducedPresentation":
        """Isomorphic Smith presentation with the two inverse isomorphisms."""
        return self._reduction


class ReducedPresentation(NamedTuple):
    group: FpGroup
    to_reduced: "GroupHom"
    from_reduced: "GroupHom"


def canonical_invariants(group: FpGroup) -> GroupInvariants:
    factors = invariant_factors(group.relations, group.generators)
    return GroupInvariants(
        rank=sum(1 for d in factors if d == 0),
        torsion=tuple(d for d in factors if d > 1),
    )


def _reduce(group: FpGroup) -> ReducedPresentation:
    n = group.generators
    form = smith_normal_form(group.relations)
    factors = invariant_factors(group.relations, n)
    kept = [i for i, d in enumerate(factors) if d != 1]
    reduced = FpGroup.from_invariants(
        rank=sum(1 for d in factors if d == 0),
        torsion=[d for d in factors if d > 1],
    )
    # coordinates change as y = Vᵀ x; the dropped coordinates are killed by unit factors
    vt = form.V.T
    to_matrix = vt.select_rows(kept)
    from_matrix = unimodular_inverse(form.V).select_rows(kept).T
    return ReducedPresentation(
        group=reduced,
        to_reduced=GroupHom(group, reduced, to_matrix, check=False),
        from_reduced=GroupHom(reduced, group, from_matrix, check=False),
    )


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by a (target generators × source generators) matrix."""

    source: FpGroup
    target: FpGroup
    matrix: IntMatrix
    check: bool = True

    def __post_init__(self):
        expected = (self.target.generators, self.source.generators)
        if self.matrix.shape != expected:
            raise IllFormedHom(
                f"Matrix has shape {self.matrix.shape}, expected {expected}",
                shape=list(self.matrix.shape),
                expected=list(expected),
            )
        if self.check and self.source.relations.rows:
            images = self.matrix @ self.source.relation_lattice
            if not contains_all(self.target.relation_lattice, images):
                raise IllFormedHom("Matrix does not send source relations into target relations")

    @classmethod
    def identity(cls, group: FpGroup) -> "GroupHom":
        return cls(group, group, IntMatrix.identity(group.generators), check=False)

    @classmethod
    def zero(cls, source: FpGroup, target: FpGroup) -> "GroupHom":
        return cls(source, target, IntMatrix.zeros(target.generators, source.generators), check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.source, self.target, self.matrix) == (other.source, other.target, other.matrix)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def after(self, other: "GroupHom") -> "GroupHom":
        """Composite self ∘ other."""
        if other.target != self.source:
            raise ChainMismatch("Cannot compose: target of the first map is not the source of the second")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        self._same_ends(other)
        return GroupHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        self._same_ends(other)
        return GroupHom(self.source, self.target, self.matrix - other.matrix, check=False)

    def scale(self, k: int) -> "GroupHom":
        return GroupHom(self.source, self.target, self.matrix.scale(k), check=False)

    def _same_ends(self, other: "GroupHom") -> None:
        if self.source != other.source or self.target != other.target:
            raise IllFormedHom("Homomorphisms have different source or target")

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(vector)

    def is_zero(self) -> bool:
        """True when every generator maps into the target relations."""
        if self.matrix.is_zero():
            return True
        return contains_all(self.target.relation_lattice, self.matrix)

    def equals(self, other: "GroupHom") -> bool:
        """Equality as maps (not as matrices)."""
        if self.source != other.source or self.target != other.target:
            return False
        return (self - other).is_zero()


def direct_sum(groups: Sequence[FpGroup]) -> FpGroup:
    n = sum(g.generators for g in groups)
    return FpGroup(n, IntMatrix.block_diagonal([g.relations for g in groups]))


def direct_sum_hom(homs: Sequence[GroupHom]) -> GroupHom:
    """Block-diagonal map ⊕ source_i → ⊕ target_i."""
    return GroupHom(
        direct_sum([h.source for h in homs]),
        direct_sum([h.target for h in homs]),
        IntMatrix.block_diagonal([h.matrix for h in homs]),
        check=False,
    )
