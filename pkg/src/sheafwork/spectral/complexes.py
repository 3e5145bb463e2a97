"""Complexes of groups and sheaves, double complexes and total complexes.

Double complexes are first quadrant: cells (p, q) with 0 ≤ p ≤ pmax and
0 ≤ q ≤ qmax. The vertical differential d raises q, the horizontal δ
raises p, and the total differential is D = δ + (−1)^p d.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Sequence

from sheafwork.core.errors import (
    ChainMismatch,
    IllFormedHom,
    NotAComplex,
    SchemaError,
    SignViolation,
)
from sheafwork.exactalg import (
    Cohomology,
    FpGroup,
    GroupHom,
    IntMatrix,
    cohomology_at,
    direct_sum,
    induced_map,
    sequence_cohomology,
)
from sheafwork.exactalg.subgroups import check_composable
from sheafwork.sheaves import Sheaf, SheafHom, build_sheaf

logger = logging.getLogger(__name__)

Cell = tuple[int, int]


class Axis(str, Enum):
    """Which index filters the total complex."""

    BY_P = "p"
    BY_Q = "q"


@dataclass(frozen=True, eq=False)
class GroupComplex:
    """terms[0] → terms[1] → … with consecutive composites zero."""

    terms: tuple[FpGroup, ...]
    differentials: tuple[GroupHom, ...]

    def __post_init__(self):
        if len(self.differentials) != max(0, len(self.terms) - 1):
            raise ChainMismatch(
                f"{len(self.terms)} terms need {len(self.terms) - 1} differentials"
            )
        for k, d in enumerate(self.differentials):
            if d.source != self.terms[k] or d.target != self.terms[k + 1]:
                raise ChainMismatch(f"Differential {k} does not map term {k} to term {k + 1}")
        for k in range(1, len(self.differentials)):
            check_composable(self.differentials[k - 1], self.differentials[k])

    def cohomology_groups(self) -> list[Cohomology]:
        return sequence_cohomology(self.terms, self.differentials)

    def cohomology(self) -> list[FpGroup]:
        return [c.group for c in self.cohomology_groups()]


@dataclass(frozen=True, eq=False)
class SheafComplex:
    """L⁰ → L¹ → … of sheaves, composites zero at every stalk."""

    terms: tuple[Sheaf, ...]
    differentials: tuple[SheafHom, ...]
    name: str = "complex"

    def __post_init__(self):
        if not self.terms:
            raise SchemaError("A complex needs at least one term", path="$.terms")
        if len(self.differentials) != len(self.terms) - 1:
            raise ChainMismatch(f"{len(self.terms)} terms need {len(self.terms) - 1} differentials")
        for k, d in enumerate(self.differentials):
            if not (d.source.same_as(self.terms[k]) and d.target.same_as(self.terms[k + 1])):
                raise ChainMismatch(f"Differential {k} does not map term {k} to term {k + 1}")
        for k in range(1, len(self.differentials)):
            composite = self.differentials[k].after(self.differentials[k - 1])
            if not composite.is_zero():
                raise NotAComplex(f"Differentials {k - 1} and {k} do not compose to zero", position=k)
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "differentials", tuple(self.differentials))

    @property
    def space(self):
        return self.terms[0].space


def single_sheaf_complex(F: Sheaf) -> SheafComplex:
    """0 → F → 0"""
    return SheafComplex(terms=(F,), differentials=(), name=f"single({F.name})")


def cohomology_sheaves(L: SheafComplex) -> list[Sheaf]:
    """H^k(L) with stalks ker d_k / im d_{k−1} and induced restrictions."""
    space = L.space
    trivial = FpGroup.trivial()
    result = []
    for k, term in enumerate(L.terms):
        local = {}
        for p in space.points:
            incoming = (
                L.differentials[k - 1].at(p) if k > 0 else GroupHom.zero(trivial, term.stalk(p))
            )
            outgoing = (
                L.differentials[k].at(p)
                if k < len(L.differentials)
                else GroupHom.zero(term.stalk(p), trivial)
            )
            local[p] = cohomology_at(incoming, outgoing)
        stalks = {p: local[p].group for p in space.points}
        restrictions = {
            (p, q): induced_map(local[p].quotient, local[q].quotient, term.restrict(p, q).matrix)
            for q, p in space.covering_pairs
        }
        result.append(build_sheaf(space, stalks, restrictions, name=f"H{k}({L.name})"))
    return result


@dataclass(frozen=True, eq=False)
class DoubleComplex:
    """First-quadrant bigraded groups with commuting differentials.

    ``vertical[(p, q)]`` maps (p, q) → (p, q+1) and ``horizontal[(p, q)]``
    maps (p, q) → (p+1, q); missing maps are zero.
    """

    pmax: int
    qmax: int
    cells: Mapping[Cell, FpGroup]
    vertical: Mapping[Cell, GroupHom] = field(default_factory=dict)
    horizontal: Mapping[Cell, GroupHom] = field(default_factory=dict)
    name: str = "double"

    def __post_init__(self):
        if self.pmax < 0 or self.qmax < 0:
            raise SchemaError("Bounds must be non-negative", path="$.bounds")
        for cell in self.cells:
            if not self.in_bounds(*cell):
                raise SchemaError(f"Cell {cell} lies outside the bounds", path=f"$.cells.{cell[0]},{cell[1]}")
        for label, maps, step in (("vertical", self.vertical, (0, 1)), ("horizontal", self.horizontal, (1, 0))):
            for (p, q), hom in maps.items():
                target = (p + step[0], q + step[1])
                if hom.source != self.cell(p, q) or hom.target != self.cell(*target):
                    raise IllFormedHom(
                        f"{label} map at ({p},{q}) does not map cell ({p},{q}) to cell {target}",
                        cell=[p, q],
                    )
        object.__setattr__(self, "cells", MappingProxyType(dict(self.cells)))
        object.__setattr__(self, "vertical", MappingProxyType(dict(self.vertical)))
        object.__setattr__(self, "horizontal", MappingProxyType(dict(self.horizontal)))
        self._validate()

    def _validate(self) -> None:
        for p in range(self.pmax + 1):
            for q in range(self.qmax + 1):
                if not self.vert(p, q + 1).after(self.vert(p, q)).is_zero():
                    raise NotAComplex(f"d∘d ≠ 0 at ({p},{q})", cell=[p, q])
                if not self.horiz(p + 1, q).after(self.horiz(p, q)).is_zero():
                    raise NotAComplex(f"δ∘δ ≠ 0 at ({p},{q})", cell=[p, q])
                down_right = self.vert(p + 1, q).after(self.horiz(p, q))
                right_down = self.horiz(p, q + 1).after(self.vert(p, q))
                if not down_right.equals(right_down):
                    raise SignViolation(f"dδ ≠ δd at ({p},{q})", cell=[p, q])

    def in_bounds(self, p: int, q: int) -> bool:
        return 0 <= p <= self.pmax and 0 <= q <= self.qmax

    def cell(self, p: int, q: int) -> FpGroup:
        if not self.in_bounds(p, q):
            return FpGroup.trivial()
        return self.cells.get((p, q), FpGroup.trivial())

    def vert(self, p: int, q: int) -> GroupHom:
        """d : (p, q) → (p, q+1)"""
        hom = self.vertical.get((p, q))
        return hom if hom is not None else GroupHom.zero(self.cell(p, q), self.cell(p, q + 1))

    def horiz(self, p: int, q: int) -> GroupHom:
        """δ : (p, q) → (p+1, q)"""
        hom = self.horizontal.get((p, q))
        return hom if hom is not None else GroupHom.zero(self.cell(p, q), self.cell(p + 1, q))

    def grid(self) -> list[Cell]:
        return [(p, q) for p in range(self.pmax + 1) for q in range(self.qmax + 1)]

    @property
    def top_degree(self) -> int:
        return self.pmax + self.qmax


@dataclass(frozen=True, eq=False)
class TotalComplex:
    """K^n = ⊕_{p+q=n} K^{p,q}, blocks ordered by p."""

    double: DoubleComplex
    complex: GroupComplex
    blocks: Mapping[int, tuple[tuple[int, int, int], ...]]  # n -> (p, q, offset)

    def offset(self, n: int, p: int) -> int:
        for bp, _, offset in self.blocks[n]:
            if bp == p:
                return offset
        raise KeyError((n, p))

    def term(self, n: int) -> FpGroup:
        if 0 <= n < len(self.complex.terms):
            return self.complex.terms[n]
        return FpGroup.trivial()

    def differential(self, n: int) -> IntMatrix:
        """Matrix of D^n : K^n → K^{n+1}; zero outside the computed range."""
        if 0 <= n < len(self.complex.differentials):
            return self.complex.differentials[n].matrix
        return IntMatrix.zeros(self.term(n + 1).generators, self.term(n).generators)


def _degree_cells(K: DoubleComplex, n: int) -> list[Cell]:
    return [(p, n - p) for p in range(K.pmax + 1) if 0 <= n - p <= K.qmax]


def total_complex(K: DoubleComplex, signed: bool = True) -> TotalComplex:
    """Assemble D = δ + (−1)^p d; with ``signed=False`` the sign is dropped."""
    top = K.top_degree
    terms, blocks = [], {}
    for n in range(top + 1):
        offset, layout = 0, []
        for p, q in _degree_cells(K, n):
            layout.append((p, q, offset))
            offset += K.cell(p, q).generators
        blocks[n] = tuple(layout)
        terms.append(direct_sum([K.cell(p, q) for p, q in _degree_cells(K, n)]))

    differentials = []
    for n in range(top):
        source, target = terms[n], terms[n + 1]
        rows = [[0] * source.generators for _ in range(target.generators)]
        target_offsets = {(p, q): off for p, q, off in blocks[n + 1]}
        for p, q, off in blocks[n]:
            pieces = [((p + 1, q), K.horiz(p, q).matrix, 1)]
            pieces.append(((p, q + 1), K.vert(p, q).matrix, -1 if (signed and p % 2) else 1))
            for cell, matrix, sign in pieces:
                if cell not in target_offsets:
                    continue
                row0 = target_offsets[cell]
                for i, row in enumerate(matrix.to_rows()):
                    for j, value in enumerate(row):
                        rows[row0 + i][off + j] += sign * value
        differentials.append(
            GroupHom(source, target, IntMatrix.from_rows(rows, cols=source.generators))
        )
    try:
        complex_ = GroupComplex(terms=tuple(terms), differentials=tuple(differentials))
    except NotAComplex as e:
        raise SignViolation(f"Total differential does not square to zero: {e.message}") from e
    return TotalComplex(double=K, complex=complex_, blocks=MappingProxyType(blocks))


def column_cohomology(K: DoubleComplex) -> dict[Cell, Cohomology]:
    """H_d: vertical cohomology at every cell."""
    return {(p, q): cohomology_at(K.vert(p, q - 1), K.vert(p, q)) for p, q in K.grid()}


def row_cohomology(K: DoubleComplex) -> dict[Cell, Cohomology]:
    """H_δ: horizontal cohomology at every cell."""
    return {(p, q): cohomology_at(K.horiz(p - 1, q), K.horiz(p, q)) for p, q in K.grid()}


def iterated_cohomology(K: DoubleComplex, axis: Axis) -> dict[Cell, FpGroup]:
    """H_δ H_d (axis p) or H_d H_δ (axis q), computed literally."""
    axis = Axis(axis)
    first = column_cohomology(K) if axis is Axis.BY_P else row_cohomology(K)
    step = (1, 0) if axis is Axis.BY_P else (0, 1)
    trivial = FpGroup.trivial()

    def induced(p: int, q: int) -> GroupHom:
        """Second differential out of (p, q) on the first cohomology."""
        target = (p + step[0], q + step[1])
        if (p, q) not in first:
            source_group = trivial
        else:
            source_group = first[(p, q)].group
        if target not in first or (p, q) not in first:
            return GroupHom.zero(source_group, first[target].group if target in first else trivial)
        matrix = K.horiz(p, q).matrix if axis is Axis.BY_P else K.vert(p, q).matrix
        return induced_map(first[(p, q)].quotient, first[target].quotient, matrix)

    return {
        (p, q): cohomology_at(induced(p - step[0], q - step[1]), induced(p, q)).group
        for p, q in K.grid()
    }
