"""Spectral sequences of first-quadrant double complexes.

Pages are subquotients of the total complex. With F_s the filtration by
p (or q) and D the total differential, in total degree n:

    Z_r^s = F_s ∩ D⁻¹(F_{s+r}),   Z_{−1}^s = F_s
    E_r^s = Z_r^s / (Z_{r−1}^{s+1} + D Z_{r−1}^{s−r+1})

and d_r is induced by D. Every lattice here lives in the free cover of
K^n and contains its relations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

from sheafwork.core.errors import NotAComplex, NotStabilized
from sheafwork.exactalg import (
    FpGroup,
    GroupHom,
    IntMatrix,
    Subquotient,
    cohomology_at,
    direct_sum,
    induced_map,
    subquotient,
)
from sheafwork.exactalg.smith import intersect, lattice_basis, preimage_lattice
from sheafwork.spectral.complexes import Axis, Cell, DoubleComplex, TotalComplex, total_complex

logger = logging.getLogger(__name__)


def stabilization_bound(K: DoubleComplex) -> int:
    return max(K.pmax, K.qmax) + 2


@dataclass(frozen=True, eq=False)
class SpectralPages:
    """Pages E_r for r = 0 … rmax, the differentials, E_∞ and Gr H_D."""

    axis: Axis
    pmax: int
    qmax: int
    bound: int
    rmax: int
    pages: Mapping[int, Mapping[Cell, FpGroup]]
    differentials: Mapping[int, Mapping[Cell, GroupHom]]
    einf: Mapping[Cell, FpGroup]
    graded_total: Mapping[Cell, FpGroup]
    total_cohomology: tuple[FpGroup, ...]
    extension_flags: tuple[int, ...]
    checks: Mapping[str, bool] = field(default_factory=dict)

    def target(self, r: int, p: int, q: int) -> Cell:
        """Cell hit by d_r out of (p, q)."""
        if self.axis is Axis.BY_P:
            return (p + r, q - r + 1)
        return (p - r + 1, q + r)

    def source(self, r: int, p: int, q: int) -> Cell:
        """Cell whose d_r lands in (p, q)."""
        if self.axis is Axis.BY_P:
            return (p - r, q + r - 1)
        return (p + r - 1, q - r)

    def page_is_zero_map(self, r: int) -> bool:
        return all(d.is_zero() for d in self.differentials[r].values())

    def degenerates_at(self) -> int:
        """Smallest r ≥ 1 with every d_s zero for s ≥ r."""
        r = self.rmax
        while r >= 1 and self.page_is_zero_map(r):
            r -= 1
        return max(1, r + 1)

    def cells_in_degree(self, n: int) -> list[Cell]:
        return [(p, n - p) for p in range(self.pmax + 1) if 0 <= n - p <= self.qmax]


class _FilteredTotal:
    """Filtration lattices of the total complex, memoized."""

    def __init__(self, total: TotalComplex, axis: Axis):
        self.total = total
        self.axis = axis
        self._z: dict[tuple[int, int, int], IntMatrix] = {}
        self._f: dict[tuple[int, int], IntMatrix] = {}
        self._pages: dict[tuple[int, int, int], Subquotient] = {}

    def index(self, p: int, q: int) -> tuple[int, int]:
        """(filtration degree, total degree) of a cell."""
        return (p if self.axis is Axis.BY_P else q, p + q)

    def dim(self, n: int) -> int:
        return self.total.term(n).generators

    def relations(self, n: int) -> IntMatrix:
        return self.total.term(n).relation_lattice

    def filtration(self, s: int, n: int) -> IntMatrix:
        key = (s, n)
        if key not in self._f:
            columns = []
            if n in self.total.blocks:
                for p, q, offset in self.total.blocks[n]:
                    if self.index(p, q)[0] >= s:
                        size = self.total.double.cell(p, q).generators
                        for i in range(size):
                            column = [0] * self.dim(n)
                            column[offset + i] = 1
                            columns.append(column)
            generators = IntMatrix.from_columns(columns, rows=self.dim(n))
            self._f[key] = lattice_basis(
                IntMatrix.hstack([generators, self.relations(n)], rows=self.dim(n))
            )
        return self._f[key]

    def cycles(self, r: int, s: int, n: int) -> IntMatrix:
        """Z_r^s in degree n."""
        if r < 0:
            return self.filtration(s, n)
        key = (r, s, n)
        if key not in self._z:
            self._z[key] = intersect(
                self.filtration(s, n),
                preimage_lattice(self.total.differential(n), self.filtration(s + r, n + 1)),
            )
        return self._z[key]

    def page(self, r: int, s: int, n: int) -> Subquotient:
        key = (r, s, n)
        if key not in self._pages:
            lower = self.cycles(r - 1, s + 1, n)
            boundaries = self.total.differential(n - 1) @ self.cycles(r - 1, s - r + 1, n - 1)
            self._pages[key] = subquotient(
                self.total.term(n),
                self.cycles(r, s, n),
                IntMatrix.hstack([lower, boundaries], rows=self.dim(n)),
            )
        return self._pages[key]

    def graded(self, n: int) -> tuple[Subquotient, dict[int, FpGroup]]:
        """H_D^n and its associated graded pieces by filtration degree."""
        dim = self.dim(n)
        cycles = preimage_lattice(self.total.differential(n), self.relations(n + 1))
        boundaries = lattice_basis(
            IntMatrix.hstack(
                [self.total.differential(n - 1), self.relations(n)], rows=dim
            )
        )
        whole = subquotient(self.total.term(n), cycles, boundaries)
        pieces = {}
        for p, q, _ in self.total.blocks.get(n, ()):
            s = self.index(p, q)[0]
            upper = intersect(cycles, self.filtration(s, n))
            lower = intersect(cycles, self.filtration(s + 1, n))
            pieces[s] = subquotient(
                self.total.term(n),
                IntMatrix.hstack([upper, boundaries], rows=dim),
                IntMatrix.hstack([lower, boundaries], rows=dim),
            ).group
        return whole, pieces


def spectral_sequence(K: DoubleComplex, axis: Axis | str, rmax: int) -> SpectralPages:
    """Pages E_0 … E_rmax of the filtration by p or by q."""
    axis = Axis(axis)
    bound = stabilization_bound(K)
    if rmax < bound:
        raise NotStabilized(
            f"Pages stabilize only from r = {bound}; asked for rmax = {rmax}", bound=bound
        )
    total = total_complex(K)
    filtered = _FilteredTotal(total, axis)
    trivial = FpGroup.trivial()
    grid = K.grid()

    def target_cell(r: int, p: int, q: int) -> Cell:
        return (p + r, q - r + 1) if axis is Axis.BY_P else (p - r + 1, q + r)

    pages: dict[int, dict[Cell, FpGroup]] = {}
    quotients: dict[int, dict[Cell, Subquotient]] = {}
    differentials: dict[int, dict[Cell, GroupHom]] = {}
    for r in range(bound + 1):
        pages[r], quotients[r] = {}, {}
        for p, q in grid:
            if r > 0 and pages[r - 1][(p, q)].is_trivial:
                pages[r][(p, q)] = trivial
                continue
            sq = filtered.page(r, *filtered.index(p, q))
            pages[r][(p, q)] = sq.group
            if not sq.group.is_trivial:
                quotients[r][(p, q)] = sq
        differentials[r] = {}
        for p, q in grid:
            tgt = target_cell(r, p, q)
            source_group = pages[r][(p, q)]
            target_group = pages[r].get(tgt, trivial)
            if (p, q) in quotients[r] and tgt in quotients[r]:
                n = p + q
                differentials[r][(p, q)] = induced_map(
                    quotients[r][(p, q)], quotients[r][tgt], total.differential(n)
                )
            else:
                differentials[r][(p, q)] = GroupHom.zero(source_group, target_group)
        logger.debug(f"Axis {axis.value}: page {r} computed")

    # beyond the bound every d_r leaves or enters the grid, so pages repeat
    for r in range(bound + 1, rmax + 1):
        pages[r] = dict(pages[bound])
        differentials[r] = {cell: GroupHom.zero(g, trivial) for cell, g in pages[bound].items()}

    checks = {"d_squared_zero": True, "recurrence": True}
    for r in range(bound):
        for p, q in grid:
            src = (p - r, q + r - 1) if axis is Axis.BY_P else (p + r - 1, q - r)
            incoming = differentials[r].get(src, GroupHom.zero(trivial, pages[r][(p, q)]))
            outgoing = differentials[r][(p, q)]
            try:
                homology = cohomology_at(incoming, outgoing).group
            except NotAComplex:
                checks["d_squared_zero"] = False
                continue
            if homology.invariants != pages[r + 1][(p, q)].invariants:
                checks["recurrence"] = False

    einf = dict(pages[bound])
    graded: dict[Cell, FpGroup] = {}
    total_groups = []
    extension_flags = []
    rank_ok = True
    for n in range(K.top_degree + 1):
        whole, pieces = filtered.graded(n)
        total_groups.append(whole.group)
        cells = [cell for cell in grid if sum(cell) == n]
        for cell in cells:
            graded[cell] = pieces[filtered.index(*cell)[0]]
        rank_ok &= whole.group.invariants.rank == sum(graded[c].invariants.rank for c in cells)
        if whole.group.invariants != direct_sum([einf[c] for c in cells]).invariants:
            extension_flags.append(n)
    checks["convergence"] = all(einf[c].invariants == graded[c].invariants for c in grid)
    checks["rank_accounting"] = rank_ok
    if not checks["convergence"]:
        logger.error(f"E_∞ and Gr H_D disagree on '{K.name}' (axis {axis.value})")

    return SpectralPages(
        axis=axis,
        pmax=K.pmax,
        qmax=K.qmax,
        bound=bound,
        rmax=rmax,
        pages=pages,
        differentials=differentials,
        einf=einf,
        graded_total=graded,
        total_cohomology=tuple(total_groups),
        extension_flags=tuple(extension_flags),
        checks=checks,
    )
