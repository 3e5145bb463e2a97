"""The Godement construction and resolutions of sheaves.

C⁰F has stalk ⊕_{q∈U_p} F_q at p, restrictions are coordinate
projections, and the unit F → C⁰F sends a germ at p to its family of
restrictions over U_p. Iterating C⁰ on successive cokernels and splicing
gives the canonical flasque resolution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from sheafwork.core.errors import ChainMismatch, NotAResolution
from sheafwork.exactalg import GroupHom, IntMatrix, direct_sum, induced_map
from sheafwork.sheaves import (
    ExactnessReport,
    Sheaf,
    SheafHom,
    SheafHomParts,
    build_sheaf,
    is_exact_sequence,
    sheaf_hom_parts,
    zero_sheaf,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GodementStep:
    """0 → F → C⁰F → Q¹ → 0"""

    input: Sheaf
    c0: Sheaf
    unit: SheafHom
    quotient: Sheaf
    projection: SheafHom
    parts: SheafHomParts


def _offsets(F: Sheaf, points: Sequence[str]) -> dict[str, int]:
    offsets, offset = {}, 0
    for q in points:
        offsets[q] = offset
        offset += F.stalk(q).generators
    return offsets


def godement_c0(F: Sheaf) -> tuple[Sheaf, SheafHom]:
    """The Godement sheaf C⁰F and the unit F → C⁰F."""
    space = F.space
    members = {p: space.minimal_open(p).points for p in space.points}
    stalks = {p: direct_sum([F.stalk(q) for q in members[p]]) for p in space.points}
    offsets = {p: _offsets(F, members[p]) for p in space.points}

    restrictions = {}
    for q, p in space.covering_pairs:
        rows = []
        for r in members[q]:
            size = F.stalk(r).generators
            for i in range(size):
                row = [0] * stalks[p].generators
                row[offsets[p][r] + i] = 1
                rows.append(row)
        restrictions[(p, q)] = GroupHom(
            stalks[p], stalks[q], IntMatrix.from_rows(rows, cols=stalks[p].generators)
        )
    c0 = build_sheaf(space, stalks, restrictions, name=f"C0({F.name})")

    unit = SheafHom(
        F,
        c0,
        {
            p: GroupHom(
                F.stalk(p),
                stalks[p],
                IntMatrix.vstack(
                    [F.restrict(p, r).matrix for r in members[p]], cols=F.stalk(p).generators
                ),
            )
            for p in space.points
        },
    )
    return c0, unit


def godement_step(F: Sheaf) -> GodementStep:
    c0, unit = godement_c0(F)
    parts = sheaf_hom_parts(unit)
    return GodementStep(
        input=F,
        c0=c0,
        unit=unit,
        quotient=parts.cokernel,
        projection=parts.cokernel_projection,
        parts=parts,
    )


@dataclass(frozen=True, eq=False)
class Resolution:
    """0 → F → L⁰ → L¹ → … → L^m, exact as far as constructed.

    With ``complete`` the sequence is also exact at L^m (it ends in 0).
    """

    base: Sheaf
    terms: tuple[Sheaf, ...]
    augmentation: SheafHom
    differentials: tuple[SheafHom, ...]
    complete: bool = False
    steps: tuple[GodementStep, ...] = ()

    @classmethod
    def build(
        cls,
        base: Sheaf,
        augmentation: SheafHom,
        differentials: Sequence[SheafHom],
        complete: bool = False,
        steps: Sequence[GodementStep] = (),
    ) -> "Resolution":
        if not augmentation.source.same_as(base):
            raise ChainMismatch("Augmentation does not start at the resolved sheaf")
        terms = [augmentation.target]
        for k, d in enumerate(differentials):
            if not d.source.same_as(terms[-1]):
                raise ChainMismatch(f"Differential {k} does not start at term {k}", position=k)
            terms.append(d.target)
        resolution = cls(
            base=base,
            terms=tuple(terms),
            augmentation=augmentation,
            differentials=tuple(differentials),
            complete=complete,
            steps=tuple(steps),
        )
        report = resolution.exactness()
        if not report.exact:
            raise NotAResolution(
                "Augmented sequence is not exact", failures=[f.to_dict() for f in report.failures]
            )
        return resolution

    @property
    def length(self) -> int:
        return len(self.terms)

    def augmented_maps(self) -> list[SheafHom]:
        zero = zero_sheaf(self.base.space)
        maps = [SheafHom.zero(zero, self.base), self.augmentation, *self.differentials]
        if self.complete:
            maps.append(SheafHom.zero(self.terms[-1], zero))
        return maps

    def exactness(self) -> ExactnessReport:
        return is_exact_sequence(self.augmented_maps())

    @property
    def reliable_degree(self) -> int:
        """Highest term index at which exactness has been checked."""
        return len(self.terms) - 1 if self.complete else len(self.terms) - 2


def godement_resolution(F: Sheaf, kmax: int) -> Resolution:
    """C⁰F → … → C^{kmax+1}F with augmentation F → C⁰F."""
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    steps = []
    current = F
    for _ in range(kmax + 2):
        step = godement_step(current)
        steps.append(step)
        current = step.quotient
    differentials = [steps[k + 1].unit.after(steps[k].projection) for k in range(kmax + 1)]
    logger.debug(f"Godement resolution of '{F.name}' through degree {kmax + 1}")
    return Resolution.build(F, steps[0].unit, differentials, complete=False, steps=steps)


def godement_c0_map(phi: SheafHom, source_c0: Sheaf, target_c0: Sheaf) -> SheafHom:
    """C⁰φ : C⁰F → C⁰G, the product of the stalk maps over each U_p."""
    space = phi.source.space
    return SheafHom(
        source_c0,
        target_c0,
        {
            p: GroupHom(
                source_c0.stalk(p),
                target_c0.stalk(p),
                IntMatrix.block_diagonal([phi.at(q).matrix for q in space.minimal_open(p).points]),
            )
            for p in space.points
        },
    )


def godement_functor(
    phi: SheafHom,
    kmax: int,
    source_resolution: Resolution | None = None,
    target_resolution: Resolution | None = None,
) -> list[SheafHom]:
    """C^kφ : C^kF → C^kG for k = 0 … kmax + 1.

    Resolutions must be Godement resolutions (they carry their steps); they
    are built when not given.
    """
    source_resolution = source_resolution or godement_resolution(phi.source, kmax)
    target_resolution = target_resolution or godement_resolution(phi.target, kmax)
    count = min(kmax + 2, len(source_resolution.steps), len(target_resolution.steps))
    maps = []
    current = phi
    for k in range(count):
        s, t = source_resolution.steps[k], target_resolution.steps[k]
        c = godement_c0_map(current, s.c0, t.c0)
        maps.append(c)
        current = SheafHom(
            s.quotient,
            t.quotient,
            {
                p: induced_map(
                    s.parts.stalk_parts[p].cokernel_quotient,
                    t.parts.stalk_parts[p].cokernel_quotient,
                    c.at(p).matrix,
                )
                for p in phi.source.space.points
            },
        )
    return maps
