"""Kernel, image and quotient sheaves, and stalkwise exactness."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from sheafwork.core.errors import ChainMismatch, NotExactInput
from sheafwork.exactalg import (
    FpGroup,
    GroupHom,
    GroupInvariants,
    HomParts,
    cohomology_at,
    hom_parts,
    induced_map,
)
from sheafwork.finspace import OpenSet
from sheafwork.sheaves.sheaf import Sheaf, SheafHom, build_sheaf, section_map, zero_sheaf

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SheafHomParts:
    kernel: Sheaf
    image: Sheaf
    cokernel: Sheaf
    is_injective: bool
    is_surjective: bool
    kernel_inclusion: SheafHom
    image_inclusion: SheafHom
    corestriction: SheafHom
    cokernel_projection: SheafHom
    stalk_parts: Mapping[str, HomParts] = field(repr=False)


def sheaf_hom_parts(phi: SheafHom) -> SheafHomParts:
    """Kernel, image and cokernel sheaves built stalkwise with induced restrictions."""
    F, G = phi.source, phi.target
    space = F.space
    parts = {p: hom_parts(phi.at(p)) for p in space.points}

    def assemble(which: str, ambient: Sheaf, name: str) -> Sheaf:
        stalks = {p: getattr(parts[p], which).group for p in space.points}
        restrictions = {
            (p, q): induced_map(
                getattr(parts[p], which), getattr(parts[q], which), ambient.restrict(p, q).matrix
            )
            for q, p in space.covering_pairs
        }
        return build_sheaf(space, stalks, restrictions, name=name)

    kernel = assemble("kernel_quotient", F, f"ker({F.name}→{G.name})")
    image = assemble("image_quotient", G, f"im({F.name}→{G.name})")
    cokernel = assemble("cokernel_quotient", G, f"coker({F.name}→{G.name})")

    return SheafHomParts(
        kernel=kernel,
        image=image,
        cokernel=cokernel,
        is_injective=all(parts[p].is_injective for p in space.points),
        is_surjective=all(parts[p].is_surjective for p in space.points),
        kernel_inclusion=SheafHom(kernel, F, {p: parts[p].kernel_inclusion for p in space.points}),
        image_inclusion=SheafHom(image, G, {p: parts[p].image_inclusion for p in space.points}),
        corestriction=SheafHom(F, image, {p: parts[p].corestriction for p in space.points}),
        cokernel_projection=SheafHom(
            G, cokernel, {p: parts[p].cokernel_projection for p in space.points}
        ),
        stalk_parts=parts,
    )


@dataclass(frozen=True)
class ExactnessFailure:
    position: int
    point: str
    invariants: GroupInvariants

    def to_dict(self) -> dict:
        return {"position": self.position, "point": self.point, "cohomology": self.invariants.to_dict()}


@dataclass(frozen=True)
class ExactnessReport:
    exact: bool
    failures: tuple[ExactnessFailure, ...]

    def to_dict(self) -> dict:
        return {"exact": self.exact, "failures": [f.to_dict() for f in self.failures]}


def is_exact_sequence(maps: Sequence[SheafHom]) -> ExactnessReport:
    """Stalkwise exactness at every interior sheaf of F¹ → F² → … .

    Position i is the target of ``maps[i - 1]``, for 1 ≤ i < len(maps).
    """
    for i in range(1, len(maps)):
        if not maps[i - 1].target.same_as(maps[i].source):
            raise ChainMismatch(f"Map {i - 1} does not end where map {i} starts", position=i)
    failures = []
    for i in range(1, len(maps)):
        f, g = maps[i - 1], maps[i]
        for p in f.source.space.points:
            h = cohomology_at(f.at(p), g.at(p)).group
            if not h.is_trivial:
                failures.append(ExactnessFailure(position=i, point=p, invariants=h.invariants))
    return ExactnessReport(exact=not failures, failures=tuple(failures))


def short_exact_maps(f: SheafHom, g: SheafHom) -> list[SheafHom]:
    """0 → E → F → G → 0 as a list of maps for ``is_exact_sequence``."""
    zero = zero_sheaf(f.source.space)
    return [SheafHom.zero(zero, f.source), f, g, SheafHom.zero(g.target, zero)]


@dataclass(frozen=True)
class LeftExactnessReport:
    open_set: OpenSet
    injective: bool
    exact_middle: bool
    surjective: bool
    sections: tuple[FpGroup, FpGroup, FpGroup]
    cokernel: FpGroup

    @property
    def left_exact(self) -> bool:
        return self.injective and self.exact_middle

    def to_dict(self) -> dict:
        return {
            "open": list(self.open_set.points),
            "left_exact": self.left_exact,
            "injective": self.injective,
            "exact_middle": self.exact_middle,
            "surjective": self.surjective,
            "sections": [g.invariants.to_dict() for g in self.sections],
            "cokernel": self.cokernel.invariants.to_dict(),
        }


def sections_left_exactness(f: SheafHom, g: SheafHom, U: OpenSet) -> LeftExactnessReport:
    """Check 0 → E(U) → F(U) → G(U) for a short exact sequence 0 → E → F → G → 0."""
    report = is_exact_sequence(short_exact_maps(f, g))
    if not report.exact:
        raise NotExactInput(
            "Input sequence is not short exact", failures=[x.to_dict() for x in report.failures]
        )
    alpha = section_map(f, U)
    beta = section_map(g, U)
    alpha_parts = hom_parts(alpha)
    beta_parts = hom_parts(beta)
    middle = cohomology_at(alpha, beta).group
    logger.debug(
        f"Sections over {U.label()}: {alpha.source.describe()} → {alpha.target.describe()} "
        f"→ {beta.target.describe()}, cokernel {beta_parts.cokernel.describe()}"
    )
    return LeftExactnessReport(
        open_set=U,
        injective=alpha_parts.is_injective,
        exact_middle=middle.is_trivial,
        surjective=beta_parts.is_surjective,
        sections=(alpha.source, alpha.target, beta.target),
        cokernel=beta_parts.cokernel,
    )
