"""Sheaf cohomology, flasqueness, and the chain-complex oracle."""

from __future__ import annotations

import logging

from sheafwork.core.errors import NotExactInput
from sheafwork.exactalg import (
    FpGroup,
    GroupHom,
    IntMatrix,
    cohomology_at,
    direct_sum,
    hom_parts,
    sequence_cohomology,
)
from sheafwork.finspace import DEFAULT_OPENS_CAP, OpenSet
from sheafwork.godement.resolution import Resolution, godement_functor, godement_resolution
from sheafwork.sheaves import (
    LeftExactnessReport,
    Sheaf,
    SheafHom,
    is_exact_sequence,
    restriction_map,
    section_map,
    sections,
    short_exact_maps,
)

logger = logging.getLogger(__name__)


def flasque_failures(F: Sheaf, cap: int = DEFAULT_OPENS_CAP) -> list[OpenSet]:
    """Opens U for which Γ(X, F) → Γ(U, F) is not surjective."""
    whole = F.space.whole
    failures = []
    for U in F.space.enumerate_opens(cap):
        if U == whole:
            continue
        if not hom_parts(restriction_map(F, whole, U)).is_surjective:
            failures.append(U)
    return failures


def is_flasque(F: Sheaf, cap: int = DEFAULT_OPENS_CAP) -> bool:
    return not flasque_failures(F, cap)


def global_section_complex(resolution: Resolution) -> tuple[list[FpGroup], list[GroupHom]]:
    """Γ(X, L⁰) → Γ(X, L¹) → … (the resolved sheaf itself is omitted)."""
    whole = resolution.base.space.whole
    groups = [sections(L, whole).group for L in resolution.terms]
    maps = [section_map(d, whole) for d in resolution.differentials]
    return groups, maps


def resolution_cohomology(resolution: Resolution, kmax: int) -> list[FpGroup]:
    """h^k of the global-section complex for k ≤ min(kmax, reliable degree).

    A complete resolution has no terms past its length, so its higher
    groups are zero through kmax.
    """
    groups, maps = global_section_complex(resolution)
    cohomology = [c.group for c in sequence_cohomology(groups, maps)]
    if resolution.complete:
        cohomology += [FpGroup.trivial()] * max(0, kmax + 1 - len(cohomology))
        return cohomology[: kmax + 1]
    return cohomology[: min(kmax, resolution.reliable_degree) + 1]


def sheaf_cohomology(F: Sheaf, kmax: int) -> list[FpGroup]:
    """H⁰ … H^kmax via global sections of the Godement resolution."""
    cohomology = resolution_cohomology(godement_resolution(F, kmax), kmax)
    logger.debug(f"H*({F.name}) = {[h.describe() for h in cohomology]}")
    return cohomology


def lim_higher_oracle(F: Sheaf, kmax: int) -> list[FpGroup]:
    """Cohomology of the cochain complex indexed by strict chains.

    C^k = ⊕ over chains p_0 ≺ … ≺ p_k of F_{p_0}; the j-th face of the
    coboundary drops p_j with sign (−1)^j, and the j = 0 face restricts
    from F_{p_1} to F_{p_0}.
    """
    space = F.space
    chains = [space.chains(k) for k in range(kmax + 2)]
    offsets = []
    groups = []
    for level in chains:
        table, offset = {}, 0
        for chain in level:
            table[chain] = offset
            offset += F.stalk(chain[0]).generators
        offsets.append(table)
        groups.append(direct_sum([F.stalk(chain[0]) for chain in level]))

    maps = []
    for k in range(kmax + 1):
        source, target = groups[k], groups[k + 1]
        rows = []
        for sigma in chains[k + 1]:
            block = [[0] * source.generators for _ in range(F.stalk(sigma[0]).generators)]
            for j in range(len(sigma)):
                tau = sigma[:j] + sigma[j + 1 :]
                sign = -1 if j % 2 else 1
                column = offsets[k][tau]
                face = F.restrict(sigma[1], sigma[0]).matrix.to_rows() if j == 0 else None
                for i in range(len(block)):
                    if face is None:
                        block[i][column + i] += sign
                    else:
                        for c, value in enumerate(face[i]):
                            block[i][column + c] += sign * value
            rows.extend(block)
        maps.append(GroupHom(source, target, IntMatrix.from_rows(rows, cols=source.generators)))
    return [c.group for c in sequence_cohomology(groups, maps)[: kmax + 1]]


def godement_section_exactness(f: SheafHom, g: SheafHom, p: int) -> LeftExactnessReport:
    """Apply Γ(X, C^p(·)) to a short exact sequence 0 → E → F → G → 0."""
    report = is_exact_sequence(short_exact_maps(f, g))
    if not report.exact:
        raise NotExactInput(
            "Input sequence is not short exact", failures=[x.to_dict() for x in report.failures]
        )
    kmax = max(0, p - 1)
    middle = godement_resolution(f.target, kmax)
    cf = godement_functor(f, kmax, target_resolution=middle)[p]
    cg = godement_functor(g, kmax, source_resolution=middle)[p]
    whole = f.source.space.whole
    alpha = section_map(cf, whole)
    beta = section_map(cg, whole)
    beta_parts = hom_parts(beta)
    return LeftExactnessReport(
        open_set=whole,
        injective=hom_parts(alpha).is_injective,
        exact_middle=cohomology_at(alpha, beta).group.is_trivial,
        surjective=beta_parts.is_surjective,
        sections=(alpha.source, alpha.target, beta.target),
        cokernel=beta_parts.cokernel,
    )
