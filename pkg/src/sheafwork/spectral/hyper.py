"""Hypercohomology through the Godement double complex, and the
acyclic-resolution check."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

from sheafwork.core.errors import AmbientMismatch, NotAResolution
from sheafwork.exactalg import FpGroup
from sheafwork.finspace import FiniteSpace
from sheafwork.godement import (
    Resolution,
    godement_functor,
    godement_resolution,
    resolution_cohomology,
    sheaf_cohomology,
)
from sheafwork.sheaves import Sheaf, section_map, sections
from sheafwork.spectral.complexes import (
    Axis,
    DoubleComplex,
    SheafComplex,
    cohomology_sheaves,
)
from sheafwork.spectral.pages import SpectralPages, spectral_sequence, stabilization_bound

logger = logging.getLogger(__name__)


def godement_double_complex(L: SheafComplex, kmax: int) -> DoubleComplex:
    """Γ(X, C^p L^q) for p ≤ kmax + 1, with δ from each resolution and d
    from the Godement functors applied to L^q → L^{q+1}."""
    whole = L.space.whole
    resolutions = [godement_resolution(term, kmax) for term in L.terms]
    cells, vertical, horizontal = {}, {}, {}
    for q, resolution in enumerate(resolutions):
        for p, term in enumerate(resolution.terms):
            cells[(p, q)] = sections(term, whole).group
        for p, d in enumerate(resolution.differentials):
            horizontal[(p, q)] = section_map(d, whole)
    for q, d in enumerate(L.differentials):
        functor = godement_functor(
            d, kmax, source_resolution=resolutions[q], target_resolution=resolutions[q + 1]
        )
        for p, c in enumerate(functor):
            vertical[(p, q)] = section_map(c, whole)
    return DoubleComplex(
        pmax=kmax + 1,
        qmax=len(L.terms) - 1,
        cells=cells,
        vertical=vertical,
        horizontal=horizontal,
        name=f"godement({L.name})",
    )


def _concentrated(pages: SpectralPages, r: int, keep, top: int) -> bool:
    return all(
        group.is_trivial or keep(p, q)
        for (p, q), group in pages.pages[r].items()
        if p + q <= top
    )


def degeneration_page(pages: SpectralPages, top: int) -> int:
    """Smallest r ≥ 1 after which no d_r leaving total degree ≤ top is nonzero."""
    r = pages.rmax
    while r >= 1 and all(
        d.is_zero() for (p, q), d in pages.differentials[r].items() if p + q <= top
    ):
        r -= 1
    return max(1, r + 1)


@dataclass(frozen=True, eq=False)
class Hypercohomology:
    groups: tuple[FpGroup, ...]
    pages_by_p: SpectralPages
    pages_by_q: SpectralPages
    double: DoubleComplex
    kmax: int
    flags: Mapping[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "groups": [g.invariants.to_dict() for g in self.groups],
            "flags": dict(self.flags),
        }


def hypercohomology(
    X: FiniteSpace,
    L: SheafComplex,
    kmax: int,
    rmax: int | None = None,
    check_exact_functor: bool = False,
) -> Hypercohomology:
    """Total cohomology of Γ(X, C^• L^•) through degree kmax, with both
    spectral sequences.

    The by_p run has E_1 = Γ(X, C^p H^q(L)); the by_q run has
    E_1 = H^p(X, L^q). With ``check_exact_functor`` the first identity is
    verified cellwise against the cohomology sheaves of L.
    """
    if L.space != X:
        raise AmbientMismatch(f"Complex '{L.name}' does not live on '{X.name}'")
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    K = godement_double_complex(L, kmax)
    rmax = stabilization_bound(K) if rmax is None else rmax
    by_p = spectral_sequence(K, Axis.BY_P, rmax)
    by_q = spectral_sequence(K, Axis.BY_Q, rmax)
    groups = by_p.total_cohomology[: kmax + 1]

    flags: dict[str, object] = {
        "e1_row_concentrated": _concentrated(by_p, 1, lambda p, q: q == 0, kmax),
        "e1_column_concentrated": _concentrated(by_q, 1, lambda p, q: p == 0, kmax),
        "degenerates_by_p": degeneration_page(by_p, kmax),
        "degenerates_by_q": degeneration_page(by_q, kmax),
        "extension_flags_by_p": [n for n in by_p.extension_flags if n <= kmax],
        "extension_flags_by_q": [n for n in by_q.extension_flags if n <= kmax],
    }
    flags["degenerate_at_e2"] = flags["degenerates_by_p"] <= 2
    if check_exact_functor:
        flags["e1_matches_cohomology_sheaves"] = _exact_functor_check(L, by_p, kmax)
    logger.debug(f"Hypercohomology of '{L.name}': {[g.describe() for g in groups]}")
    return Hypercohomology(
        groups=tuple(groups), pages_by_p=by_p, pages_by_q=by_q, double=K, kmax=kmax, flags=flags
    )


def _exact_functor_check(L: SheafComplex, by_p: SpectralPages, kmax: int) -> bool:
    whole = L.space.whole
    for q, H in enumerate(cohomology_sheaves(L)):
        resolution = godement_resolution(H, kmax)
        for p, term in enumerate(resolution.terms):
            if sections(term, whole).group.invariants != by_p.pages[1][(p, q)].invariants:
                logger.debug(f"E_1 differs from Γ(C^{p} H^{q}) at ({p},{q})")
                return False
    return True


@dataclass(frozen=True)
class TermVerdict:
    index: int
    name: str
    acyclic: bool
    first_failure: int | None
    cohomology: tuple[FpGroup, ...]

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "acyclic": self.acyclic,
            "first_failure": self.first_failure,
            "cohomology": [g.invariants.to_dict() for g in self.cohomology],
        }


@dataclass(frozen=True, eq=False)
class AcyclicReport:
    terms: tuple[TermVerdict, ...]
    resolution_cohomology: tuple[FpGroup, ...]
    sheaf_cohomology: tuple[FpGroup, ...]
    isomorphic: bool
    hyper: Hypercohomology | None = None
    unverified_degrees: tuple[int, ...] = ()

    @property
    def acyclic(self) -> bool:
        return all(t.acyclic for t in self.terms)

    @property
    def offenders(self) -> list[TermVerdict]:
        return [t for t in self.terms if not t.acyclic]

    @property
    def verdict(self) -> bool:
        return self.acyclic and self.isomorphic

    def to_dict(self) -> dict:
        data = {
            "verdict": self.verdict,
            "acyclic": self.acyclic,
            "isomorphic": self.isomorphic,
            "unverified_degrees": list(self.unverified_degrees),
            "offenders": [
                {"index": t.index, "name": t.name, "degree": t.first_failure}
                for t in self.offenders
            ],
            "terms": [t.to_dict() for t in self.terms],
            "resolution_cohomology": [g.invariants.to_dict() for g in self.resolution_cohomology],
            "sheaf_cohomology": [g.invariants.to_dict() for g in self.sheaf_cohomology],
        }
        if self.hyper is not None:
            data["degeneration"] = {
                "e1_row_concentrated": self.hyper.flags["e1_row_concentrated"],
                "e1_column_concentrated": self.hyper.flags["e1_column_concentrated"],
            }
        return data


def acyclic_resolution_check(
    F: Sheaf, R: Resolution, kmax: int, spectral: bool = True
) -> AcyclicReport:
    """Compare H^k(X, F) with h^k(Γ(X, L^•)) and judge each L^q acyclic.

    Non-acyclic terms are reported, not raised. With ``spectral`` the
    Godement double complex of L^• is also built to record the two E_1
    concentration patterns.
    """
    if not R.base.same_as(F):
        raise NotAResolution(f"Resolution is of '{R.base.name}', not '{F.name}'")
    report = R.exactness()
    if not report.exact:
        raise NotAResolution(
            "Augmented sequence is not exact", failures=[f.to_dict() for f in report.failures]
        )

    verdicts = []
    for index, term in enumerate(R.terms):
        groups = sheaf_cohomology(term, kmax)
        failing = [k for k in range(1, kmax + 1) if not groups[k].is_trivial]
        verdicts.append(
            TermVerdict(
                index=index,
                name=term.name,
                acyclic=not failing,
                first_failure=failing[0] if failing else None,
                cohomology=tuple(groups),
            )
        )

    h = resolution_cohomology(R, kmax)
    H = sheaf_cohomology(F, kmax)
    # degrees past the reliable one count against the verdict
    unverified = tuple(range(len(h), kmax + 1))
    isomorphic = not unverified and all(
        h[k].invariants == H[k].invariants for k in range(kmax + 1)
    )
    if unverified:
        logger.warning(f"Resolution of '{F.name}' too short to compare degrees {list(unverified)}")

    hyper = None
    if spectral:
        L = SheafComplex(terms=R.terms, differentials=R.differentials, name=f"res({F.name})")
        hyper = hypercohomology(F.space, L, max(0, min(kmax, R.reliable_degree)))
    return AcyclicReport(
        terms=tuple(verdicts),
        resolution_cohomology=tuple(h),
        sheaf_cohomology=tuple(H),
        isomorphic=isomorphic,
        hyper=hyper,
        unverified_degrees=unverified,
    )
