"""Partitions of unity by sheaf endomorphisms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from sheafwork.core.errors import IllFormedHom, NotACover
from sheafwork.exactalg import GroupHom
from sheafwork.finspace import OpenSet
from sheafwork.sheaves import Sheaf, SheafHom


@dataclass(frozen=True)
class PartitionReport:
    support_ok: bool
    sum_ok: bool
    # (index of η, point) where η is nonzero outside its open
    support_failures: tuple[tuple[int, str], ...]
    sum_failures: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return self.support_ok and self.sum_ok

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "support_ok": self.support_ok,
            "sum_ok": self.sum_ok,
            "support_failures": [list(x) for x in self.support_failures],
            "sum_failures": list(self.sum_failures),
        }


def support(eta: SheafHom) -> frozenset[str]:
    """Points where the stalk map is nonzero."""
    return frozenset(p for p in eta.source.space.points if not eta.at(p).is_zero())


def verify_partition_of_unity(
    F: Sheaf, cover: Sequence[OpenSet], etas: Sequence[SheafHom]
) -> PartitionReport:
    """Check supp η_α ⊆ U_α and Σ_α η_α = 1 at every stalk.

    Naturality of each η is checked when the ``SheafHom`` is built.
    """
    space = F.space
    if len(cover) != len(etas):
        raise NotACover(f"{len(cover)} opens given for {len(etas)} endomorphisms")
    covered = frozenset().union(*(U.members for U in cover)) if cover else frozenset()
    if covered != frozenset(space.points):
        raise NotACover("Opens do not cover the space", missing=sorted(set(space.points) - covered))
    for eta in etas:
        if not (eta.source.same_as(F) and eta.target.same_as(F)):
            raise IllFormedHom("Partition member is not an endomorphism of the sheaf")

    support_failures = []
    for alpha, (U, eta) in enumerate(zip(cover, etas)):
        for p in space.points:
            if p in support(eta) and p not in U:
                support_failures.append((alpha, p))

    sum_failures = []
    for p in space.points:
        total = GroupHom.zero(F.stalk(p), F.stalk(p))
        for eta in etas:
            total = total + eta.at(p)
        if not total.equals(GroupHom.identity(F.stalk(p))):
            sum_failures.append(p)

    return PartitionReport(
        support_ok=not support_failures,
        sum_ok=not sum_failures,
        support_failures=tuple(support_failures),
        sum_failures=tuple(sum_failures),
    )
