"""Exact integer linear algebra: Smith form, finitely presented groups, subquotients."""

from sheafwork.exactalg.groups import (
    FpGroup,
    GroupHom,
    GroupInvariants,
    canonical_invariants,
    direct_sum,
    direct_sum_hom,
)
from sheafwork.exactalg.matrix import IntMatrix
from sheafwork.exactalg.smith import SmithForm, smith_normal_form
from sheafwork.exactalg.subgroups import (
    Cohomology,
    HomParts,
    Subgroup,
    Subquotient,
    cohomology_at,
    factor_through,
    hom_parts,
    induced_map,
    preimage,
    sequence_cohomology,
    subgroup_lattice,
    subquotient,
)

__all__ = [
    "Cohomology",
    "FpGroup",
    "GroupHom",
    "GroupInvariants",
    "HomParts",
    "IntMatrix",
    "SmithForm",
    "Subgroup",
    "Subquotient",
    "canonical_invariants",
    "cohomology_at",
    "direct_sum",
    "direct_sum_hom",
    "factor_through",
    "hom_parts",
    "induced_map",
    "preimage",
    "sequence_cohomology",
    "smith_normal_form",
    "subgroup_lattice",
    "subquotient",
]
