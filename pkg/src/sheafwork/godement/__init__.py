"""Godement resolutions, sheaf cohomology, flasque and fine sheaves."""

from sheafwork.godement.cohomology import (
    flasque_failures,
    global_section_complex,
    godement_section_exactness,
    is_flasque,
    lim_higher_oracle,
    resolution_cohomology,
    sheaf_cohomology,
)
from sheafwork.godement.fine import PartitionReport, support, verify_partition_of_unity
from sheafwork.godement.resolution import (
    GodementStep,
    Resolution,
    godement_c0,
    godement_c0_map,
    godement_functor,
    godement_resolution,
    godement_step,
)

__all__ = [
    "GodementStep",
    "PartitionReport",
    "Resolution",
    "flasque_failures",
    "global_section_complex",
    "godement_c0",
    "godement_c0_map",
    "godement_functor",
    "godement_resolution",
    "godement_section_exactness",
    "godement_step",
    "is_flasque",
    "lim_higher_oracle",
    "resolution_cohomology",
    "sheaf_cohomology",
    "support",
    "verify_partition_of_unity",
]
