"""Sheaves as stalk functors, presheaf tables, morphisms and exactness."""

from sheafwork.sheaves.morphisms import (
    ExactnessReport,
    LeftExactnessReport,
    SheafHomParts,
    is_exact_sequence,
    sections_left_exactness,
    sheaf_hom_parts,
    short_exact_maps,
)
from sheafwork.sheaves.presheaf import (
    PresheafTable,
    SheafAxiomReport,
    Sheafification,
    build_table,
    check_sheaf_axioms,
    constant_functions_presheaf,
    extend_through_sheafification,
    global_only_presheaf,
    minimal_open_cover,
    sheafify,
    stalk_of_table,
    table_of_sheaf,
    zero_presheaf,
)
from sheafwork.sheaves.sheaf import (
    SectionGroup,
    Sheaf,
    SheafHom,
    build_sheaf,
    constant_sheaf,
    direct_sum_sheaves,
    restriction_map,
    section_map,
    sections,
    skyscraper,
    zero_sheaf,
)

__all__ = [
    "ExactnessReport",
    "LeftExactnessReport",
    "PresheafTable",
    "SectionGroup",
    "Sheaf",
    "SheafAxiomReport",
    "SheafHom",
    "SheafHomParts",
    "Sheafification",
    "build_sheaf",
    "build_table",
    "check_sheaf_axioms",
    "constant_functions_presheaf",
    "constant_sheaf",
    "direct_sum_sheaves",
    "extend_through_sheafification",
    "global_only_presheaf",
    "is_exact_sequence",
    "minimal_open_cover",
    "restriction_map",
    "section_map",
    "sections",
    "sections_left_exactness",
    "sheaf_hom_parts",
    "sheafify",
    "short_exact_maps",
    "skyscraper",
    "stalk_of_table",
    "table_of_sheaf",
    "zero_presheaf",
    "zero_sheaf",
]
