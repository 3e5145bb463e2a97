"""Complexes, double complexes, spectral sequences and hypercohomology."""

from sheafwork.spectral.complexes import (
    Axis,
    DoubleComplex,
    GroupComplex,
    SheafComplex,
    TotalComplex,
    cohomology_sheaves,
    column_cohomology,
    iterated_cohomology,
    row_cohomology,
    single_sheaf_complex,
    total_complex,
)
from sheafwork.spectral.hyper import (
    AcyclicReport,
    Hypercohomology,
    TermVerdict,
    acyclic_resolution_check,
    degeneration_page,
    godement_double_complex,
    hypercohomology,
)
from sheafwork.spectral.pages import SpectralPages, spectral_sequence, stabilization_bound

__all__ = [
    "AcyclicReport",
    "Axis",
    "DoubleComplex",
    "GroupComplex",
    "Hypercohomology",
    "SheafComplex",
    "SpectralPages",
    "TermVerdict",
    "TotalComplex",
    "acyclic_resolution_check",
    "cohomology_sheaves",
    "column_cohomology",
    "degeneration_page",
    "godement_double_complex",
    "hypercohomology",
    "iterated_cohomology",
    "row_cohomology",
    "single_sheaf_complex",
    "spectral_sequence",
    "stabilization_bound",
    "total_complex",
]
