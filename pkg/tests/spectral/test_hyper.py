import pytest

from sheafwork.core.errors import AmbientMismatch, NotAResolution
from sheafwork.exactalg import FpGroup, GroupInvariants
from sheafwork.godement import Resolution, godement_resolution, sheaf_cohomology
from sheafwork.sheaves import SheafHom, constant_sheaf
from sheafwork.spectral import (
    SheafComplex,
    acyclic_resolution_check,
    godement_double_complex,
    hypercohomology,
    single_sheaf_complex,
)
from sheafwork.workspace import corpus

Z = FpGroup.free(1)
ZERO = GroupInvariants(0, ())
INTEGERS = GroupInvariants(1, ())


def invariants(groups):
    return [g.invariants for g in groups]


class TestHypercohomology:
    """H^n(X, L^•) through the Godement double complex."""

    @pytest.mark.parametrize("space_name", ["sierpinski", "pseudocircle", "sphere6"])
    def test_single_sheaf_is_sheaf_cohomology(self, space_name):
        X = corpus.space(space_name)
        F = constant_sheaf(X, Z)
        hyper = hypercohomology(X, single_sheaf_complex(F), 2)
        assert invariants(hyper.groups) == invariants(sheaf_cohomology(F, 2))

    def test_flags_on_sierpinski(self, sierpinski):
        L = single_sheaf_complex(constant_sheaf(sierpinski, Z))
        hyper = hypercohomology(sierpinski, L, 1, check_exact_functor=True)
        assert hyper.flags["e1_row_concentrated"]
        assert hyper.flags["e1_column_concentrated"]
        assert hyper.flags["e1_matches_cohomology_sheaves"]
        assert hyper.flags["degenerate_at_e2"]

    def test_pseudocircle_row_concentrated_only(self, pseudocircle):
        L = single_sheaf_complex(constant_sheaf(pseudocircle, Z))
        hyper = hypercohomology(pseudocircle, L, 2)
        assert hyper.flags["e1_row_concentrated"]
        assert not hyper.flags["e1_column_concentrated"]
        assert hyper.to_dict()["groups"] == [
            {"rank": 1, "torsion": []},
            {"rank": 1, "torsion": []},
            {"rank": 0, "torsion": []},
        ]

    def test_godement_complex(self, pseudocircle):
        L, _ = corpus.sheaf_complex(pseudocircle, "godement_constZ")
        hyper = hypercohomology(pseudocircle, L, 2)
        assert invariants(hyper.groups) == [INTEGERS, INTEGERS, ZERO]

    def test_double_complex_shape(self, sierpinski):
        L = single_sheaf_complex(constant_sheaf(sierpinski, Z))
        K = godement_double_complex(L, 1)
        assert (K.pmax, K.qmax) == (2, 0)
        assert K.cell(0, 0).invariants == GroupInvariants(2, ())

    def test_zero_complex(self, pseudocircle):
        L, _ = corpus.sheaf_complex(pseudocircle, "zero_complex")
        assert all(g.is_trivial for g in hypercohomology(pseudocircle, L, 2).groups)

    def test_ambient_mismatch(self, sierpinski, pseudocircle):
        L = single_sheaf_complex(constant_sheaf(pseudocircle, Z))
        with pytest.raises(AmbientMismatch):
            hypercohomology(sierpinski, L, 1)

    def test_negative_degree(self, sierpinski):
        L = single_sheaf_complex(constant_sheaf(sierpinski, Z))
        with pytest.raises(ValueError):
            hypercohomology(sierpinski, L, -1)


class TestAcyclicResolutionCheck:
    """H^k(X, F) against the global sections of a resolution."""

    @pytest.mark.parametrize("space_name", ["sierpinski", "pseudocircle"])
    def test_godement_resolution(self, space_name):
        X = corpus.space(space_name)
        F = constant_sheaf(X, Z)
        report = acyclic_resolution_check(F, godement_resolution(F, 1), 1)
        assert report.acyclic
        assert report.isomorphic
        assert report.verdict
        assert report.to_dict()["degeneration"]["e1_row_concentrated"]

    def test_hand_built(self):
        R = corpus.pseudocircle_skyscrapers()
        report = acyclic_resolution_check(R.base, R, 2)
        assert report.verdict
        assert invariants(report.resolution_cohomology) == [INTEGERS, INTEGERS, ZERO]

    def test_non_acyclic_term(self):
        R = corpus.pseudocircle_nonacyclic()
        report = acyclic_resolution_check(R.base, R, 2, spectral=False)
        assert not report.acyclic
        assert not report.isomorphic
        assert not report.verdict
        (offender,) = report.offenders
        assert (offender.index, offender.first_failure) == (0, 1)
        assert report.to_dict()["offenders"] == [{"index": 0, "name": "constZ", "degree": 1}]
        assert "degeneration" not in report.to_dict()

    def test_too_short_resolution_is_not_isomorphic(self, pseudocircle):
        F = constant_sheaf(pseudocircle, Z)
        R = Resolution.build(F, SheafHom.identity(F), [], complete=False)
        report = acyclic_resolution_check(F, R, 2, spectral=False)
        assert report.resolution_cohomology == ()
        assert report.unverified_degrees == (0, 1, 2)
        assert not report.isomorphic
        assert not report.verdict
        assert report.to_dict()["unverified_degrees"] == [0, 1, 2]

    def test_godement_resolution_shorter_than_kmax(self, pseudocircle):
        F = constant_sheaf(pseudocircle, Z)
        report = acyclic_resolution_check(F, godement_resolution(F, 0), 2, spectral=False)
        assert len(report.resolution_cohomology) == 1
        assert report.unverified_degrees == (1, 2)
        assert not report.isomorphic

    def test_complete_resolution_checks_every_degree(self):
        R = corpus.pseudocircle_skyscrapers()
        report = acyclic_resolution_check(R.base, R, 3, spectral=False)
        assert report.unverified_degrees == ()
        assert len(report.resolution_cohomology) == 4
        assert report.isomorphic

    def test_resolution_of_another_sheaf(self, pseudocircle):
        R = corpus.pseudocircle_skyscrapers()
        with pytest.raises(NotAResolution):
            acyclic_resolution_check(corpus.sheaf(pseudocircle, "skyscraper:c"), R, 1)

    def test_complex_of_resolution_terms(self):
        R = corpus.sierpinski_flasque()
        L = SheafComplex(R.terms, R.differentials)
        hyper = hypercohomology(R.base.space, L, 1)
        assert invariants(hyper.groups) == [INTEGERS, ZERO]
