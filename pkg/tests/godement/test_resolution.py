import pytest

from sheafwork.core.errors import NotAResolution
from sheafwork.exactalg import FpGroup, GroupHom, GroupInvariants, IntMatrix
from sheafwork.godement import (
    Resolution,
    godement_c0,
    godement_functor,
    godement_resolution,
    godement_section_exactness,
    godement_step,
    is_flasque,
)
from sheafwork.sheaves import SheafHom, constant_sheaf, sheaf_hom_parts
from sheafwork.workspace import corpus

Z = FpGroup.free(1)


class TestGodementStep:
    """C⁰F = ∏_p (p_*)F_p and the quotient Q¹."""

    def test_c0_stalks(self, pseudocircle):
        c0, unit = godement_c0(constant_sheaf(pseudocircle, Z))
        assert c0.stalk("a").invariants == GroupInvariants(1, ())
        assert c0.stalk("c").invariants == GroupInvariants(3, ())
        assert c0.global_sections().group.invariants == GroupInvariants(4, ())
        assert sheaf_hom_parts(unit).is_injective

    def test_quotient_stalks(self, pseudocircle):
        """Q¹ has stalks 0, 0, Z², Z² on a, b, c, d."""
        step = godement_step(constant_sheaf(pseudocircle, Z))
        stalks = [step.quotient.stalk(p).invariants for p in "abcd"]
        assert stalks == [
            GroupInvariants(0, ()),
            GroupInvariants(0, ()),
            GroupInvariants(2, ()),
            GroupInvariants(2, ()),
        ]

    def test_c0_is_flasque(self, sphere6):
        c0, _ = godement_c0(constant_sheaf(sphere6, Z))
        assert is_flasque(c0)


class TestGodementResolution:
    """Resolutions are exact through the constructed range."""

    def test_exact(self, pseudocircle):
        R = godement_resolution(constant_sheaf(pseudocircle, Z), 2)
        assert R.length == 4
        assert R.exactness().exact
        assert R.reliable_degree == 2
        assert not R.complete

    def test_terms_are_flasque(self, sierpinski):
        R = godement_resolution(constant_sheaf(sierpinski, Z), 1)
        assert all(is_flasque(L) for L in R.terms)

    def test_negative_degree(self, sierpinski):
        with pytest.raises(ValueError):
            godement_resolution(constant_sheaf(sierpinski, Z), -1)

    def test_build_rejects_non_exact(self, sierpinski):
        F = constant_sheaf(sierpinski, Z)
        doubling = SheafHom(F, F, {p: GroupHom(Z, Z, IntMatrix.from_rows([[2]])) for p in "ab"})
        with pytest.raises(NotAResolution):
            Resolution.build(F, doubling, [], complete=True)

    def test_hand_built_resolutions(self):
        for build in (
            corpus.sierpinski_flasque,
            corpus.pseudocircle_skyscrapers,
            corpus.pseudocircle_nonacyclic,
        ):
            R = build()
            assert R.complete
            assert R.exactness().exact


class TestGodementFunctor:
    """C^k on morphisms."""

    def test_identity_goes_to_identity(self, sierpinski):
        F = constant_sheaf(sierpinski, Z)
        R = godement_resolution(F, 1)
        maps = godement_functor(SheafHom.identity(F), 1, R, R)
        assert len(maps) == 3
        for k, c in enumerate(maps):
            assert c.equals(SheafHom.identity(R.terms[k]))

    def test_commutes_with_differentials(self, pseudocircle):
        F = constant_sheaf(pseudocircle, Z)
        phi = SheafHom(F, F, {p: GroupHom(Z, Z, IntMatrix.from_rows([[3]])) for p in "abcd"})
        R = godement_resolution(F, 1)
        maps = godement_functor(phi, 1, R, R)
        for k, d in enumerate(R.differentials):
            assert d.after(maps[k]).equals(maps[k + 1].after(d))

    def test_section_exactness(self, pseudocircle):
        """Γ(X, C^p ·) carries 0 → Z → Z → Z/2 → 0 to a short exact sequence."""
        F = constant_sheaf(pseudocircle, Z)
        phi = SheafHom(F, F, {p: GroupHom(Z, Z, IntMatrix.from_rows([[2]])) for p in "abcd"})
        parts = sheaf_hom_parts(phi)
        for p in (0, 1):
            report = godement_section_exactness(phi, parts.cokernel_projection, p)
            assert report.left_exact
            assert report.surjective
