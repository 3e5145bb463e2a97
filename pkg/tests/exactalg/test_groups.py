import pytest

from sheafwork.core.errors import ChainMismatch, IllFormedGroup, IllFormedHom
from sheafwork.exactalg import (
    FpGroup,
    GroupHom,
    GroupInvariants,
    IntMatrix,
    direct_sum,
    direct_sum_hom,
    hom_parts,
)


class TestFpGroup:
    """Presentations and their invariants."""

    def test_free_and_trivial(self):
        assert FpGroup.free(3).invariants == GroupInvariants(3, ())
        assert FpGroup.trivial().is_trivial
        assert FpGroup.trivial().generators == 0

    def test_cyclic(self):
        assert FpGroup.cyclic(6).describe() == "Z/6"
        assert FpGroup.cyclic(0).describe() == "Z"
        assert FpGroup.cyclic(1).is_trivial

    def test_invariants_of_presentation(self):
        """Z² / ⟨(2,4), (6,8)⟩ ≅ Z/2 ⊕ Z/4"""
        G = FpGroup(2, IntMatrix.from_rows([[2, 4], [6, 8]]))
        assert G.invariants == GroupInvariants(0, (2, 4))
        assert G.describe() == "Z/2 ⊕ Z/4"

    def test_describe_mixed(self):
        assert GroupInvariants(2, (3,)).describe() == "Z^2 ⊕ Z/3"
        assert GroupInvariants(0, ()).describe() == "0"
        assert GroupInvariants(1, (2, 2)).to_dict() == {"rank": 1, "torsion": [2, 2]}

    def test_reduced_presentation_round_trips_elements(self):
        G = FpGroup(3, IntMatrix.from_rows([[1, 1, 0], [0, 2, 2]]))
        reduced = G.reduced()
        assert reduced.group.isomorphic(G)
        back = reduced.from_reduced.after(reduced.to_reduced)
        assert back.equals(GroupHom.identity(G))

    def test_zero_element(self):
        G = FpGroup.cyclic(4)
        assert G.is_zero_element([8])
        assert not G.is_zero_element([2])
        assert G.equal_elements([1], [5])

    def test_relations_must_match_generators(self):
        with pytest.raises(IllFormedGroup) as info:
            FpGroup(2, IntMatrix.from_rows([[1, 2, 3]]))
        assert info.value.code == "ill_formed_group"
        assert info.value.details == {"columns": 3, "generators": 2}

    def test_direct_sum(self):
        G = direct_sum([FpGroup.cyclic(2), FpGroup.free(1), FpGroup.cyclic(3)])
        assert G.invariants == GroupInvariants(1, (6,))


class TestInvariantsUnderChangeOfBasis:
    """Z^n / rowspace(R) ≅ Z^n / rowspace(Q·R·P) for unimodular Q and P."""

    @pytest.mark.parametrize("seed", range(60))
    def test_random_presentation(self, random_matrix, random_unimodular, seed):
        n, m = 1 + seed % 4, 1 + (seed // 4) % 4
        R = random_matrix(seed, m, n, low=-6, high=7)
        Q = random_unimodular(1000 + seed, m)
        P = random_unimodular(2000 + seed, n)
        G = FpGroup(n, R)
        H = FpGroup(n, Q @ R @ P)
        assert H.invariants == G.invariants
        assert H.describe() == G.describe()

    @pytest.mark.parametrize("seed", range(10))
    def test_extra_trivial_relations(self, random_matrix, seed):
        """Appending a combination of existing relations changes nothing."""
        R = random_matrix(seed, 2, 3, low=-6, high=7)
        combination = IntMatrix.from_rows([[2, -1]]) @ R
        G = FpGroup(3, R)
        H = FpGroup(3, IntMatrix.vstack([R, combination], cols=3))
        assert H.invariants == G.invariants


class TestGroupHom:
    """Homomorphisms between presented groups."""

    def test_shape_is_checked(self):
        with pytest.raises(IllFormedHom):
            GroupHom(FpGroup.free(2), FpGroup.free(1), IntMatrix.from_rows([[1], [1]]))

    def test_relations_must_map_to_relations(self):
        """Z/2 → Z/3 by 1 is not well defined."""
        with pytest.raises(IllFormedHom):
            GroupHom(FpGroup.cyclic(2), FpGroup.cyclic(3), IntMatrix.from_rows([[1]]))

    def test_well_defined_map_into_torsion(self):
        f = GroupHom(FpGroup.cyclic(2), FpGroup.cyclic(4), IntMatrix.from_rows([[2]]))
        assert not f.is_zero()
        assert f.scale(2).is_zero()

    def test_composition(self):
        Z = FpGroup.free(1)
        f = GroupHom(Z, Z, IntMatrix.from_rows([[2]]))
        g = GroupHom(Z, Z, IntMatrix.from_rows([[3]]))
        assert g.after(f).matrix == IntMatrix.from_rows([[6]])

    def test_composition_checks_ends(self):
        f = GroupHom.identity(FpGroup.free(1))
        g = GroupHom.identity(FpGroup.free(2))
        with pytest.raises(ChainMismatch):
            g.after(f)

    def test_equality_as_maps(self):
        G = FpGroup.cyclic(3)
        f = GroupHom(G, G, IntMatrix.from_rows([[1]]))
        g = GroupHom(G, G, IntMatrix.from_rows([[4]]))
        assert f != g
        assert f.equals(g)

    def test_direct_sum_hom(self):
        Z = FpGroup.free(1)
        h = direct_sum_hom([GroupHom(Z, Z, IntMatrix.from_rows([[2]])), GroupHom.identity(Z)])
        assert h.matrix == IntMatrix.from_rows([[2, 0], [0, 1]])


class TestHomParts:
    """Kernel, image and cokernel in reduced form."""

    def test_multiplication_by_two(self):
        Z = FpGroup.free(1)
        parts = hom_parts(GroupHom(Z, Z, IntMatrix.from_rows([[2]])))
        assert parts.kernel.is_trivial
        assert parts.image.invariants == GroupInvariants(1, ())
        assert parts.cokernel.invariants == GroupInvariants(0, (2,))
        assert parts.is_injective and not parts.is_surjective

    def test_projection_onto_torsion(self):
        """Z → Z/6 has kernel 6Z ≅ Z and trivial cokernel."""
        parts = hom_parts(GroupHom(FpGroup.free(1), FpGroup.cyclic(6), IntMatrix.from_rows([[1]])))
        assert parts.kernel.invariants == GroupInvariants(1, ())
        assert parts.is_surjective

    def test_trivial_results_have_no_generators(self):
        Z = FpGroup.free(1)
        parts = hom_parts(GroupHom.identity(Z))
        assert parts.kernel.generators == 0
        assert parts.cokernel.generators == 0

    def test_maps_compose_correctly(self):
        f = GroupHom(FpGroup.free(2), FpGroup.free(2), IntMatrix.from_rows([[1, 1], [2, 2]]))
        parts = hom_parts(f)
        assert f.after(parts.kernel_inclusion).is_zero()
        assert parts.image_inclusion.after(parts.corestriction).equals(f)
        assert parts.cokernel_projection.after(f).is_zero()
