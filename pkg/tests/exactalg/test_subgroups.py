import pytest

from sheafwork.core.errors import AmbientMismatch, NotAComplex, NotSolvable
from sheafwork.exactalg import (
    FpGroup,
    GroupHom,
    GroupInvariants,
    IntMatrix,
    Subgroup,
    cohomology_at,
    factor_through,
    induced_map,
    preimage,
    sequence_cohomology,
    subgroup_lattice,
    subquotient,
)


def hom(source, target, rows):
    return GroupHom(source, target, IntMatrix.from_rows(rows, cols=source.generators))


class TestSubgroups:
    """Subgroup membership, lattice operations and quotients."""

    def test_quotient(self):
        Z2 = FpGroup.free(2)
        S = Subgroup(Z2, IntMatrix.from_columns([[2, 0]], rows=2))
        assert S.quotient().invariants == GroupInvariants(1, (2,))
        assert S.as_group().invariants == GroupInvariants(1, ())

    def test_sum_and_intersection(self):
        Z = FpGroup.free(1)
        a = Subgroup(Z, IntMatrix.from_rows([[4]]))
        b = Subgroup(Z, IntMatrix.from_rows([[6]]))
        result = subgroup_lattice(a, b)
        assert result.sum.contains([2])
        assert not result.sum.contains([1])
        assert result.intersection.contains([12])
        assert not result.intersection.contains([6])
        assert not result.a_contains_b and not result.b_contains_a

    def test_containment_in_torsion_group(self):
        G = FpGroup.cyclic(4)
        two = Subgroup(G, IntMatrix.from_rows([[2]]))
        assert Subgroup.whole(G).contains_subgroup(two)
        assert two.contains([6])

    def test_different_ambients(self):
        a = Subgroup.whole(FpGroup.free(1))
        b = Subgroup.whole(FpGroup.cyclic(2))
        with pytest.raises(AmbientMismatch):
            subgroup_lattice(a, b)

    def test_preimage(self):
        Z = FpGroup.free(1)
        f = hom(Z, Z, [[3]])
        S = preimage(f, Subgroup(Z, IntMatrix.from_rows([[6]])))
        assert S.contains([2])
        assert not S.contains([1])


def same_subgroup(a, b):
    return a.contains_subgroup(b) and b.contains_subgroup(a)


AMBIENTS = {
    "free": FpGroup.free(3),
    "torsion": FpGroup(3, IntMatrix.from_rows([[0, 4, 0], [0, 0, 6]])),
}


class TestSubgroupLatticeLaws:
    """Lattice laws on random triples of subgroups."""

    def triple(self, random_matrix, ambient, seed):
        A = Subgroup(ambient, random_matrix(seed, 3, 1 + seed % 2, low=-4, high=5))
        B = Subgroup(ambient, random_matrix(500 + seed, 3, 1 + seed % 3, low=-4, high=5))
        extra = random_matrix(900 + seed, 3, 1, low=-4, high=5)
        C = Subgroup(ambient, IntMatrix.hstack([A.generators, extra], rows=3))
        return A, B, C

    @pytest.mark.parametrize("ambient", sorted(AMBIENTS))
    @pytest.mark.parametrize("seed", range(30))
    def test_bounds(self, random_matrix, ambient, seed):
        A, B, _ = self.triple(random_matrix, AMBIENTS[ambient], seed)
        result = subgroup_lattice(A, B)
        assert result.sum.contains_subgroup(A)
        assert result.sum.contains_subgroup(B)
        assert A.contains_subgroup(result.intersection)
        assert B.contains_subgroup(result.intersection)

    @pytest.mark.parametrize("ambient", sorted(AMBIENTS))
    @pytest.mark.parametrize("seed", range(30))
    def test_modular_law(self, random_matrix, ambient, seed):
        """A ⊆ C implies A + (B ∩ C) = (A + B) ∩ C."""
        A, B, C = self.triple(random_matrix, AMBIENTS[ambient], seed)
        assert C.contains_subgroup(A)
        left = subgroup_lattice(A, subgroup_lattice(B, C).intersection).sum
        right = subgroup_lattice(subgroup_lattice(A, B).sum, C).intersection
        assert same_subgroup(left, right)


class TestSubquotient:
    """N / D with coordinates and lifts."""

    def test_coordinates_and_lift(self):
        """2Z / 6Z ≅ Z/3"""
        Z = FpGroup.free(1)
        sq = subquotient(Z, IntMatrix.from_rows([[2]]), IntMatrix.from_rows([[6]]))
        assert sq.group.invariants == GroupInvariants(0, (3,))
        x = sq.coordinates([2])
        assert not sq.group.is_zero_element(x)
        assert sq.group.is_zero_element(sq.coordinates([6]))
        assert sq.group.is_zero_element(sq.coordinates(sq.lift.apply([3])))

    def test_outside_numerator(self):
        Z = FpGroup.free(1)
        sq = subquotient(Z, IntMatrix.from_rows([[2]]), IntMatrix.zeros(1, 0))
        with pytest.raises(NotSolvable):
            sq.coordinates([1])

    def test_induced_map(self):
        """Multiplication by 2 induces Z/2 → Z/4 sending 1 to 2."""
        Z = FpGroup.free(1)
        source = subquotient(Z, IntMatrix.identity(1), IntMatrix.from_rows([[2]]))
        target = subquotient(Z, IntMatrix.identity(1), IntMatrix.from_rows([[4]]))
        f = induced_map(source, target, IntMatrix.from_rows([[2]]))
        assert not f.is_zero()
        assert f.scale(2).is_zero()

    def test_factor_through(self):
        Z = FpGroup.free(1)
        inclusion = hom(Z, Z, [[2]])
        f = hom(Z, Z, [[6]])
        g = factor_through(inclusion, f)
        assert inclusion.after(g).equals(f)
        with pytest.raises(NotSolvable):
            factor_through(inclusion, hom(Z, Z, [[3]]))


class TestCohomology:
    """ker g / im f."""

    def test_torsion_cohomology(self):
        """Z --2--> Z --0--> Z has cohomology Z/2 in the middle."""
        Z = FpGroup.free(1)
        c = cohomology_at(hom(Z, Z, [[2]]), hom(Z, Z, [[0]]))
        assert c.invariants == GroupInvariants(0, (2,))
        assert c.cycles.invariants == GroupInvariants(1, ())
        assert not c.projection.is_zero()

    def test_not_a_complex(self):
        Z = FpGroup.free(1)
        with pytest.raises(NotAComplex):
            cohomology_at(hom(Z, Z, [[1]]), hom(Z, Z, [[1]]))

    def test_composite_zero_modulo_relations(self):
        """Z --1--> Z/2 --1--> Z/2 is not a complex, Z --2--> Z --1--> Z/2 is."""
        Z, Z2 = FpGroup.free(1), FpGroup.cyclic(2)
        with pytest.raises(NotAComplex):
            cohomology_at(hom(Z, Z2, [[1]]), hom(Z2, Z2, [[1]]))
        c = cohomology_at(hom(Z, Z, [[2]]), hom(Z, Z2, [[1]]))
        assert c.group.is_trivial

    def test_sequence(self):
        """0 → Z --(1,1)--> Z² --(1,-1)--> Z → 0 is exact."""
        Z, Z2 = FpGroup.free(1), FpGroup.free(2)
        groups = sequence_cohomology([Z, Z2, Z], [hom(Z, Z2, [[1], [1]]), hom(Z2, Z, [[1, -1]])])
        assert all(c.group.is_trivial for c in groups)
