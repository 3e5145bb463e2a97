import pytest

from sheafwork.core.errors import NotStabilized
from sheafwork.exactalg import (
    FpGroup,
    GroupHom,
    GroupInvariants,
    cohomology_at,
    direct_sum,
    hom_parts,
)
from sheafwork.spectral import Axis, iterated_cohomology, spectral_sequence, stabilization_bound
from sheafwork.spectral.complexes import total_complex
from sheafwork.workspace import corpus

ZERO = GroupInvariants(0, ())
INTEGERS = GroupInvariants(1, ())


def page(run, r):
    return {cell: g.invariants for cell, g in run.pages[r].items()}


class TestBounds:
    def test_stabilization_bound(self):
        assert stabilization_bound(corpus.double_complex("one_row")) == 4
        assert stabilization_bound(corpus.double_complex("extension_problem")) == 3

    def test_too_few_pages(self):
        K = corpus.double_complex("extension_problem")
        with pytest.raises(NotStabilized) as excinfo:
            spectral_sequence(K, Axis.BY_P, 2)
        assert excinfo.value.details["bound"] == 3

    def test_pages_repeat_past_the_bound(self):
        K = corpus.double_complex("one_row")
        run = spectral_sequence(K, "p", 7)
        assert run.rmax == 7
        assert page(run, 7) == page(run, run.bound)
        assert run.page_is_zero_map(6)


class TestOneRow:
    """Z → Z² → Z with maps (1, 1) and 0."""

    def test_filtration_by_columns(self):
        run = spectral_sequence(corpus.double_complex("one_row"), Axis.BY_P, 4)
        assert [g.invariants for g in run.total_cohomology] == [ZERO, INTEGERS, INTEGERS]
        assert page(run, 2) == {(0, 0): ZERO, (1, 0): INTEGERS, (2, 0): INTEGERS}
        assert run.degenerates_at() == 2
        assert not run.page_is_zero_map(1)

    def test_filtration_by_rows(self):
        run = spectral_sequence(corpus.double_complex("one_row"), Axis.BY_Q, 4)
        assert page(run, 1) == {(0, 0): ZERO, (1, 0): INTEGERS, (2, 0): INTEGERS}
        assert run.degenerates_at() == 1
        assert run.extension_flags == ()

    def test_torsion(self):
        run = spectral_sequence(corpus.double_complex("one_row_torsion"), Axis.BY_P, 3)
        assert run.einf[(1, 0)].invariants == GroupInvariants(0, (2,))
        assert all(run.checks.values())


class TestExtensionProblem:
    """H¹ = Z/4 is only visible up to extension along the q-filtration."""

    def test_by_p_has_no_extension(self):
        run = spectral_sequence(corpus.double_complex("extension_problem"), Axis.BY_P, 3)
        assert run.total_cohomology[1].invariants == GroupInvariants(0, (4,))
        assert run.einf[(1, 0)].invariants == GroupInvariants(0, (4,))
        assert run.extension_flags == ()

    def test_by_q_flags_degree_one(self):
        run = spectral_sequence(corpus.double_complex("extension_problem"), Axis.BY_Q, 3)
        assert run.einf[(1, 0)].invariants == GroupInvariants(0, (2,))
        assert run.einf[(0, 1)].invariants == GroupInvariants(0, (2,))
        assert run.extension_flags == (1,)
        assert run.checks["convergence"]
        assert run.checks["rank_accounting"]

    def test_targets(self):
        run = spectral_sequence(corpus.double_complex("extension_problem"), Axis.BY_Q, 3)
        assert run.target(1, 1, 0) == (1, 1)
        assert run.source(1, 1, 1) == (1, 0)
        assert run.cells_in_degree(1) == [(0, 1), (1, 0)]


class TestSquares:
    def test_square_exact(self):
        K = corpus.double_complex("square_exact")
        for axis in Axis:
            run = spectral_sequence(K, axis, stabilization_bound(K))
            assert all(g.is_trivial for g in run.total_cohomology)
            assert all(g.is_trivial for g in run.einf.values())

    def test_square_zero(self):
        K = corpus.double_complex("square_zero")
        run = spectral_sequence(K, Axis.BY_P, stabilization_bound(K))
        assert [g.invariants.rank for g in run.total_cohomology] == [1, 2, 1]
        assert run.degenerates_at() == 1


class TestRandomDoubleComplexes:
    """Seeded tensor products of random free complexes."""

    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("axis", list(Axis))
    def test_checks_hold(self, make_double, seed, axis):
        K = make_double(seed)
        run = spectral_sequence(K, axis, stabilization_bound(K))
        assert run.checks == {
            "d_squared_zero": True,
            "recurrence": True,
            "convergence": True,
            "rank_accounting": True,
        }

    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("axis", list(Axis))
    def test_e2_is_iterated_cohomology(self, make_double, seed, axis):
        K = make_double(seed)
        run = spectral_sequence(K, axis, stabilization_bound(K))
        iterated = iterated_cohomology(K, axis)
        assert page(run, 2) == {cell: g.invariants for cell, g in iterated.items()}

    @pytest.mark.parametrize("seed", range(3))
    def test_axes_agree_on_total_cohomology(self, make_double, seed):
        K = make_double(seed)
        by_p = spectral_sequence(K, Axis.BY_P, stabilization_bound(K))
        by_q = spectral_sequence(K, Axis.BY_Q, stabilization_bound(K))
        assert [g.invariants for g in by_p.total_cohomology] == [
            g.invariants for g in by_q.total_cohomology
        ]


def expected_target(axis, r, p, q):
    return (p + r, q - r + 1) if axis is Axis.BY_P else (p - r + 1, q + r)


def torsion_order(group):
    order = 1
    for d in group.invariants.torsion:
        order *= d
    return order


class TestStaircase:
    """Z at (0,1) → (1,1) ← (1,0) → (2,0): the two ends are joined by d_2."""

    @pytest.fixture
    def staircase(self, assemble_double):
        nodes = [((0, 1), 0), ((1, 1), 0), ((1, 0), 0), ((2, 0), 0)]
        arrows = [(0, 1, 1), (2, 1, 1), (2, 3, 1)]
        return assemble_double(2, 1, nodes, arrows, name="staircase")

    def test_second_differential(self, staircase):
        run = spectral_sequence(staircase, Axis.BY_P, stabilization_bound(staircase))
        assert page(run, 2)[(0, 1)] == INTEGERS
        assert page(run, 2)[(2, 0)] == INTEGERS
        assert run.target(2, 0, 1) == (2, 0)
        d2 = run.differentials[2][(0, 1)]
        assert not d2.is_zero()
        parts = hom_parts(d2)
        assert parts.is_injective and parts.is_surjective
        assert all(g == ZERO for g in page(run, 3).values())
        assert run.degenerates_at() == 3
        assert all(g.is_trivial for g in run.total_cohomology)

    def test_rows_cancel_on_first_page(self, staircase):
        run = spectral_sequence(staircase, Axis.BY_Q, stabilization_bound(staircase))
        assert all(g == ZERO for g in page(run, 1).values())
        assert run.degenerates_at() == 1


class TestZigzagDoubleComplexes:
    """Zigzags, squares and torsion cells under random changes of generators."""

    @pytest.fixture(params=range(100))
    def double(self, request, make_zigzag):
        return make_zigzag(request.param)

    @pytest.mark.parametrize("axis", list(Axis))
    def test_pages(self, double, axis):
        run = spectral_sequence(double, axis, stabilization_bound(double))
        assert all(run.checks.values()), run.checks
        grid = set(double.grid())
        trivial = FpGroup.trivial()
        for r in range(run.bound):
            for (p, q) in grid:
                d = run.differentials[r][(p, q)]
                target = expected_target(axis, r, p, q)
                assert run.target(r, p, q) == target
                assert sum(target) == p + q + 1
                assert d.source == run.pages[r][(p, q)]
                if target in grid:
                    assert d.target == run.pages[r][target]
                    assert run.differentials[r][target].after(d).is_zero()
                else:
                    assert d.is_zero()
                source = run.source(r, p, q)
                incoming = run.differentials[r].get(
                    source, GroupHom.zero(trivial, run.pages[r][(p, q)])
                )
                homology = cohomology_at(incoming, d).group
                assert homology.invariants == run.pages[r + 1][(p, q)].invariants

    @pytest.mark.parametrize("axis", list(Axis))
    def test_limit_assembles_total_cohomology(self, double, axis):
        run = spectral_sequence(double, axis, stabilization_bound(double))
        direct = total_complex(double).complex.cohomology()
        assert [g.invariants for g in run.total_cohomology] == [g.invariants for g in direct]
        for n, H in enumerate(direct):
            cells = run.cells_in_degree(n)
            assert H.invariants.rank == sum(run.einf[c].invariants.rank for c in cells)
            pieces = 1
            for c in cells:
                pieces *= torsion_order(run.einf[c])
            assert pieces % torsion_order(H) == 0
            if n not in run.extension_flags:
                assert H.invariants == direct_sum([run.einf[c] for c in cells]).invariants

    def test_e2_is_iterated_cohomology(self, double):
        for axis in Axis:
            run = spectral_sequence(double, axis, stabilization_bound(double))
            iterated = iterated_cohomology(double, axis)
            assert page(run, 2) == {cell: g.invariants for cell, g in iterated.items()}


class TestRandomDoubleComplexVariety:
    """The random family reaches torsion cells and higher differentials."""

    def test_torsion_cells_occur(self, make_zigzag):
        assert any(
            g.invariants.torsion
            for seed in range(100)
            for g in make_zigzag(seed).cells.values()
        )

    def test_higher_differentials_occur(self, make_zigzag):
        found = False
        for seed in range(100):
            K = make_zigzag(seed)
            run = spectral_sequence(K, Axis.BY_P, stabilization_bound(K))
            if any(not run.page_is_zero_map(r) for r in range(2, run.bound + 1)):
                found = True
                break
        assert found
