"""
Grounding solver tests.

System assembly, exact affine solution sets, constraints, symmetrization and
signed moments, checked against the worked fixtures.
"""

from fractions import Fraction

import pytest

from negprob.algebra import Event, ObservationSpace, Partition, PartialDistribution, SampleSpace
from negprob.errors import DimensionError, InconsistentSpaceError, NotAutomorphismError
from negprob.fixtures import HARDY_SYMMETRY, fixture
from negprob.scalars import FloatField, QuadExt, RationalField
from negprob.solver import (
    AffineSolutionSet,
    LinearSystem,
    NoSolution,
    SignedGrounding,
    apply_constraints,
    assemble_system,
    event_probability,
    ground,
    reduce_rows,
    restrict,
    signed_moments,
    solve_affine,
    solve_square,
    symmetrize,
    zero_forced_points,
)

half = Fraction(1, 2)
quarter = Fraction(1, 4)


class TestPiponi:
    """Two boxes with one bit each; the unique grounding is signed."""

    def test_unique_grounding(self, piponi):
        s = ground(piponi.space)
        assert isinstance(s, AffineSolutionSet)
        assert s.dimension == 0
        assert tuple(s.particular) == (-half, half, half, half)
        assert s.labels == ("00", "01", "10", "11")
        print(f"✅ Grounding: {dict(zip(s.labels, s.particular))}")

    def test_signed_moments(self, piponi):
        g = ground(piponi.space).grounding()
        rvs = piponi.metadata["random_variables"]
        assert signed_moments(g, rvs["l"]) == (1, 0)
        assert signed_moments(g, rvs["r"]) == (1, 0)
        assert signed_moments(g, rvs["l+r"]) == (2, -1)
        print("✅ Var(l + r) = -1")

    def test_moments_need_every_point(self, piponi):
        g = ground(piponi.space).grounding()
        with pytest.raises(DimensionError):
            signed_moments(g, {"00": 1})

    def test_grounding_restricts_to_tests(self, piponi):
        g = ground(piponi.space).grounding()
        for test in piponi.space.tests:
            assert restrict(g, test.partition) == test.probs

    def test_event_probability(self, piponi):
        g = ground(piponi.space).grounding()
        assert event_probability(g, Event.of([0], 4)) == -half
        assert event_probability(g, Event.of([0, 3], 4)) == 0


class TestSystems:
    """Assembly and exact solving."""

    def test_row_labels(self, piponi):
        sys = assemble_system(piponi.space)
        assert sys.shape == (7, 4)
        assert sys.row_labels[0] == "left:0"
        assert sys.row_labels[-1] == "total"

    def test_feynman3_rank(self):
        sys = assemble_system(fixture("feynman3").space)
        assert sys.shape == (7, 8)
        assert sys.rank == 4
        print("✅ Six test equations and the total reduce to rank 4")

    def test_inconsistent_space_is_refused(self, schneider):
        os = schneider.space
        ab = os.test("AB")
        shift = Fraction(1, 16)
        probs = (ab.probs[0] + shift, ab.probs[1] - shift, ab.probs[2], ab.probs[3])
        tests = (PartialDistribution("AB", ab.partition, probs, os.field),) + os.tests[1:]
        with pytest.raises(InconsistentSpaceError) as info:
            assemble_system(ObservationSpace(os.space, tests, os.field))
        assert info.value.exit_code == 1
        assert info.value.violations

    def test_no_solution_witness(self):
        sys = LinearSystem(((1, 1), (1, 1)), (1, 2), ("a", "b"))
        result = solve_affine(sys)
        assert isinstance(result, NoSolution)
        assert result.verify()
        print(f"✅ Witness y = {result.certificate}")

    def test_solution_set_does_not_depend_on_row_order(self):
        rows = ((1, 1, 0), (0, 1, 1))
        a = solve_affine(LinearSystem(rows, (1, 1), ("x", "y", "z")))
        b = solve_affine(LinearSystem(rows[::-1], (1, 1), ("x", "y", "z")))
        assert a.same_set(b)
        assert a.particular == b.particular
        assert a.basis == b.basis

    def test_minimum_norm_particular(self):
        f = fixture("feynman2")
        s = ground(f.space)
        z, x, y = (f.metadata["expectations"][k] for k in "zxy")
        assert tuple(s.particular) == f.metadata["feynman_grounding"]
        assert s.basis == ((1, -1, -1, 1),)
        assert (z, x, y) == (1, 0, 0)

    def test_signed_grounding_must_sum_to_one(self):
        with pytest.raises(DimensionError):
            SignedGrounding(("a", "b"), (half, quarter), RationalField())


class TestSchneider:
    """Three polarizer pairs over Q(sqrt 2)."""

    def test_one_dimensional_family(self, schneider):
        s = ground(schneider.space)
        assert s.dimension == 1
        assert s.contains(schneider.metadata["particular"])
        assert s.system.in_null_space(schneider.metadata["direction"])
        print("✅ Null space spanned by (1,-1,-1,1,-1,1,1,-1)")

    def test_negative_event_is_constant(self, schneider):
        s = ground(schneider.space)
        f = s.system.field
        event = Event.of([s.system.column(l) for l in schneider.metadata["negative_event"]], 8)
        expected = quarter - QuadExt(0, quarter, 2)
        for t in (0, 1, Fraction(-3, 8), QuadExt(0, 1, 2)):
            assert event_probability(s.grounding((t,)), event) == expected
        assert f.sign(expected) < 0
        print(f"✅ P{{2,5}} = {f.format(expected)} at every t")


class TestHardy:
    """Two qubits; symmetric groundings and forced zeros."""

    def test_groundings_exist(self, hardy):
        s = ground(hardy.space)
        assert isinstance(s, AffineSolutionSet)
        assert len(s.labels) == 16
        assert s.dimension == 7

    def test_symmetric_family(self, hardy):
        s = apply_constraints(ground(hardy.space), HARDY_SYMMETRY)
        assert s.dimension == 4
        particular = hardy.metadata["particular"]
        assert s.contains(particular)
        for d in hardy.metadata["directions"]:
            assert s.system.in_null_space(d)
            assert s.contains([p + v for p, v in zip(particular, d)])
        print("✅ Displayed particular solution and four directions lie in the symmetric family")

    def test_swap_is_automorphism(self, hardy):
        s = ground(hardy.space)
        average = symmetrize(s, hardy.metadata["automorphism"])
        v = average(s.particular)
        assert s.contains(v)
        swap = hardy.metadata["automorphism"]
        for a, b in HARDY_SYMMETRY:
            assert v[s.system.column(a)] == v[s.system.column(b)]
        assert swap["0001"] == "0100"

    def test_zero_forced_points(self, hardy):
        remaining = set(hardy.space.space.labels) - set(zero_forced_points(hardy.space))
        assert remaining == set(hardy.metadata["non_idle"])
        print(f"✅ Only {sorted(remaining)} can carry mass")


class TestSymmetrize:
    """Automorphism validation."""

    def test_rejects_non_automorphism(self, piponi):
        s = ground(piponi.space)
        with pytest.raises(NotAutomorphismError):
            symmetrize(s, {"00": "01", "01": "00"})

    def test_box_swap(self, piponi):
        s = ground(piponi.space)
        average = symmetrize(s, {"01": "10", "10": "01"})
        assert average(s.grounding()) == tuple(s.particular)

    def test_constraints_without_new_rows(self, piponi):
        s = ground(piponi.space)
        assert apply_constraints(s, [("00", "00")]) is s


class TestCoarseRefinement:
    """Variables are refinement atoms when tests cannot tell points apart."""

    def test_block_variable(self):
        space = SampleSpace(("a", "b", "c"))
        t = PartialDistribution("t", Partition.of([[0, 1], [2]], 3), (quarter, 1 - quarter))
        s = ground(ObservationSpace(space, (t,)))
        assert s.labels == ("{a,b}", "c")
        assert tuple(s.particular) == (quarter, 1 - quarter)
        g = s.grounding()
        with pytest.raises(DimensionError):
            event_probability(g, Event.of([0], 3))


class TestPivoting:
    """Float reduction pivots on the largest remaining entry, exact reduction in column order."""

    MATRIX = [[Fraction(1, 1000), 2], [Fraction(1, 500), -1]]
    RHS = [1, 0]

    def test_float_field_full_pivoting(self):
        f = FloatField(1e-12)
        rows = [[float(a) for a in row] + [float(b)] for row, b in zip(self.MATRIX, self.RHS)]
        rows, pivots = reduce_rows(rows, 2, f)
        # column 1 holds the largest entry, so it is eliminated first
        assert pivots == [1, 0]
        x = solve_square(self.MATRIX, self.RHS, f)
        assert x == pytest.approx([200.0, 0.4], rel=1e-12)
        print(f"✅ Pivot columns {pivots}, solution {x}")

    def test_exact_field_column_order(self):
        f = RationalField()
        rows = [[f.coerce(a) for a in row] + [f.coerce(b)] for row, b in zip(self.MATRIX, self.RHS)]
        _, pivots = reduce_rows(rows, 2, f)
        assert pivots == [0, 1]
        assert solve_square(self.MATRIX, self.RHS, f) == [Fraction(200), Fraction(2, 5)]

    def test_float_rank_deficient(self):
        f = FloatField(1e-12)
        rows = [[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1e-3, 1.0]]
        _, pivots = reduce_rows(rows, 2, f)
        assert sorted(pivots) == [0, 1]
        assert solve_square([[1.0, 2.0], [2.0, 4.0]], [3.0, 6.0], f) is None
