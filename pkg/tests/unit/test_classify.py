"""Tests for classification, subspace decisions, d_f and bounds"""

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.arrangement import Arrangement, Line
from src.classify import (
    BOUND_USED,
    NO_NEW_ELEMENTS,
    SUBSPACE_DECISION,
    ClassTag,
    FieldClass,
    bounds_check,
    classify,
    compute_df,
    infinite_type_subspaces,
    invariant_lines,
    lattice_points,
    minimal_central,
    minimal_parallel,
    pointwise_fixed_lines,
    subspace_all_infinite,
)
from src.derivations import (
    DerivationSpace,
    VectorField,
    coefficient_indices,
    derivation_space,
    field_to_vector,
    is_invariant_line,
    is_logarithmic,
)
from src.errors import DimensionTooLarge, InfiniteType, NoSingularPoint
from src.polynomial import BivariatePoly, poly_product
from tests.strategies import (
    arrangements,
    line_triples,
    points,
    polynomials,
    small_rationals,
)

x = BivariatePoly.x()
y = BivariatePoly.y()
zero = BivariatePoly()

EULER = VectorField(x, y)
QUADRATIC = VectorField(x**2, y**2)


def span(*fields: VectorField) -> DerivationSpace:
    d = max(chi.degree for chi in fields)
    return DerivationSpace(
        d=d,
        columns=tuple(coefficient_indices(d)),
        vectors=tuple(tuple(field_to_vector(chi, d)) for chi in fields),
        rank=0,
    )


class TestClassify:
    """Test central / parallel / finite classification"""

    def test_euler_field_is_central(self):
        """Test euler field is central"""
        result = classify(EULER)
        assert result.tag == ClassTag.CENTRAL
        assert result.center == (0, 0)
        assert result.is_infinite_type

    def test_shifted_center(self):
        """Test a field vanishing at a rational point is central there"""
        result = classify(VectorField(x - 1, y - Fraction(1, 2)))
        assert result == FieldClass(ClassTag.CENTRAL, center=(1, Fraction(1, 2)))

    def test_parallel(self):
        """Test a constant-direction field is parallel"""
        result = classify(VectorField(zero, x + 1))
        assert result.tag == ClassTag.PARALLEL
        assert result.direction == (0, 1)

    def test_parallel_with_sign_canonical_direction(self):
        """Test parallel with sign canonical direction"""
        result = classify(VectorField(x * (y - x), zero))
        assert result == FieldClass(ClassTag.PARALLEL, direction=(1, 0))
        result = classify(VectorField(-2 * (x**2 + 1), 4 * (x**2 + 1)))
        assert result.direction == (1, -2)

    def test_finite(self):
        """Test a quadratic field is finite"""
        result = classify(QUADRATIC)
        assert result.tag == ClassTag.FINITE
        assert not result.is_infinite_type

    def test_null(self):
        """Test the zero field is null"""
        assert classify(VectorField(zero, zero)).tag == ClassTag.NULL

    def test_constant_fields_are_parallel(self):
        """Test constant fields are parallel"""
        assert classify(VectorField(BivariatePoly.constant(3), zero)).direction == (1, 0)

    def test_describe(self):
        """Test class descriptions"""
        assert classify(EULER).describe() == "central (0, 0)"
        assert classify(VectorField(zero, x + 1)).describe() == "parallel (0, 1)"
        assert classify(QUADRATIC).describe() == "finite"

    @settings(max_examples=60, deadline=None)
    @given(P=polynomials(max_degree=2), Q=polynomials(max_degree=2), scale=small_rationals)
    def test_scale_invariance(self, P, Q, scale):
        """Test classification is unchanged by nonzero scaling"""
        chi = VectorField(P, Q)
        if scale == 0 or chi.is_zero():
            return
        assert classify(chi * scale) == classify(chi)

    @settings(max_examples=60, deadline=None)
    @given(P=polynomials(max_degree=2), Q=polynomials(max_degree=2), offset=points)
    def test_translation_moves_the_center(self, P, Q, offset):
        """Test translation moves the center"""
        chi = VectorField(P, Q)
        before = classify(chi)
        after = classify(chi.pushforward(((1, 0), (0, 1)), offset))
        assert after.tag == before.tag
        if before.tag == ClassTag.CENTRAL:
            assert after.center == (
                before.center[0] + offset[0],
                before.center[1] + offset[1],
            )
        if before.tag == ClassTag.PARALLEL:
            assert after.direction == before.direction

    @settings(max_examples=40, deadline=None)
    @given(center=points, g=polynomials(max_degree=2))
    def test_radial_multiples_are_central(self, center, g):
        """Test radial multiples are central"""
        if g.is_zero():
            return
        cx, cy = center
        chi = VectorField(g * (x - cx), g * (y - cy))
        assert classify(chi) == FieldClass(ClassTag.CENTRAL, center=(cx, cy))

    @settings(max_examples=40, deadline=None)
    @given(
        factors=st.lists(line_triples, min_size=1, max_size=3),
        chi=st.sampled_from(
            [
                EULER,
                VectorField(x - 1, y + 2),
                VectorField(BivariatePoly.constant(1), BivariatePoly.constant(2)),
                QUADRATIC,
            ]
        ),
    )
    def test_common_factors_do_not_change_the_class(self, factors, chi):
        """Test common factors do not change the class"""
        h = poly_product(Line.normalized(*t).form() for t in factors)
        assert classify(chi * h) == classify(chi)


class TestClassSoundness:
    """Lines predicted invariant by the class really are"""

    @settings(max_examples=30, deadline=None)
    @given(center=points, g=polynomials(max_degree=2), slopes=st.lists(points, max_size=10))
    def test_lines_through_the_center(self, center, g, slopes):
        """Test lines through the center"""
        if g.is_zero():
            return
        cx, cy = center
        chi = VectorField(g * (x - cx), g * (y - cy))
        for a, b in slopes:
            if a == 0 and b == 0:
                continue
            line = Line.normalized(-b, a, b * cx - a * cy)
            assert is_invariant_line(chi, line)

    @settings(max_examples=30, deadline=None)
    @given(
        direction=points.filter(lambda v: v != (0, 0)),
        g=polynomials(max_degree=2),
        offsets=st.lists(small_rationals, max_size=10),
    )
    def test_lines_along_the_direction(self, direction, g, offsets):
        """Test lines along the direction"""
        if g.is_zero():
            return
        vx, vy = direction
        chi = VectorField(g * vx, g * vy)
        assert classify(chi).tag == ClassTag.PARALLEL
        for offset in offsets:
            assert is_invariant_line(chi, Line.normalized(vy, -vx, offset))

    @settings(max_examples=60, deadline=None)
    @given(triple=line_triples)
    def test_other_lines_are_not_invariant(self, triple):
        """Test other lines are not invariant"""
        found = invariant_lines(QUADRATIC)
        line = Line.normalized(*triple)
        assert is_invariant_line(QUADRATIC, line) == (line in found.rational_lines)

    def test_constant_field_has_no_invariant_line_list(self):
        """Test constant field has no invariant line list"""
        with pytest.raises(InfiniteType):
            invariant_lines(VectorField(BivariatePoly.constant(1), BivariatePoly.constant(1)))

    def test_pappus_witness_fixes_every_line(self, pappus):
        """Test pappus witness fixes every line"""
        witness = compute_df(pappus, 4).witness
        found = invariant_lines(witness)
        assert set(pappus.lines) <= set(found.rational_lines)


class TestSubspaceDecision:
    def test_lattice_points(self):
        """Test the grid enumerates points in lexicographic order"""
        assert list(lattice_points(2)) == [
            (0, 0),
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 0),
            (1, 1),
            (1, 2),
            (2, 0),
            (2, 1),
            (3, 0),
        ]
        assert len(list(lattice_points(6))) == comb(9, 3)

    def test_central_span(self):
        """Test the span of the Euler field is all infinite"""
        decision = subspace_all_infinite(span(EULER))
        assert decision.all_infinite
        assert decision.witness is None

    def test_finite_span(self):
        """Test a span with a finite element is decided with a witness"""
        decision = subspace_all_infinite(span(QUADRATIC))
        assert not decision.all_infinite
        assert decision.witness_point == (1,)
        assert decision.witness == QUADRATIC

    def test_constant_fields_never_finite(self):
        """Test constant fields never finite"""
        one = BivariatePoly.constant(1)
        assert subspace_all_infinite(span(VectorField(one, zero), VectorField(zero, one))).all_infinite

    @pytest.mark.parametrize("method", ["grid", "lattice", "symbolic"])
    def test_methods_agree(self, method):
        """Test grid and lattice methods agree"""
        central = span(EULER, EULER * x, EULER * y)
        assert subspace_all_infinite(central, method=method, cross_check=True).all_infinite
        mixed = span(EULER, QUADRATIC)
        decision = subspace_all_infinite(mixed, method=method, cross_check=True)
        assert not decision.all_infinite
        assert classify(decision.witness).tag == ClassTag.FINITE

    def test_pencil_degree_two_witness(self, pencil):
        """Test pencil degree two witness"""
        decision = subspace_all_infinite(derivation_space(pencil, 2), cross_check=True)
        assert decision.method == "grid"
        assert decision.witness_point == (0, 0, 0, 1)
        assert decision.witness == QUADRATIC

    def test_grid_cap(self, pencil):
        """Test spaces above the grid cap are refused"""
        with pytest.raises(DimensionTooLarge) as exc_info:
            subspace_all_infinite(derivation_space(pencil, 2), grid_cap=3)
        assert (exc_info.value.dim, exc_info.value.cap) == (4, 3)

    def test_lattice_has_no_cap(self, pencil):
        """Test lattice has no cap"""
        decision = subspace_all_infinite(derivation_space(pencil, 2), grid_cap=1, method="lattice")
        assert not decision.all_infinite

    def test_empty_space(self, pappus):
        """Test the zero space is rejected"""
        with pytest.raises(ValueError):
            subspace_all_infinite(derivation_space(pappus, 2))

    def test_unknown_method(self):
        """Test an unknown decision method is rejected"""
        with pytest.raises(ValueError):
            subspace_all_infinite(span(EULER), method="random")


class TestComputeDf:
    def test_pencil(self, pencil):
        """Test d_f of the pencil"""
        report = compute_df(pencil, 3)
        assert report.d_f == 2
        assert report.witness == QUADRATIC
        assert [entry.decision for entry in report.trail] == [SUBSPACE_DECISION] * 2
        assert [entry.finite_found for entry in report.trail] == [False, True]
        assert report.describe() == "d_f = 2"

    def test_not_found(self, pencil):
        """Test d_f is reported missing below the search limit"""
        report = compute_df(pencil, 1)
        assert not report.found
        assert report.not_found_below == 1
        assert report.describe().startswith("d_f > 1")

    def test_pappus_uses_the_bound(self, pappus):
        """Test pappus uses the bound"""
        report = compute_df(pappus, 4)
        assert report.d_f == 4
        assert report.trail[-1].decision == BOUND_USED
        assert all(entry.decision == NO_NEW_ELEMENTS for entry in report.trail[:-1])
        assert is_logarithmic(report.witness, pappus)
        assert classify(report.witness).tag == ClassTag.FINITE

    def test_basis_screen_above_cap(self, pencil):
        """Test basis screen above cap"""
        report = compute_df(pencil, 2, grid_cap=3)
        assert report.d_f == 2
        assert report.trail[-1].method == "basis-screen"
        assert report.witness == QUADRATIC

    def test_no_fallback_above_cap(self, pencil):
        """Test no fallback above cap"""
        with pytest.raises(DimensionTooLarge):
            compute_df(pencil, 2, grid_cap=3, fallback_above_cap=False)

    def test_shared_cache(self, pencil):
        """Test compute_df reuses cached derivation spaces"""
        spaces = {}
        compute_df(pencil, 2, spaces=spaces)
        assert sorted(spaces) == [0, 1, 2]

    def test_invalid_dmax(self, pencil):
        """Test a nonpositive search limit is rejected"""
        with pytest.raises(ValueError):
            compute_df(pencil, 0)


class TestConstructors:
    def test_central_for_pencil(self, pencil):
        """Test the minimal central field of the pencil is Euler"""
        assert minimal_central(pencil) == EULER

    def test_central_for_axes(self):
        """Test the minimal central field of the coordinate axes"""
        axes = Arrangement.from_coefficients([(1, 0, 0), (0, 1, 0)])
        chi = minimal_central(axes)
        assert chi == EULER
        assert chi.degree == 1

    def test_central_for_pappus(self, pappus):
        """Test the minimal central field of Pappus has degree six"""
        chi = minimal_central(pappus)
        assert chi.degree == 6
        assert is_logarithmic(chi, pappus)
        assert classify(chi) == FieldClass(ClassTag.CENTRAL, center=(Fraction(-1, 2), 0))

    def test_central_needs_a_singular_point(self):
        """Test central needs a singular point"""
        with pytest.raises(NoSingularPoint):
            minimal_central(Arrangement.from_coefficients([(1, 0, 0), (1, 0, -1)]))

    def test_parallel_family(self):
        """Test the minimal parallel field of a parallel family is constant"""
        chi = minimal_parallel(Arrangement.from_coefficients([(1, 0, 0), (1, 0, -1)]))
        assert chi == VectorField(zero, BivariatePoly.constant(1))
        assert chi.degree == 0

    def test_parallel_tie_break(self):
        """Test ties between directions go to the first class"""
        axes = Arrangement.from_coefficients([(1, 0, 0), (0, 1, 0)])
        assert minimal_parallel(axes) == VectorField(zero, y)

    def test_builtins(self, builtins):
        """Test minimal fields are logarithmic on every builtin"""
        for arrangement in builtins.values():
            central = minimal_central(arrangement)
            parallel = minimal_parallel(arrangement)
            assert central.degree == 8 - 3 + 1
            assert parallel.degree == 8 - 2
            assert is_logarithmic(central, arrangement)
            assert is_logarithmic(parallel, arrangement)
            assert classify(central).tag == ClassTag.CENTRAL
            assert classify(parallel).tag == ClassTag.PARALLEL


class TestInfiniteTypeSubspaces:
    def test_finite_basis_spanning_a_central_field(self, pencil):
        """Test two finite-type fields whose difference is the Euler field"""
        first = VectorField(x**2, y**2)
        second = VectorField(x**2 - x, y**2 - y)
        space = span(first, second)
        assert [classify(chi).tag for chi in space.basis] == [ClassTag.FINITE] * 2
        assert is_logarithmic(second, pencil)
        found = infinite_type_subspaces(pencil, space)
        assert len(found) == 1
        assert found[0].tag == ClassTag.CENTRAL
        assert found[0].center == (0, 0)
        assert found[0].dim == 1
        assert found[0].describe() == "central at (0, 0), dim 1"

    def test_pappus_degree_four_is_all_finite(self, pappus):
        """Test pappus degree four is all finite"""
        assert infinite_type_subspaces(pappus, derivation_space(pappus, 4)) == []

    def test_star_is_central_at_its_center(self):
        """Test star is central at its center"""
        star = Arrangement.from_coefficients(
            [(1, 0, 0), (0, 1, 0), (1, -1, 0), (1, 1, 0), (1, 2, 0)]
        )
        space = derivation_space(star, 2)
        found = infinite_type_subspaces(star, space)
        assert [(s.tag, s.center, s.dim) for s in found] == [
            (ClassTag.CENTRAL, (0, 0), space.dim)
        ]

    def test_parallel_family(self):
        """Test basis elements of a parallel family are tagged parallel"""
        family = Arrangement.from_coefficients([(0, 1, k) for k in range(4)])
        space = derivation_space(family, 2)
        found = infinite_type_subspaces(family, space)
        assert [(s.tag, s.direction, s.dim) for s in found] == [
            (ClassTag.PARALLEL, (1, 0), space.dim)
        ]

    def test_degree_must_stay_below_line_count(self, pencil):
        """Test degree must stay below line count"""
        with pytest.raises(ValueError):
            infinite_type_subspaces(pencil, derivation_space(pencil, 3))


class TestBounds:
    def test_pencil(self, pencil):
        """Test bounds hold on the pencil"""
        report = bounds_check(pencil)
        assert (report.nu_inf, report.nu_f, report.nu) == (2, 1, 1)
        assert report.all_hold
        claims = {s.claim for s in report.statements}
        assert "infinite-below-nu-inf" in claims
        assert "infinite-nonempty-at-nu-f" in claims

    def test_concurrent_lines(self):
        """Test bounds hold on a star of concurrent lines"""
        star = Arrangement.from_coefficients(
            [(1, 0, 0), (0, 1, 0), (1, -1, 0), (1, 1, 0), (1, 2, 0)]
        )
        report = bounds_check(star)
        assert report.all_hold
        assert any(s.claim == "central-below-m-minus-1" for s in report.statements)

    def test_parallel_family(self):
        """Test bounds hold on a parallel family"""
        family = Arrangement.from_coefficients([(0, 1, k) for k in range(4)])
        report = bounds_check(family)
        assert report.all_hold
        assert any(s.claim == "parallel-below-p" for s in report.statements)

    def test_pappus_with_df(self, pappus):
        """Test the d_f bound on Pappus"""
        spaces = {}
        df = compute_df(pappus, 4, spaces=spaces)
        report = bounds_check(pappus, spaces=spaces, df_report=df)
        assert report.all_hold
        claims = [s.claim for s in report.statements]
        assert claims.count("empty-below-nu") == 1
        assert "df-at-least-nu-inf" in claims

    @settings(max_examples=50, deadline=None)
    @given(arrangement=arrangements(max_lines=6))
    def test_random_arrangements(self, arrangement):
        """Test bounds hold on random arrangements"""
        report = bounds_check(arrangement)
        failed = [(s.claim, s.d, s.detail) for s in report.statements if not s.holds]
        assert not failed


class TestInvariantLines:
    def test_quadratic_field(self):
        """Test invariant lines of a quadratic field"""
        result = invariant_lines(QUADRATIC)
        assert result.rational_lines == (
            Line.normalized(0, 1, 0),
            Line.normalized(1, -1, 0),
            Line.normalized(1, 0, 0),
        )
        assert result.complete

    def test_irrational_lines_make_the_list_incomplete(self):
        """Test irrational lines make the list incomplete"""
        chi = VectorField(x**2 - 2, y)
        result = invariant_lines(chi)
        assert result.rational_lines == (Line.normalized(0, 1, 0),)
        assert not result.complete

    def test_factor_without_real_roots_keeps_the_list_complete(self):
        """Test x^2 + 1 in the vertical eliminant hides no real line"""
        result = invariant_lines(VectorField(x**2 + 1, y))
        assert result.rational_lines == (Line.normalized(0, 1, 0),)
        assert result.complete

    def test_infinite_type_rejected(self):
        """Test infinite-type fields have no finite invariant line list"""
        with pytest.raises(InfiniteType):
            invariant_lines(EULER)

    def test_pencil_witness_fixes_the_pencil(self, pencil):
        """Test pencil witness fixes the pencil"""
        result = invariant_lines(compute_df(pencil, 2).witness)
        assert set(pencil.lines) <= set(result.rational_lines)

    def test_pointwise_fixed_lines(self, pencil):
        """Test lines fixed pointwise by a field"""
        chi = VectorField(x * (y - x), zero)
        assert pointwise_fixed_lines(chi, pencil) == [0, 2]
        assert pointwise_fixed_lines(QUADRATIC, pencil) == []
