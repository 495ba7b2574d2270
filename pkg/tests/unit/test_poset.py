"""Tests for intersection posets"""

from hypothesis import given, settings

from src.arrangement import Arrangement, affine_image, combinatorial_data
from src.poset import (
    IntersectionPoset,
    PosetWitness,
    distinguishing_pair,
    is_distinguishing_pair,
    line_profile,
    poset_isomorphic,
    verify_poset_witness,
)
from tests.strategies import affine_maps, arrangements


class TestIntersectionPoset:
    def test_graph_shape(self, pappus):
        """Test the poset graph of Pappus"""
        poset = IntersectionPoset.from_arrangement(pappus)
        assert poset.line_count == 8
        assert poset.point_count == 13
        assert poset.graph.number_of_edges() == 6 * 3 + 7 * 2

    def test_line_profile(self, pappus):
        """Test line profiles in Pappus"""
        data = combinatorial_data(pappus)
        assert line_profile(data, 0) == ((3, 3, 3, 2), 0)
        assert line_profile(data, 1)[1] == 1


class TestPosetIsomorphism:
    def test_pappus_pair_not_isomorphic(self, pappus, nonpappus):
        """Test pappus pair not isomorphic"""
        result = poset_isomorphic(pappus, nonpappus)
        assert not result.isomorphic
        assert result.witness is None

    def test_ziegler_pair_isomorphic(self, ziegler, ziegler2):
        """Test the Ziegler pair has isomorphic posets"""
        result = poset_isomorphic(ziegler, ziegler2)
        assert result.isomorphic
        assert result.witness is not None
        assert verify_poset_witness(ziegler, ziegler2, result.witness)

    def test_identity(self, pappus):
        """Test an arrangement is isomorphic to itself"""
        result = poset_isomorphic(pappus, pappus)
        assert result.isomorphic
        assert verify_poset_witness(pappus, pappus, result.witness)

    def test_different_weak_signatures(self, pappus, ziegler):
        """Test different weak signatures are never isomorphic"""
        assert not poset_isomorphic(pappus, ziegler).isomorphic

    def test_relabelling(self, pencil):
        """Test reordering lines keeps the poset"""
        reordered = Arrangement(reversed(pencil.lines))
        result = poset_isomorphic(pencil, reordered)
        assert result.isomorphic
        assert verify_poset_witness(pencil, reordered, result.witness)

    @settings(max_examples=25, deadline=None)
    @given(arrangement=arrangements(min_lines=2, max_lines=6), affine=affine_maps)
    def test_affine_images_are_isomorphic(self, arrangement, affine):
        """Test affine images are isomorphic"""
        matrix, offset = affine
        image = affine_image(arrangement, matrix, offset)
        result = poset_isomorphic(arrangement, image)
        assert result.isomorphic
        assert verify_poset_witness(arrangement, image, result.witness)


class TestWitnessVerification:
    def test_rejects_non_bijection(self, pencil):
        """Test a witness that is not a bijection is rejected"""
        witness = PosetWitness(line_map={0: 0, 1: 0, 2: 1}, point_map={0: 0})
        assert not verify_poset_witness(pencil, pencil, witness)

    def test_rejects_incidence_breaking_map(self):
        """Test rejects incidence breaking map"""
        first = Arrangement.from_coefficients([(1, 0, 0), (0, 1, 0), (1, 0, -1)])
        second = Arrangement.from_coefficients([(1, 0, 0), (1, 0, -1), (0, 1, 0)])
        # Lines 0 and 1 of the second arrangement are parallel
        witness = PosetWitness(line_map={0: 0, 1: 1, 2: 2}, point_map={})
        assert not verify_poset_witness(first, second, witness)


class TestDistinguishingPair:
    def test_pappus_lines_meet_in_double_point(self, pappus):
        """Test pappus lines meet in double point"""
        lines, multiplicity = distinguishing_pair(pappus)
        assert lines == [0, 7]
        assert multiplicity == 2

    def test_nonpappus_lines_meet_in_triple_point(self, nonpappus):
        """Test nonpappus lines meet in triple point"""
        lines, multiplicity = distinguishing_pair(nonpappus)
        assert lines == [2, 7]
        assert multiplicity == 3

    def test_no_such_lines(self, pencil):
        """Test the pencil has no distinguishing pair"""
        assert distinguishing_pair(pencil) == ([], None)

    def test_computed_pairs_are_witnesses(self, pappus, nonpappus):
        """Test computed pairs are witnesses"""
        assert is_distinguishing_pair(pappus, 0, 7)
        assert is_distinguishing_pair(nonpappus, 2, 7)

    def test_figure_labelled_pairs_in_equation_order(self, pappus, nonpappus):
        """Test L6 of pappus and L4 of nonpappus carry two double points"""
        assert not is_distinguishing_pair(pappus, 0, 5)
        assert not is_distinguishing_pair(nonpappus, 2, 3)
        assert line_profile(combinatorial_data(pappus), 5) == ((3, 3, 2, 2), 1)
        assert line_profile(combinatorial_data(nonpappus), 3) == ((3, 3, 2, 2), 1)

    def test_parallel_lines_never_form_a_pair(self, pappus):
        """Test parallel lines never form a pair"""
        assert not is_distinguishing_pair(pappus, 5, 6)
