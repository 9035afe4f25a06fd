import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromadel.core import (SimplicialComplex, canonical_colouring,
                            check_general_position, chromatic_lift,
                            circumsphere_through, colour_classes,
                            elementary_refinement_chain, faces, is_refinement,
                            simplex, validate_chromatic_set)
from chromadel.errors import (DegenerateInput, DuplicatePoint, LengthMismatch,
                              NonSurjectiveColouring, NotRefinement,
                              NotSimplicialInput)

from tests.conftest import TRAPEZIUM, TRAPEZIUM_COLOURS, random_cloud


class TestValidation:
    def test_accepts_plain_lists(self):
        cloud = validate_chromatic_set([[0, 0], [1, 0], [0, 1]], [0, 1, 0])
        assert cloud.n == 3 and cloud.d == 2 and cloud.s == 1

    def test_rejects_duplicate_points(self):
        with pytest.raises(DuplicatePoint):
            validate_chromatic_set([[0, 0], [0, 0]], [0, 1])

    def test_rejects_colour_gap(self):
        with pytest.raises(NonSurjectiveColouring):
            validate_chromatic_set([[0, 0], [1, 0]], [0, 2])

    def test_rejects_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            validate_chromatic_set([[0, 0], [1, 0]], [0])

    def test_classes_partition_indices(self):
        cloud = random_cloud(9, 2, 2, seed=1)
        idx = sorted(i for c in cloud.classes().values() for i in c)
        assert idx == list(range(9))


class TestSimplicialComplex:
    def test_closure_check(self):
        with pytest.raises(NotSimplicialInput):
            SimplicialComplex([(0, 1, 2)])

    def test_from_maximal_closes(self):
        k = SimplicialComplex.from_maximal([(0, 1, 2)])
        assert len(k) == 7 and (0, 2) in k

    def test_faces_of_triangle(self):
        assert faces((0, 1, 2)) == [(1, 2), (0, 2), (0, 1)]

    def test_restrict_is_subcomplex(self):
        k = SimplicialComplex.from_maximal([(0, 1, 2), (2, 3)])
        sub = k.restrict(lambda s: 3 not in s)
        assert (2, 3) not in sub and (0, 1, 2) in sub


class TestColourings:
    def test_refinement_basics(self):
        assert is_refinement([0, 1, 2], [0, 0, 1])
        assert not is_refinement([0, 0, 1], [0, 1, 1])

    def test_canonical_relabels_by_first_appearance(self):
        assert canonical_colouring([2, 2, 0, 1]) == (0, 0, 1, 2)

    def test_chain_endpoints_and_steps(self):
        mu = [0, 0, 0, 0, 1]
        nu = [0, 1, 2, 0, 3]
        chain = elementary_refinement_chain(mu, nu)
        assert chain[0] == canonical_colouring(mu)
        assert chain[-1] == canonical_colouring(nu)
        for coarse, fine in zip(chain, chain[1:]):
            assert is_refinement(fine, coarse)
            assert max(fine) == max(coarse) + 1

    def test_chain_rejects_non_refinement(self):
        with pytest.raises(NotRefinement):
            elementary_refinement_chain([0, 1], [0, 0])

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=8))
    def test_canonical_is_idempotent(self, mu):
        c = canonical_colouring(mu)
        assert canonical_colouring(c) == c
        assert sorted(set(c)) == list(range(max(c) + 1))

    @given(st.lists(st.integers(0, 2), min_size=2, max_size=7))
    @settings(max_examples=50)
    def test_chain_from_monochromatic(self, nu):
        mu = [0] * len(nu)
        chain = elementary_refinement_chain(mu, nu)
        assert len(chain) == len(set(nu))
        for col in chain:
            assert is_refinement(canonical_colouring(nu), col)


class TestLift:
    def test_colour_zero_stays_in_base(self):
        cloud = validate_chromatic_set([[1, 2], [3, 4]], [0, 1])
        lifted = chromatic_lift(cloud)
        assert lifted.shape == (2, 3)
        assert lifted[0, 2] == 0.0 and lifted[1, 2] == 1.0

    def test_monochromatic_lift_is_identity(self):
        cloud = random_cloud(6, 3, 0, seed=2)
        assert np.array_equal(chromatic_lift(cloud), cloud.points)

    def test_lift_preserves_base_distances(self):
        cloud = random_cloud(8, 2, 2, seed=3)
        lifted = chromatic_lift(cloud)
        same = [(i, j) for i, j in itertools.combinations(range(8), 2)
                if cloud.colours[i] == cloud.colours[j]]
        for i, j in same:
            db = np.linalg.norm(cloud.points[i] - cloud.points[j])
            dl = np.linalg.norm(lifted[i] - lifted[j])
            assert dl == pytest.approx(db)


class TestCircumsphere:
    def test_two_points(self):
        c, r = circumsphere_through([[0.0, 0.0], [2.0, 0.0]])
        assert np.allclose(c, [1, 0]) and r == pytest.approx(1.0)

    def test_right_triangle(self):
        c, r = circumsphere_through([[0, 0], [2, 0], [0, 2]])
        assert np.allclose(c, [1, 1]) and r == pytest.approx(np.sqrt(2))

    def test_collinear_rejected(self):
        with pytest.raises(DegenerateInput):
            circumsphere_through([[0, 0], [1, 0], [2, 0]])


class TestGeneralPosition:
    def test_trapezium_fails_with_parallel_witness(self):
        cloud = validate_chromatic_set(TRAPEZIUM, TRAPEZIUM_COLOURS)
        report = check_general_position(cloud)
        assert not report.ok
        assert not report.gp_rank
        assert report.witness["kind"] == "rank"

    def test_cocircular_square_fails(self):
        cloud = validate_chromatic_set(
            [[1, 0], [0, 1], [-1, 0], [0, -1]], [0, 0, 0, 0])
        report = check_general_position(cloud, exact=True)
        assert not report.ok and not report.gp_sphere

    def test_random_clouds_pass(self):
        for seed in range(5):
            cloud = random_cloud(7, 2, 1, seed=seed)
            assert check_general_position(cloud).ok

    def test_collinear_same_colour_fails(self):
        cloud = validate_chromatic_set(
            [[0, 0], [1, 0], [2, 0], [0.3, 1.7]], [0, 0, 0, 0])
        assert not check_general_position(cloud).ok


def test_colour_classes_roundtrip():
    classes = colour_classes((0, 1, 0, 2))
    assert classes == {0: [0, 2], 1: [1], 2: [3]}


def test_simplex_sorts_and_dedups():
    assert simplex([3, 1, 1, 2]) == (1, 2, 3)
