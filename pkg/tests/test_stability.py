import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromadel.core import validate_chromatic_set
from chromadel.errors import LengthMismatch, SizeLimitExceeded
from chromadel.stability import (chromatic_distance, distortion,
                                 perturbation_experiment, sample_perturbation)

from tests.conftest import random_cloud


class TestDistortion:
    def test_translation_is_isometric(self):
        rng = np.random.default_rng(1)
        x = rng.random((6, 2))
        assert distortion(x, x + 3.7, range(6)) <= 1e-12

    def test_rotation_is_isometric(self):
        rng = np.random.default_rng(2)
        x = rng.random((6, 2))
        th = 0.9
        rot = np.array([[np.cos(th), -np.sin(th)],
                        [np.sin(th), np.cos(th)]])
        assert distortion(x, x @ rot.T, range(6)) <= 1e-12

    def test_doubling_a_unit_pair(self):
        assert distortion([[0.0], [1.0]], [[0.0], [2.0]], [0, 1]) == \
            pytest.approx(1.0)

    def test_rejects_non_bijection(self):
        with pytest.raises(LengthMismatch):
            distortion([[0.0], [1.0]], [[0.0], [1.0]], [0, 0])

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_bounded_by_twice_sup_displacement(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.random((5, 2))
        y = x + 0.1 * rng.standard_normal((5, 2))
        sup = float(np.linalg.norm(x - y, axis=1).max())
        assert distortion(x, y, range(5)) <= 2.0 * sup + 1e-12


class TestChromaticDistance:
    def test_single_point_displacement(self):
        a = validate_chromatic_set([[0.0, 0.0]], [0])
        b = validate_chromatic_set([[0.1, 0.0]], [0])
        assert chromatic_distance(a, b) == pytest.approx(0.1)

    def test_class_size_mismatch_is_infinite(self):
        a = validate_chromatic_set([[0.0, 0.0]], [0])
        b = validate_chromatic_set([[0.0, 0.0], [1.0, 0.0]], [0, 0])
        assert math.isinf(chromatic_distance(a, b))

    def test_identity(self):
        c = random_cloud(8, 2, 1, seed=600)
        assert chromatic_distance(c, c) == 0.0

    def test_symmetry(self):
        a = random_cloud(7, 2, 1, seed=601)
        b = validate_chromatic_set(
            a.points + 0.01 * np.random.default_rng(602).standard_normal(
                a.points.shape), a.colours)
        assert chromatic_distance(a, b) == \
            pytest.approx(chromatic_distance(b, a))

    def test_relabelling_within_a_class_is_free(self):
        pts = [[0.0, 0.0], [1.0, 0.0]]
        a = validate_chromatic_set(pts, [0, 0])
        b = validate_chromatic_set([[1.0, 0.0], [0.0, 0.0]], [0, 0])
        assert chromatic_distance(a, b) == pytest.approx(0.0)

    def test_class_size_cap(self):
        n = 70
        rng = np.random.default_rng(603)
        a = validate_chromatic_set(rng.random((n, 2)), [0] * n)
        b = validate_chromatic_set(rng.random((n, 2)), [0] * n)
        with pytest.raises(SizeLimitExceeded):
            chromatic_distance(a, b)


class TestPerturbationExperiment:
    def test_zero_eta_changes_nothing(self):
        cloud = random_cloud(7, 2, 1, seed=610)
        report = perturbation_experiment(cloud, eta=0.0, seed=1)
        assert report.complex_isomorphic
        assert report.distortion == 0.0
        assert report.sup_value_gap == 0.0
        assert report.bottleneck == 0.0

    def test_tiny_eta_keeps_the_complex(self):
        for seed in range(4):
            cloud = random_cloud(7, 2, 1, seed=620 + seed, spread=3.0)
            report = perturbation_experiment(cloud, eta=1e-6, seed=seed)
            assert report.complex_isomorphic
            assert report.sup_value_gap <= 1e-6
            assert report.sup_value_gap <= 0.5 * report.distortion + 1e-15
            assert report.bottleneck <= 1e-6

    def test_large_eta_reports_complex_change(self):
        cloud = random_cloud(8, 2, 1, seed=630)
        report = perturbation_experiment(cloud, eta=2.0, seed=3)
        if not report.complex_isomorphic:
            assert report.sup_value_gap is None
        assert report.distortion <= 2 * 2.0

    def test_report_fields(self):
        cloud = random_cloud(6, 2, 1, seed=640)
        report = perturbation_experiment(cloud, eta=1e-6, seed=9)
        data = report.to_json_dict()
        assert set(data) == {"eta", "seed", "complex_isomorphic",
                             "distortion", "sup_value_gap", "bottleneck"}

    def test_sampling_is_deterministic_and_bounded(self):
        cloud = random_cloud(10, 3, 0, seed=650)
        a = sample_perturbation(cloud.points, 0.01, 42)
        b = sample_perturbation(cloud.points, 0.01, 42)
        assert np.array_equal(a, b)
        assert np.linalg.norm(a - cloud.points, axis=1).max() <= 0.01

    def test_different_seeds_differ(self):
        cloud = random_cloud(6, 2, 0, seed=660)
        a = sample_perturbation(cloud.points, 0.01, 1)
        b = sample_perturbation(cloud.points, 0.01, 2)
        assert not np.array_equal(a, b)
