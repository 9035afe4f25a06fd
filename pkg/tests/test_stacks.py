import numpy as np
import pytest

from chromadel.core import validate_chromatic_set
from chromadel.errors import NoStack
from chromadel.oracles import (brute_force_alpha_value, brute_force_meb,
                               brute_force_min_stack)
from chromadel.stacks import (Stack, extend_stack, inverse_correspondence,
                              lift_correspondence, min_enclosing_ball,
                              min_stack, verify_kkt)

from tests.conftest import random_cloud


class TestMinEnclosingBall:
    def test_two_points(self):
        c, r = min_enclosing_ball([[0, 0], [2, 0]])
        assert np.allclose(c, [1, 0]) and r == pytest.approx(1.0)

    def test_equilateral_triangle(self):
        pts = [[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]]
        _, r = min_enclosing_ball(pts)
        assert r == pytest.approx(1 / np.sqrt(3))

    def test_interior_point_ignored(self):
        c, r = min_enclosing_ball([[0, 0], [2, 0], [1, 0.1]])
        assert r == pytest.approx(1.0)

    def test_against_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(60):
            pts = rng.random((rng.integers(1, 9), 2))
            _, r = min_enclosing_ball(pts)
            _, r_oracle = brute_force_meb(pts)
            assert r == pytest.approx(r_oracle, abs=1e-9)


class TestMinStack:
    def test_symmetric_pair_centre_at_midpoint(self):
        cloud = validate_chromatic_set([[0.0, 0.0], [2.0, 0.0]], [0, 1])
        stack, cert = min_stack(cloud, (0, 1), [])
        assert np.allclose(stack.centre, [1, 0], atol=1e-6)
        assert stack.rad == pytest.approx(1.0, abs=1e-6)
        assert verify_kkt(cloud.points, cloud.colours, (0, 1), [],
                          stack, cert)

    def test_pinched_line_has_no_stack(self):
        # excluded same-colour point sits between the two vertices
        cloud = validate_chromatic_set([[0.0], [1.0], [0.5]], [0, 0, 0])
        with pytest.raises(NoStack):
            min_stack(cloud, (0, 1), [2])

    def test_vertex_stack_is_degenerate(self):
        cloud = validate_chromatic_set([[0.3, 0.4], [1.5, 0.2]], [0, 1])
        stack, _ = min_stack(cloud, (0,), range(2))
        assert stack.rad == pytest.approx(0.0, abs=1e-9)

    def test_monochromatic_equals_enclosing_ball(self):
        cloud = random_cloud(7, 2, 0, seed=9)
        stack, _ = min_stack(cloud, (0, 2, 4), [])
        _, r = min_enclosing_ball(cloud.points[[0, 2, 4]])
        assert stack.rad == pytest.approx(r, abs=1e-9)

    def test_oracle_agreement_sample(self):
        rng = np.random.default_rng(4)
        for seed in range(40):
            cloud = random_cloud(6, 2, 1, seed=200 + seed)
            k = int(rng.integers(1, 4))
            sig = tuple(sorted(rng.choice(6, size=k, replace=False).tolist()))
            exc = [int(x) for x in rng.choice(6, size=3, replace=False)]
            try:
                stack, cert = min_stack(cloud, sig, exc)
            except NoStack:
                with pytest.raises(NoStack):
                    brute_force_min_stack(cloud, sig, exc)
                continue
            _, _, rad = brute_force_min_stack(cloud, sig, exc)
            assert stack.rad == pytest.approx(rad, abs=1e-6)
            assert verify_kkt(cloud.points, cloud.colours, sig, exc,
                              stack, cert)

    def test_alpha_value_matches_oracle(self):
        cloud = random_cloud(6, 2, 1, seed=11)
        from chromadel.delaunay import chromatic_delaunay
        tri = chromatic_delaunay(cloud)
        for sig in tri.complex.simplices(1)[:6]:
            stack, _ = min_stack(cloud, sig, range(6))
            assert stack.rad == pytest.approx(
                brute_force_alpha_value(cloud, sig), abs=1e-6)


class TestExtension:
    def test_extension_keeps_radius_and_existing_spheres(self):
        cloud = random_cloud(8, 2, 2, seed=13)
        sig = (0, 1)
        stack, _ = min_stack(cloud, sig, range(8))
        star = extend_stack(stack, cloud, range(8))
        assert set(star.radii) == set(range(cloud.s + 1))
        assert star.rad == pytest.approx(stack.rad)
        for m, r in stack.radii.items():
            assert star.radii[m] == pytest.approx(r)

    def test_extension_spheres_stay_empty(self):
        cloud = random_cloud(8, 2, 2, seed=14)
        stack, _ = min_stack(cloud, (2, 3), range(8))
        star = extend_stack(stack, cloud, range(8))
        slack = 1e-9 * cloud.scale
        for i in range(8):
            if i in (2, 3):
                continue
            r = star.radii[cloud.colours[i]]
            assert star.dist(cloud.points[i]) >= r - slack


class TestCorrespondence:
    def test_roundtrip(self):
        stack = Stack(np.array([0.3, -0.2]), {0: 0.9, 1: 0.7, 2: 0.5})
        centre, radius = lift_correspondence(stack, d=2)
        back = inverse_correspondence(centre, radius, d=2, s=2)
        assert np.allclose(back.centre, stack.centre)
        for m in stack.radii:
            assert back.radii[m] == pytest.approx(stack.radii[m])

    def test_lifted_sphere_hits_lifted_points(self):
        # points on their stack spheres land on the lifted sphere
        cloud = random_cloud(6, 2, 1, seed=15)
        stack, cert = min_stack(cloud, (0, 1, 2), [])
        star = extend_stack(stack, cloud, [])
        centre, radius = lift_correspondence(star, d=2)
        from chromadel.core import chromatic_lift
        lifted = chromatic_lift(cloud)
        for v in cert.on:
            dist = np.linalg.norm(lifted[v] - centre)
            m = cloud.colours[v]
            if star.radii[m] == pytest.approx(stack.radii.get(m, -1)):
                assert dist == pytest.approx(radius, abs=1e-6)


def test_verify_kkt_rejects_wrong_centre():
    cloud = validate_chromatic_set([[0.0, 0.0], [2.0, 0.0]], [0, 1])
    stack, cert = min_stack(cloud, (0, 1), [])
    bad = Stack(stack.centre + np.array([0.5, 0.0]), dict(stack.radii))
    assert not verify_kkt(cloud.points, cloud.colours, (0, 1), [], bad, cert)
