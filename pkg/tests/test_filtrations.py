import numpy as np
import pytest

from chromadel.core import validate_chromatic_set
from chromadel.delaunay import delaunay_triangulation
from chromadel.errors import InvalidGamma
from chromadel.filtrations import (cech_filtration, chromatic_alpha_filtration,
                                   del_cech_filtration, del_rips_filtration,
                                   gamma_subfiltration, rips_filtration,
                                   selective_alpha_filtration, verify_nesting)
from chromadel.oracles import brute_force_alpha_value, brute_force_meb

from tests.conftest import TETRA_COLOURS, TETRA_POINTS, random_cloud


class TestCechAndRips:
    def test_cech_edge_is_half_distance(self):
        cloud = validate_chromatic_set([[0, 0], [3, 4]], [0, 0])
        fc = cech_filtration(cloud)
        assert fc.value((0, 1)) == pytest.approx(2.5)

    def test_rips_three_points_on_a_line(self):
        cloud = validate_chromatic_set([[0.0], [10.0], [20.0]], [0, 0, 0])
        fc = rips_filtration(cloud)
        assert fc.value((0, 1)) == pytest.approx(5.0)
        assert fc.value((0, 2)) == pytest.approx(10.0)
        assert fc.value((0, 1, 2)) == pytest.approx(10.0)

    def test_cech_values_match_ball_oracle(self):
        cloud = random_cloud(7, 2, 0, seed=21)
        fc = cech_filtration(cloud, dim_cap=2)
        for sig in fc.complex.simplices(2)[:10]:
            _, r = brute_force_meb(cloud.points[list(sig)])
            assert fc.value(sig) == pytest.approx(r, abs=1e-9)

    def test_monotone(self):
        cloud = random_cloud(7, 2, 1, seed=22)
        for fc in (cech_filtration(cloud, dim_cap=3),
                   rips_filtration(cloud, dim_cap=3),
                   del_cech_filtration(cloud),
                   del_rips_filtration(cloud),
                   chromatic_alpha_filtration(cloud)):
            fc.check_monotone()


class TestNesting:
    def test_equilateral_attains_extremal_ratio(self):
        pts = [[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]]
        cloud = validate_chromatic_set(pts, [0, 0, 0])
        rips = rips_filtration(cloud)
        cech = cech_filtration(cloud)
        ok, worst = verify_nesting(rips, cech, d=2)
        assert ok
        assert worst == pytest.approx(2 / np.sqrt(3), abs=1e-12)

    def test_sandwich_on_random_clouds(self):
        for seed in range(8):
            cloud = random_cloud(7, 2, 1, seed=40 + seed)
            rips = rips_filtration(cloud, dim_cap=3)
            cech = cech_filtration(cloud, dim_cap=3)
            ok, worst = verify_nesting(rips, cech)
            assert ok
            assert worst <= np.sqrt(2 * 2 / 3) + 1e-9

    def test_delaunay_restrictions_nest_too(self):
        cloud = random_cloud(8, 2, 1, seed=48)
        ok, _ = verify_nesting(del_rips_filtration(cloud),
                               del_cech_filtration(cloud))
        assert ok


class TestExtremalColourings:
    def test_monochromatic_alpha_uses_empty_circumspheres(self):
        for seed in range(5):
            cloud = random_cloud(6, 2, 0, seed=60 + seed)
            fc = chromatic_alpha_filtration(cloud)
            for sig in fc.complex:
                assert fc.value(sig) == pytest.approx(
                    brute_force_alpha_value(cloud, sig), rel=1e-6, abs=1e-6)

    def test_maximal_colouring_alpha_equals_cech(self):
        for seed in range(5):
            n = 5
            cloud = random_cloud(n, 2, n - 1, seed=70 + seed)
            assert sorted(set(cloud.colours)) == list(range(n))
            fc = chromatic_alpha_filtration(cloud)
            cech = cech_filtration(cloud)
            assert fc.complex == cech.complex
            for sig in fc.complex:
                assert fc.value(sig) == pytest.approx(
                    cech.value(sig), rel=1e-9, abs=1e-9)


class TestSelectiveAlpha:
    def test_empty_exclusion_is_cech(self):
        cloud = random_cloud(6, 2, 1, seed=80)
        sel = selective_alpha_filtration(cloud, [])
        cech = cech_filtration(cloud)
        assert sel.complex == cech.complex
        for sig in sel.complex:
            assert sel.value(sig) == pytest.approx(cech.value(sig), abs=1e-8)

    def test_full_exclusion_is_chromatic_alpha(self):
        cloud = random_cloud(6, 2, 1, seed=81)
        sel = selective_alpha_filtration(cloud, range(6))
        alpha = chromatic_alpha_filtration(cloud)
        assert sel.complex == alpha.complex
        for sig in sel.complex:
            assert sel.value(sig) == pytest.approx(alpha.value(sig), abs=1e-7)


class TestTetrahedronExample:
    """Four points, one recoloured: the chromatic complex is a full
    3-simplex even though the plain Delaunay complex keeps edge bd."""

    def test_full_simplex_with_fifteen_faces(self):
        cloud = validate_chromatic_set(TETRA_POINTS, TETRA_COLOURS)
        fc = chromatic_alpha_filtration(cloud)
        assert len(fc.complex) == 15
        assert (0, 1, 2, 3) in fc.complex

    def test_plain_delaunay_keeps_the_diagonal(self):
        tri = delaunay_triangulation(np.array(TETRA_POINTS))
        assert (1, 3) in tri.complex
        assert (0, 1, 2, 3) not in tri.complex


class TestGammaSubfiltration:
    def test_rejects_family_missing_subsets(self):
        cloud = random_cloud(6, 2, 1, seed=90)
        fc = chromatic_alpha_filtration(cloud)
        with pytest.raises(InvalidGamma):
            gamma_subfiltration(fc, cloud.colours, [(0, 1)])

    def test_zero_dimensional_family_is_disjoint_union(self):
        cloud = random_cloud(7, 2, 1, seed=91)
        fc = chromatic_alpha_filtration(cloud)
        sub = gamma_subfiltration(fc, cloud.colours, [(0,), (1,)])
        for sig in sub.complex:
            assert len({cloud.colours[v] for v in sig}) == 1

    def test_full_family_is_identity(self):
        cloud = random_cloud(6, 2, 1, seed=92)
        fc = chromatic_alpha_filtration(cloud)
        sub = gamma_subfiltration(fc, cloud.colours, [(0,), (1,), (0, 1)])
        assert sub.complex == fc.complex


def test_same_complex_across_delaunay_kinds():
    cloud = random_cloud(9, 2, 1, seed=95)
    a = chromatic_alpha_filtration(cloud)
    b = del_cech_filtration(cloud)
    c = del_rips_filtration(cloud)
    assert a.complex == b.complex == c.complex


def test_alpha_below_cech_pointwise():
    # the chromatic alpha value never exceeds the enclosing ball radius
    cloud = random_cloud(7, 2, 1, seed=96)
    alpha = chromatic_alpha_filtration(cloud)
    cech = del_cech_filtration(cloud)
    for sig in alpha.complex:
        assert alpha.value(sig) >= cech.value(sig) - 1e-9
