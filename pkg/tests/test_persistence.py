import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromadel.core import validate_chromatic_set
from chromadel.errors import ParseError, SizeLimitExceeded
from chromadel.filtrations import (FilteredComplex, cech_filtration,
                                   chromatic_alpha_filtration,
                                   del_cech_filtration, rips_filtration)
from chromadel.persistence import (PersistenceDiagram, bottleneck_distance,
                                   compute_persistence, diagrams_equal)

from tests.conftest import SQUARE_CORNERS, random_cloud


class TestComputePersistence:
    def test_square_corner_loop(self, square_cloud):
        fc = cech_filtration(square_cloud)
        diagram = compute_persistence(fc, max_degree=1)
        loops = diagram.in_degree(1)
        assert len(loops) == 1
        _, birth, death = loops[0]
        assert birth == pytest.approx(math.sqrt(2) / 2)
        assert death == pytest.approx(1.0)

    def test_line_rips_bars(self):
        cloud = validate_chromatic_set([[0.0], [10.0], [20.0]], [0, 0, 0])
        diagram = compute_persistence(rips_filtration(cloud))
        h0 = diagram.in_degree(0)
        finite = sorted(d for _, _, d in h0 if not math.isinf(d))
        assert finite == pytest.approx([5.0, 5.0])
        assert sum(1 for _, _, d in h0 if math.isinf(d)) == 1

    def test_infinite_bars_count_components(self):
        for seed in range(5):
            cloud = random_cloud(7, 2, 1, seed=400 + seed)
            fc = del_cech_filtration(cloud)
            diagram = compute_persistence(fc)
            big = fc.max_value() + 1
            comps = len(_components(fc.sublevel(big)))
            inf0 = [b for b in diagram.in_degree(0) if math.isinf(b[2])]
            assert len(inf0) == comps == 1

    def test_zero_length_bars_dropped_by_default(self):
        cloud = random_cloud(6, 2, 1, seed=410)
        fc = del_cech_filtration(cloud)
        full = compute_persistence(fc, keep_zero_length=True)
        trimmed = compute_persistence(fc)
        assert len(trimmed.bars) <= len(full.bars)
        assert all(math.isinf(d) or d > b for _, b, d in trimmed.bars)

    def test_order_shuffle_invariance(self):
        # identical values with permuted construction order give the
        # same diagram because ties break canonically
        cloud = random_cloud(7, 2, 0, seed=420)
        fc = cech_filtration(cloud, dim_cap=2)
        shuffled = dict(reversed(list(fc.values.items())))
        fc2 = FilteredComplex(fc.complex, shuffled, fc.d, fc.s, fc.kind)
        assert compute_persistence(fc).bars == compute_persistence(fc2).bars


def _components(k):
    parent = {v: v for v in k.vertices()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in k.simplices(1):
        parent[find(e[0])] = find(e[1])
    return {find(v) for v in parent}


class TestDiagramIO:
    def test_csv_roundtrip(self):
        d = PersistenceDiagram([(0, 0.0, float("inf")), (1, 0.25, 1.5)])
        assert PersistenceDiagram.from_csv(d.to_csv()).bars == d.sorted_bars()

    def test_bad_header_rejected(self):
        with pytest.raises(ParseError):
            PersistenceDiagram.from_csv("birth,death\n0,1\n")

    def test_bad_row_rejected(self):
        with pytest.raises(ParseError):
            PersistenceDiagram.from_csv("degree,birth,death\n0,x,1\n")


class TestDiagramsEqual:
    def test_within_tolerance(self):
        a = PersistenceDiagram([(0, 0.0, 1.0)])
        b = PersistenceDiagram([(0, 1e-10, 1.0 + 1e-10)])
        assert diagrams_equal(a, b)

    def test_beyond_tolerance(self):
        a = PersistenceDiagram([(0, 0.0, 1.0)])
        b = PersistenceDiagram([(0, 0.0, 1.1)])
        assert not diagrams_equal(a, b)

    def test_short_bars_ignored_on_either_side(self):
        a = PersistenceDiagram([(1, 0.5, 0.5 + 1e-12), (0, 0.0, 2.0)])
        b = PersistenceDiagram([(0, 0.0, 2.0)])
        assert diagrams_equal(a, b)


class TestBottleneck:
    def test_identical_diagrams(self):
        d = PersistenceDiagram([(0, 0.0, 1.0), (1, 0.5, 2.0)])
        assert bottleneck_distance(d, d) == 0.0

    def test_sup_norm_shift(self):
        a = PersistenceDiagram([(0, 0.0, 1.0)])
        b = PersistenceDiagram([(0, 0.0, 1.2)])
        assert bottleneck_distance(a, b) == pytest.approx(0.2)

    def test_diagonal_matching(self):
        a = PersistenceDiagram([(0, 0.0, 0.1)])
        b = PersistenceDiagram([])
        assert bottleneck_distance(a, b) == pytest.approx(0.05)

    def test_essential_count_mismatch_is_infinite(self):
        a = PersistenceDiagram([(0, 0.0, float("inf"))])
        b = PersistenceDiagram([])
        assert math.isinf(bottleneck_distance(a, b))

    def test_size_limit(self):
        bars = [(0, float(i), float(i) + 1.0) for i in range(250)]
        with pytest.raises(SizeLimitExceeded):
            bottleneck_distance(PersistenceDiagram(bars),
                                PersistenceDiagram(bars))

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_symmetry_and_triangle_sanity(self, seed):
        rng = np.random.default_rng(seed)
        def rand_diagram():
            bars = []
            for _ in range(rng.integers(0, 6)):
                b = float(rng.random())
                bars.append((0, b, b + float(rng.random())))
            return PersistenceDiagram(bars)
        a, b = rand_diagram(), rand_diagram()
        ab = bottleneck_distance(a, b)
        assert ab == pytest.approx(bottleneck_distance(b, a), abs=1e-12)
        assert ab >= 0.0
        assert bottleneck_distance(a, a) == 0.0


def test_theorem_b_sample():
    # Cech, restricted Cech and chromatic alpha agree in persistence
    for seed in range(5):
        cloud = random_cloud(6, 2, 1, seed=500 + seed)
        d_cech = compute_persistence(cech_filtration(cloud))
        d_del = compute_persistence(del_cech_filtration(cloud))
        d_alpha = compute_persistence(chromatic_alpha_filtration(cloud))
        assert diagrams_equal(d_cech, d_del)
        assert diagrams_equal(d_del, d_alpha)


def test_kernel_backends_agree_on_real_input():
    from chromadel._kernels._reduction_py import reduce_columns as pure
    cloud = random_cloud(7, 2, 1, seed=510)
    fc = del_cech_filtration(cloud)
    order = fc.sorted_simplices()
    index = {s: i for i, (s, _) in enumerate(order)}
    dims = [len(s) - 1 for s, _ in order]
    cols = []
    for s, _ in order:
        facets = [tuple(v for v in s if v != w) for w in s] if len(s) > 1 \
            else []
        cols.append(sorted(index[t] for t in facets))
    low_pure = pure(cols, dims)
    try:
        from chromadel._kernels._reduction import reduce_columns as fast
    except ImportError:
        pytest.skip("compiled kernel not built")
    assert np.array_equal(np.asarray(low_pure), np.asarray(fast(cols, dims)))
