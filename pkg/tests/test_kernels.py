import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import chromadel._kernels as kernels
from chromadel._kernels import reduce_columns
from chromadel._kernels._reduction_py import reduce_columns as reduce_pure


def triangle_boundary():
    # vertices 0,1,2 then edges (0,1),(0,2),(1,2) then the triangle
    columns = [[], [], [], [0, 1], [0, 2], [1, 2], [3, 4, 5]]
    dims = [0, 0, 0, 1, 1, 1, 2]
    return columns, dims


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_triangle_pairing():
    columns, dims = triangle_boundary()
    low = np.asarray(reduce_columns(columns, dims))
    # two edges kill components, the triangle kills the loop
    assert low[0] == low[1] == low[2] == -1
    assert sorted(int(x) for x in low[3:6] if x >= 0) == [1, 2]
    assert int(low[6]) == 5


def test_pure_and_selected_agree_on_triangle():
    columns, dims = triangle_boundary()
    assert np.array_equal(np.asarray(reduce_columns(columns, dims)),
                          np.asarray(reduce_pure(columns, dims)))


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_backends_agree_on_random_rips_matrices(seed):
    from chromadel.core import validate_chromatic_set
    from chromadel.filtrations import rips_filtration
    rng = np.random.default_rng(seed)
    cloud = validate_chromatic_set(rng.random((6, 2)), [0] * 6)
    fc = rips_filtration(cloud, dim_cap=2)
    order = fc.sorted_simplices()
    index = {s: i for i, (s, _) in enumerate(order)}
    dims = [len(s) - 1 for s, _ in order]
    columns = []
    for s, _ in order:
        facets = [tuple(v for v in s if v != w) for w in s] if len(s) > 1 \
            else []
        columns.append(sorted(index[t] for t in facets))
    low_a = np.asarray(reduce_columns(columns, dims))
    low_b = np.asarray(reduce_pure(columns, dims))
    assert np.array_equal(low_a, low_b)
    # pivots are unique among used rows
    used = [int(x) for x in low_a if x >= 0]
    assert len(used) == len(set(used))


def test_pure_fallback_env_var():
    code = ("import chromadel._kernels as k; print(k.BACKEND)")
    env = dict(os.environ, CHROMADEL_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_compiled_backend_selected_when_available():
    try:
        import chromadel._kernels._reduction  # noqa: F401
    except ImportError:
        pytest.skip("compiled kernel not built")
    if os.environ.get("CHROMADEL_PURE"):
        pytest.skip("pure backend forced")
    assert kernels.BACKEND == "cython"
