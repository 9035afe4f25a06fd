"""Compare the compiled and pure python reduction kernels.

Builds Rips-style boundary matrices of growing size, runs both
backends on identical input, checks the pivot arrays agree, and prints
a timing table.  Run directly:

    python3 benchmarks/kernel_backends.py [--sizes 40,80,120]
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from chromadel._kernels import BACKEND
from chromadel._kernels._reduction_py import reduce_columns as reduce_pure
from chromadel.core import validate_chromatic_set
from chromadel.filtrations import rips_filtration
from chromadel.persistence import compute_persistence  # noqa: F401 (sanity import)

try:
    from chromadel._kernels._reduction import reduce_columns as reduce_cython
except ImportError:
    reduce_cython = None


def boundary_input(n: int, seed: int):
    rng = np.random.Generator(np.random.Philox(seed))
    cloud = validate_chromatic_set(rng.random((n, 2)), [0] * n)
    fc = rips_filtration(cloud, dim_cap=2)
    order = fc.sorted_simplices()
    index = {s: i for i, (s, _) in enumerate(order)}
    dims = [len(s) - 1 for s, _ in order]
    columns = []
    for s, _ in order:
        facets = [tuple(v for v in s if v != w) for w in s] if len(s) > 1 else []
        columns.append(sorted(index[t] for t in facets))
    return columns, dims


def time_one(fn, columns, dims, repeats=3):
    times = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(columns, dims)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="20,40,80,120")
    args = ap.parse_args()
    sizes = [int(x) for x in args.sizes.split(",")]

    print(f"selected backend at import: {BACKEND}")
    if reduce_cython is None:
        print("compiled kernel unavailable; timing pure python only")
    print(f"{'n':>5} {'columns':>9} {'pure_s':>10} {'cython_s':>10} {'speedup':>8}")
    for n in sizes:
        columns, dims = boundary_input(n, seed=7)
        t_pure, low_pure = time_one(reduce_pure, columns, dims)
        if reduce_cython is None:
            print(f"{n:>5} {len(columns):>9} {t_pure:>10.4f} {'-':>10} {'-':>8}")
            continue
        t_cy, low_cy = time_one(reduce_cython, columns, dims)
        assert np.array_equal(np.asarray(low_pure), np.asarray(low_cy)), \
            f"backends disagree at n={n}"
        speed = t_pure / t_cy if t_cy > 0 else float("inf")
        print(f"{n:>5} {len(columns):>9} {t_pure:>10.4f} {t_cy:>10.4f} "
              f"{speed:>7.1f}x")
    print("pivot arrays identical across backends")


if __name__ == "__main__":
    main()
