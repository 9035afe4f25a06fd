"""Benchmark harness for the filtration builders.

Three sampling schemes: growing point counts in the unit square,
growing ambient dimension on the unit sphere, and growing colour
counts in the unit square.  Every record is the median wall time of
five repeats of one build, single threaded.
"""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import ChromaticPointCloud, validate_chromatic_set
from .delaunay import chromatic_delaunay
from .errors import ParseError
from .filtrations import (chromatic_alpha_filtration, del_cech_filtration,
                          del_rips_filtration)

REPEATS = 5

# scheme -> list of (n, d, s)
SCHEME_GRIDS: Dict[str, List[Tuple[int, int, int]]] = {
    "points": [(n, 2, 2) for n in (100, 200, 400, 700, 1000, 2000)],
    "dimension": [(200, d, 2) for d in (2, 3, 4, 5)],
    "colours": [(500, 2, s) for s in (2, 3, 4, 5, 6)],
}

KINDS = ("triangulation", "alpha", "del-cech", "del-rips")


@dataclass
class BenchmarkRecord:
    scheme: str
    n: int
    d: int
    s: int
    kind: str
    seed: int
    median_seconds: float
    simplex_count: int

    def csv_row(self) -> str:
        return "%s,%d,%d,%d,%s,%d,%.6g,%d" % (
            self.scheme, self.n, self.d, self.s, self.kind, self.seed,
            self.median_seconds, self.simplex_count)


def sample_cloud(scheme: str, n: int, d: int, s: int,
                 seed: int) -> ChromaticPointCloud:
    """Deterministic instance for one grid cell of a scheme."""
    rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence([seed, n, d, s])))
    if scheme == "dimension":
        pts = rng.standard_normal((n, d))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    else:
        pts = rng.random((n, d))
    colours = rng.integers(0, s, size=n)
    while len(set(colours.tolist())) < s:
        colours = rng.integers(0, s, size=n)
    return validate_chromatic_set(pts, colours.tolist())


def _time_median(fn: Callable[[], object], repeats: int) -> Tuple[float, object]:
    times = []
    result = None
    for _ in range(repeats):
        t0 = time.monotonic()
        result = fn()
        times.append(time.monotonic() - t0)
    return statistics.median(times), result


def run_benchmark(scheme: str, seed: int,
                  sizes: Optional[Sequence[int]] = None,
                  repeats: int = REPEATS,
                  kinds: Sequence[str] = KINDS) -> List[BenchmarkRecord]:
    """Benchmark one scheme; sizes overrides the varying parameter."""
    if scheme not in SCHEME_GRIDS:
        raise ParseError(f"unknown scheme {scheme!r}, "
                         f"expected one of {sorted(SCHEME_GRIDS)}")
    grid = SCHEME_GRIDS[scheme]
    if sizes is not None:
        wanted = list(int(x) for x in sizes)
        if scheme == "points":
            grid = [(n, d, s) for n in wanted for _, d, s in grid[:1]]
        elif scheme == "dimension":
            grid = [(n, dd, s) for dd in wanted for n, _, s in grid[:1]]
        else:
            grid = [(n, d, ss) for ss in wanted for n, d, _ in grid[:1]]

    builders: Dict[str, Callable[[ChromaticPointCloud], object]] = {
        "triangulation": lambda c: chromatic_delaunay(c),
        "alpha": chromatic_alpha_filtration,
        "del-cech": del_cech_filtration,
        "del-rips": del_rips_filtration,
    }
    records: List[BenchmarkRecord] = []
    for n, d, s in grid:
        cloud = sample_cloud(scheme, n, d, s, seed)
        for kind in kinds:
            med, out = _time_median(lambda: builders[kind](cloud), repeats)
            count = len(out.complex)
            records.append(BenchmarkRecord(scheme, n, d, s, kind, seed,
                                           med, count))
    return records


def records_to_csv(records: Sequence[BenchmarkRecord]) -> str:
    lines = ["scheme,n,d,s,kind,seed,median_seconds,simplex_count"]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"
