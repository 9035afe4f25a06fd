"""Persistent homology over the two-element field.

Boundary-matrix reduction with clearing runs in the selected kernel
backend (compiled or pure python).  Diagrams are multisets of
(degree, birth, death) with death = inf for essential classes, and the
bottleneck distance is computed exactly by a binary search over
candidate costs with a perfect-matching feasibility test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import reduce_columns
from .core import faces
from .errors import ParseError, SizeLimitExceeded
from .filtrations import FilteredComplex

Bar = Tuple[int, float, float]


@dataclass
class PersistenceDiagram:
    """Multiset of (degree, birth, death); death is inf for essential."""

    bars: List[Bar] = field(default_factory=list)

    def in_degree(self, degree: int) -> List[Bar]:
        return [b for b in self.bars if b[0] == degree]

    def degrees(self) -> List[int]:
        return sorted({b[0] for b in self.bars})

    def sorted_bars(self) -> List[Bar]:
        return sorted(self.bars)

    def to_csv(self) -> str:
        lines = ["degree,birth,death"]
        for deg, birth, death in self.sorted_bars():
            dtxt = "inf" if math.isinf(death) else "%.17g" % death
            lines.append("%d,%s,%s" % (deg, "%.17g" % birth, dtxt))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "PersistenceDiagram":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or lines[0].lower() != "degree,birth,death":
            raise ParseError("diagram CSV must start with degree,birth,death")
        bars: List[Bar] = []
        for ln in lines[1:]:
            parts = ln.split(",")
            if len(parts) != 3:
                raise ParseError(f"bad diagram row: {ln!r}")
            try:
                deg = int(parts[0])
                birth = float(parts[1])
                death = float("inf") if parts[2] == "inf" else float(parts[2])
            except ValueError as exc:
                raise ParseError(f"bad diagram row: {ln!r}") from exc
            bars.append((deg, birth, death))
        return cls(bars)


def compute_persistence(fc: FilteredComplex,
                        max_degree: Optional[int] = None,
                        keep_zero_length: bool = False
                        ) -> PersistenceDiagram:
    """Persistence of a monotone filtration, canonical tie-break order.

    Zero-length pairs are dropped unless keep_zero_length is set.
    """
    fc.check_monotone()
    order = fc.sorted_simplices()
    index: Dict[tuple, int] = {s: i for i, (s, _) in enumerate(order)}
    values = [v for _, v in order]
    dims = [len(s) - 1 for s, _ in order]
    columns = [sorted(index[tau] for tau in faces(s)) for s, _ in order]
    low = reduce_columns(columns, dims)

    bars: List[Bar] = []
    paired = set()
    for j in range(len(order)):
        i = int(low[j])
        if i < 0:
            continue
        paired.add(i)
        paired.add(j)
        if keep_zero_length or values[j] > values[i]:
            bars.append((dims[i], values[i], values[j]))
    for i in range(len(order)):
        if i not in paired and int(low[i]) < 0:
            bars.append((dims[i], values[i], float("inf")))
    if max_degree is not None:
        bars = [b for b in bars if b[0] <= max_degree]
    return PersistenceDiagram(sorted(bars))


def _bars_close(x: Bar, y: Bar, tol: float) -> bool:
    if x[0] != y[0] or abs(x[1] - y[1]) > tol:
        return False
    if math.isinf(x[2]) != math.isinf(y[2]):
        return False
    return math.isinf(x[2]) or abs(x[2] - y[2]) <= tol


def diagrams_equal(d1: PersistenceDiagram, d2: PersistenceDiagram,
                   tol: float = 1e-8) -> bool:
    """Multiset equality within tol, ignoring bars shorter than tol.

    Two solvers can disagree on whether a pair has exactly equal values
    or values a roundoff apart, so near-zero-length bars are dropped on
    both sides before matching.
    """
    def trim(d: PersistenceDiagram) -> List[Bar]:
        return [b for b in d.sorted_bars()
                if math.isinf(b[2]) or b[2] - b[1] > tol]

    a, b = trim(d1), trim(d2)
    if len(a) != len(b):
        return False
    if all(_bars_close(x, y, tol) for x, y in zip(a, b)):
        return True
    # ordering may interleave near-equal bars; fall back to matching
    used = [False] * len(b)
    for x in a:
        hit = next((j for j, y in enumerate(b)
                    if not used[j] and _bars_close(x, y, tol)), None)
        if hit is None:
            return False
        used[hit] = True
    return True


MAX_DIAGRAM_POINTS = 200


def bottleneck_distance(d1: PersistenceDiagram,
                        d2: PersistenceDiagram) -> float:
    """Exact bottleneck distance, max over homology degrees.

    Finite points may be matched to each other or to the diagonal;
    essential classes must be matched among themselves by birth.
    """
    if len(d1.bars) + len(d2.bars) > 2 * MAX_DIAGRAM_POINTS:
        raise SizeLimitExceeded(
            f"bottleneck limited to {MAX_DIAGRAM_POINTS} points per diagram")
    best = 0.0
    for deg in sorted(set(d1.degrees()) | set(d2.degrees())):
        best = max(best, _bottleneck_one_degree(
            d1.in_degree(deg), d2.in_degree(deg)))
    return best


def _bottleneck_one_degree(a: List[Bar], b: List[Bar]) -> float:
    inf_a = sorted(x[1] for x in a if math.isinf(x[2]))
    inf_b = sorted(x[1] for x in b if math.isinf(x[2]))
    if len(inf_a) != len(inf_b):
        return float("inf")
    d_inf = max((abs(x - y) for x, y in zip(inf_a, inf_b)), default=0.0)
    p = [(x[1], x[2]) for x in a if not math.isinf(x[2])]
    q = [(x[1], x[2]) for x in b if not math.isinf(x[2])]
    if not p and not q:
        return d_inf

    def cost(u, v):
        return max(abs(u[0] - v[0]), abs(u[1] - v[1]))

    def diag(u):
        return 0.5 * (u[1] - u[0])

    cands = {0.0, d_inf}
    cands.update(diag(u) for u in p)
    cands.update(diag(v) for v in q)
    cands.update(cost(u, v) for u in p for v in q)
    levels = sorted(c for c in cands if c >= d_inf - 1e-18)
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _matchable(p, q, levels[mid], cost, diag):
            hi = mid
        else:
            lo = mid + 1
    return max(levels[lo], d_inf)


def _matchable(p, q, t, cost, diag) -> bool:
    """Perfect matching with every edge cost at most t?

    Standard reduction: each side is padded with one diagonal copy per
    point of the other side; diagonal copies match each other freely.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    n, m = len(p), len(q)
    size = n + m
    rows, cols = [], []
    eps = 1e-12 * max(1.0, t)
    for i, u in enumerate(p):
        for j, v in enumerate(q):
            if cost(u, v) <= t + eps:
                rows.append(i)
                cols.append(j)
        if diag(u) <= t + eps:
            for j in range(m, m + n):
                rows.append(i)
                cols.append(j)
    for i in range(n, n + m):
        v = q[i - n]
        if diag(v) <= t + eps:
            rows.append(i)
            cols.append(i - n)
        for j in range(m, m + n):
            rows.append(i)
            cols.append(j)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                       shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return int((match >= 0).sum()) == size
