"""Chromatic point sets, lifts, refinements and general position checks.

A chromatic set is a finite point cloud in R^d together with a surjective
colouring onto {0, ..., s}.  The chromatic lift places colour m at height
e_m in R^s (e_0 = 0), so the colour classes sit on the corners of a simplex
spanned by s of the d+s coordinate directions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import (
    DegenerateInput,
    DimensionMismatch,
    DuplicatePoint,
    LengthMismatch,
    NonSurjectiveColouring,
    NotRefinement,
    NotSimplicialInput,
    SizeLimitExceeded,
)

Simplex = Tuple[int, ...]

DISTINCT_TOL = 1e-12


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical form: strictly increasing vertex tuple."""
    vs = tuple(sorted(set(int(v) for v in vertices)))
    return vs


def faces(sigma: Simplex) -> List[Simplex]:
    """Codimension-1 faces of a simplex (empty list for vertices)."""
    if len(sigma) <= 1:
        return []
    return [sigma[:i] + sigma[i + 1:] for i in range(len(sigma))]


def all_faces(sigma: Simplex) -> List[Simplex]:
    """Every nonempty face, the simplex itself included."""
    out = []
    for k in range(1, len(sigma) + 1):
        out.extend(itertools.combinations(sigma, k))
    return out


class SimplicialComplex:
    """A finite abstract simplicial complex over integer vertex labels."""

    def __init__(self, simplices: Iterable[Simplex], check: bool = True):
        self._simplices: Set[Simplex] = set(simplex(s) for s in simplices)
        self._simplices.discard(())
        if check:
            for s in self._simplices:
                for tau in faces(s):
                    if tau not in self._simplices:
                        raise NotSimplicialInput(
                            f"face {tau} of {s} missing", witness=list(s))

    @classmethod
    def from_maximal(cls, maximal: Iterable[Simplex]) -> "SimplicialComplex":
        closed: Set[Simplex] = set()
        for s in maximal:
            closed.update(all_faces(simplex(s)))
        return cls(closed, check=False)

    def __contains__(self, sigma) -> bool:
        return simplex(sigma) in self._simplices

    def __len__(self) -> int:
        return len(self._simplices)

    def __iter__(self):
        return iter(self.simplices())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._simplices == other._simplices

    def __le__(self, other: "SimplicialComplex") -> bool:
        return self._simplices <= other._simplices

    def simplex_set(self) -> Set[Simplex]:
        return set(self._simplices)

    def simplices(self, dim: Optional[int] = None) -> List[Simplex]:
        """Simplices sorted by (dimension, lexicographic vertex list)."""
        if dim is None:
            return sorted(self._simplices, key=lambda s: (len(s), s))
        return sorted(s for s in self._simplices if len(s) == dim + 1)

    @property
    def dim(self) -> int:
        return max((len(s) for s in self._simplices), default=0) - 1

    def vertices(self) -> List[int]:
        return sorted({v for s in self._simplices for v in s})

    def cofaces(self, sigma: Simplex) -> List[Simplex]:
        """Strict cofaces of sigma, any codimension."""
        sig = set(sigma)
        return [s for s in self._simplices
                if len(s) > len(sigma) and sig.issubset(s)]

    def restrict(self, keep) -> "SimplicialComplex":
        """Subcomplex of simplices accepted by the predicate."""
        return SimplicialComplex(
            (s for s in self._simplices if keep(s)), check=True)


def colour_classes(colours: Sequence[int]) -> Dict[int, List[int]]:
    classes: Dict[int, List[int]] = {}
    for i, c in enumerate(colours):
        classes.setdefault(int(c), []).append(i)
    return classes


@dataclass
class ChromaticPointCloud:
    """Validated chromatic set: points with a surjective colouring."""

    points: np.ndarray
    colours: Tuple[int, ...]

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def s(self) -> int:
        return max(self.colours)

    @property
    def scale(self) -> float:
        """Bounding box diagonal; 1.0 for single points."""
        if self.n <= 1:
            return 1.0
        diam = float(np.linalg.norm(
            self.points.max(axis=0) - self.points.min(axis=0)))
        return diam if diam > 0 else 1.0

    def classes(self) -> Dict[int, List[int]]:
        return colour_classes(self.colours)

    def gamma(self, sigma: Simplex) -> Tuple[int, ...]:
        """Colour set of a simplex."""
        return tuple(sorted({self.colours[v] for v in sigma}))


def validate_chromatic_set(points, colours) -> ChromaticPointCloud:
    """Check shapes, distinctness and surjectivity; return a validated cloud."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise DimensionMismatch(f"points must be a 2d array, got ndim={pts.ndim}")
    cols = tuple(int(c) for c in colours)
    if len(cols) != pts.shape[0]:
        raise LengthMismatch(
            f"{pts.shape[0]} points but {len(cols)} colours")
    if any(c < 0 for c in cols):
        raise NonSurjectiveColouring("colours must be non-negative integers")
    if cols:
        s = max(cols)
        missing = sorted(set(range(s + 1)) - set(cols))
        if missing:
            raise NonSurjectiveColouring(
                f"colours {missing} unused below max colour {s}",
                witness=missing)
    if not np.isfinite(pts).all():
        raise DegenerateInput("points must be finite")
    n = pts.shape[0]
    if n > 1:
        scale = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
        tol = DISTINCT_TOL * max(scale, 1.0)
        for i in range(n):
            d2 = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
            hit = np.nonzero(d2 <= tol)[0]
            if hit.size:
                j = int(hit[0]) + i + 1
                raise DuplicatePoint(
                    f"points {i} and {j} coincide", witness=[i, j])
    return ChromaticPointCloud(pts, cols)


def chromatic_lift(cloud: ChromaticPointCloud,
                   mu: Optional[Sequence[int]] = None) -> np.ndarray:
    """Lift x of colour m to (x, e_m) in R^(d+s), with e_0 = 0."""
    cols = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    if len(cols) != cloud.n:
        raise LengthMismatch("colouring length does not match point count")
    s = max(cols) if cols else 0
    lifted = np.zeros((cloud.n, cloud.d + s))
    lifted[:, :cloud.d] = cloud.points
    for i, c in enumerate(cols):
        if c > 0:
            lifted[i, cloud.d + c - 1] = 1.0
    return lifted


def is_refinement(nu: Sequence[int], mu: Sequence[int]) -> bool:
    """True when every mu-class is a union of nu-classes."""
    if len(nu) != len(mu):
        raise LengthMismatch("colourings have different lengths")
    seen: Dict[int, int] = {}
    for cn, cm in zip(nu, mu):
        if cn in seen:
            if seen[cn] != cm:
                return False
        else:
            seen[cn] = cm
    return True


def canonical_colouring(mu: Sequence[int]) -> Tuple[int, ...]:
    """Relabel colour classes by order of first appearance, 0..s surjective."""
    remap: Dict[int, int] = {}
    out = []
    for c in mu:
        if c not in remap:
            remap[c] = len(remap)
        out.append(remap[c])
    return tuple(out)


def elementary_refinement_chain(
        mu: Sequence[int], nu: Sequence[int]) -> List[Tuple[int, ...]]:
    """Colourings mu = c_0, ..., c_k = nu where each step splits one class.

    Each c_{i+1} splits exactly one class of c_i into a nu-class and the
    rest.  All colourings in the chain are canonical (labels 0..s_i).
    Raises NotRefinement when nu does not refine mu.
    """
    if not is_refinement(nu, mu):
        raise NotRefinement("second colouring does not refine the first")
    current = canonical_colouring(mu)
    target = canonical_colouring(nu)
    chain = [current]
    while True:
        # find a class of current that is still a union of >= 2 target classes
        split_at = None
        for c in sorted(set(current)):
            members = [i for i, ci in enumerate(current) if ci == c]
            sub = sorted({target[i] for i in members})
            if len(sub) > 1:
                split_at = (c, members, sub[0])
                break
        if split_at is None:
            break
        c, members, sub0 = split_at
        nxt = list(current)
        fresh = max(current) + 1
        for i in members:
            if target[i] != sub0:
                pass
            else:
                nxt[i] = fresh
        # split off the first target subclass as a new colour
        current = canonical_colouring(nxt)
        chain.append(current)
    return chain


def circumsphere_through(points) -> Tuple[np.ndarray, float]:
    """Unique sphere through the points with centre in their affine hull.

    This is the smallest circumsphere of the given points.  Raises
    DegenerateInput when the points are affinely dependent.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise DimensionMismatch("need a 2d array of at least one point")
    k = pts.shape[0]
    if k == 1:
        return pts[0].copy(), 0.0
    base = pts[0]
    diffs = pts[1:] - base  # (k-1, d)
    scale = max(float(np.abs(diffs).max()), 1e-300)
    gram = diffs @ diffs.T
    rhs = 0.5 * np.einsum("ij,ij->i", diffs, diffs)
    try:
        sol = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        raise DegenerateInput("points are affinely dependent",
                              witness=pts.tolist())
    # affine dependence shows as a rank-deficient Gram matrix
    svals = np.linalg.svd(gram, compute_uv=False)
    if svals[-1] <= 1e-12 * scale * scale * max(svals[0], 1.0):
        raise DegenerateInput("points are affinely dependent",
                              witness=pts.tolist())
    centre = base + sol @ diffs
    radius = float(np.linalg.norm(centre - base))
    return centre, radius


# ---------------------------------------------------------------------------
# general position


@dataclass
class GPReport:
    ok: bool
    gp_sphere: bool
    gp_rank: bool
    witness: Optional[dict] = None
    checked_sphere_subsets: int = 0
    checked_partitions: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _fraction_rank(rows: List[List[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][c]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / inv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def _float_rank(mat: np.ndarray, tol_scale: float) -> int:
    if mat.size == 0:
        return 0
    svals = np.linalg.svd(mat, compute_uv=False)
    if svals.size == 0:
        return 0
    thresh = 1e-9 * max(tol_scale, float(svals[0]))
    return int(np.sum(svals > thresh))


def _cospherical(pts: np.ndarray, exact: bool) -> bool:
    """True when the points lie on a common sphere (or hyperplane limit).

    pts has >= 4 rows that are affinely dependent; they are cospherical
    exactly when their parabolic lifts (x, |x|^2) are affinely dependent
    too -- i.e. the lift does not gain rank.
    """
    base_rank_in = pts.shape[0] - 1
    lift = np.hstack([pts, (pts * pts).sum(axis=1, keepdims=True)])
    if exact:
        fr = [[Fraction(float(v)) for v in row] for row in pts]
        fl = [[Fraction(float(v)) for v in row] for row in lift]
        r0 = _fraction_rank([[a - b for a, b in zip(r, fr[0])] for r in fr[1:]])
        r1 = _fraction_rank([[a - b for a, b in zip(r, fl[0])] for r in fl[1:]])
        return r0 < base_rank_in and r1 == r0
    scale = max(float(np.abs(pts).max()), 1.0)
    r0 = _float_rank(pts[1:] - pts[0], scale)
    r1 = _float_rank(lift[1:] - lift[0], scale * scale)
    return r0 < base_rank_in and r1 == r0


def check_general_position(cloud: ChromaticPointCloud,
                           mu: Optional[Sequence[int]] = None,
                           budget: int = 10**7,
                           exact: bool = False) -> GPReport:
    """Verify both general position conditions for the given colouring.

    Condition one: no k+3 points of the chromatic lift on a common
    k-sphere for k below the lift dimension (checked on subsets of the
    lifted points).  Condition two: for every subset P with at most
    d+k+1 points and every partition of P into k+1 parts, the stacked
    difference vectors have full rank |P|-k-1.  Parts of size one never
    affect the rank condition, so only collections of disjoint parts of
    size >= 2 with total excess <= d are enumerated.

    Enumeration stops with SizeLimitExceeded once the work budget is hit.
    """
    cols = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    lifted = chromatic_lift(cloud, cols)
    n, big_d = lifted.shape
    work = 0

    # sphere condition on the lift: any j points on a common (j-3)-sphere
    # are a violation, for 4 <= j <= big_d + 2
    sphere_witness = None
    checked_sphere = 0
    for j in range(4, min(n, big_d + 2) + 1):
        for idx in itertools.combinations(range(n), j):
            work += 1
            if work > budget:
                raise SizeLimitExceeded(
                    f"general position budget {budget} exhausted")
            checked_sphere += 1
            if _cospherical(lifted[list(idx)], exact):
                sphere_witness = {"kind": "cosphericity",
                                  "points": list(idx)}
                break
        if sphere_witness:
            break

    # rank condition on the base points: disjoint parts of size >= 2,
    # total excess sum(|Q|-1) <= d, stacked differences must have rank
    # equal to the total excess
    d = cloud.d
    rank_witness = None
    checked_parts = 0

    def part_options(excess_left: int, min_first: int):
        # subsets of size 2..excess_left+1 whose smallest element >= min_first
        for size in range(2, excess_left + 2):
            for q in itertools.combinations(range(n), size):
                if q[0] >= min_first:
                    yield q

    def recurse(parts: List[Tuple[int, ...]], used: Set[int], excess: int):
        nonlocal work, checked_parts, rank_witness
        if rank_witness is not None:
            return
        if parts:
            checked_parts += 1
            diffs = []
            for q in parts:
                for v in q[1:]:
                    diffs.append(cloud.points[v] - cloud.points[q[0]])
            mat = np.array(diffs)
            if exact:
                rows = [[Fraction(float(x)) for x in r] for r in diffs]
                rank = _fraction_rank(rows)
            else:
                rank = _float_rank(mat, cloud.scale)
            if rank < excess:
                rank_witness = {"kind": "rank",
                                "parts": [list(q) for q in parts]}
                return
        lead = parts[-1][0] + 1 if parts else 0
        for q in part_options(d - excess, lead):
            if used.intersection(q):
                continue
            work += 1
            if work > budget:
                raise SizeLimitExceeded(
                    f"general position budget {budget} exhausted")
            recurse(parts + [q], used | set(q), excess + len(q) - 1)

    if sphere_witness is None:
        recurse([], set(), 0)

    witness = sphere_witness or rank_witness
    return GPReport(ok=witness is None,
                    gp_sphere=sphere_witness is None,
                    gp_rank=rank_witness is None,
                    witness=witness,
                    checked_sphere_subsets=checked_sphere,
                    checked_partitions=checked_parts)
