"""Delaunay triangulations, chromatic Delaunay complexes and membranes.

The chromatic Delaunay complex of (X, mu) is the Delaunay triangulation
of the chromatic lift of X.  Lifted point sets are usually degenerate
in the ambient space (they live in an affine flat), so triangulation
always starts by projecting to the affine hull.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .core import (
    ChromaticPointCloud,
    Simplex,
    SimplicialComplex,
    chromatic_lift,
    circumsphere_through,
    simplex,
    validate_chromatic_set,
)
from .errors import (
    DegenerateInput,
    DimensionTooLarge,
    DuplicatePoint,
    NotRefinement,
    NotSimplicial,
)

MAX_DIM = 8


@dataclass
class Triangulation:
    """A Delaunay complex plus the coordinates that produced it."""

    complex: SimplicialComplex
    coordinates: np.ndarray
    top_dimension: int

    def maximal_simplices(self) -> List[Simplex]:
        return self.complex.simplices(self.top_dimension)


def affine_hull_projection(points: np.ndarray,
                           tol: float = 1e-9) -> Tuple[np.ndarray, int]:
    """Coordinates of the points inside their affine hull.

    Returns (projected points, hull dimension).  Distances are
    preserved because the basis is orthonormal.
    """
    pts = np.asarray(points, float)
    centre = pts.mean(axis=0)
    shifted = pts - centre
    if shifted.shape[0] == 1:
        return np.zeros((1, 0)), 0
    u, svals, vt = np.linalg.svd(shifted, full_matrices=False)
    scale = max(float(svals[0]) if svals.size else 0.0, 1.0)
    rank = int(np.sum(svals > tol * scale))
    return shifted @ vt[:rank].T, rank


def delaunay_triangulation(points) -> Triangulation:
    """Delaunay triangulation of distinct points in general position.

    Works inside the affine hull, via the convex hull of the parabolic
    lift.  Each maximal cell is validated against its circumsphere;
    a non-vertex point on the sphere means the subdivision is not
    simplicial and the input is rejected.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise DegenerateInput("points must be a 2d array")
    n, m = pts.shape
    if m > MAX_DIM:
        raise DimensionTooLarge(f"ambient dimension {m} exceeds {MAX_DIM}")
    _check_distinct(pts)
    proj, a = affine_hull_projection(pts)
    if a > MAX_DIM:
        raise DimensionTooLarge(f"hull dimension {a} exceeds {MAX_DIM}")
    if a == n - 1:
        cells = [tuple(range(n))]
    elif a == 0:
        cells = [(0,)]
    elif a == 1:
        order = np.argsort(proj[:, 0])
        cells = [simplex((int(order[i]), int(order[i + 1])))
                 for i in range(n - 1)]
    else:
        cells = _lower_hull_cells(proj, a)
    _validate_empty_spheres(proj, cells)
    comp = SimplicialComplex.from_maximal(cells)
    return Triangulation(complex=comp, coordinates=pts,
                         top_dimension=comp.dim)


def _check_distinct(pts: np.ndarray) -> None:
    n = pts.shape[0]
    if n < 2:
        return
    scale = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    tol = 1e-12 * max(scale, 1.0)
    for i in range(n):
        hit = np.nonzero(np.linalg.norm(pts[i + 1:] - pts[i], axis=1) <= tol)[0]
        if hit.size:
            raise DuplicatePoint(f"points {i} and {int(hit[0]) + i + 1} coincide",
                                 witness=[i, int(hit[0]) + i + 1])


def _lower_hull_cells(proj: np.ndarray, a: int) -> List[Simplex]:
    lifted = np.hstack([proj, (proj * proj).sum(axis=1, keepdims=True)])
    # a flat parabolic lift means every point sits on one common sphere
    _, lift_rank = affine_hull_projection(lifted)
    if lift_rank < a + 1:
        raise NotSimplicial(
            "all points lie on a common sphere",
            witness={"cell": list(range(proj.shape[0]))})
    try:
        hull = ConvexHull(lifted, qhull_options="Qt")
    except QhullError as exc:
        raise NotSimplicial(f"convex hull failed: {exc.args[0].splitlines()[0]}"
                            ) from exc
    cells = []
    for facet, eq in zip(hull.simplices, hull.equations):
        if eq[a] < -1e-10:  # outward normal points down: lower facet
            cells.append(simplex(int(v) for v in facet))
    return sorted(set(cells))


def _validate_empty_spheres(proj: np.ndarray, cells: List[Simplex]) -> None:
    n = proj.shape[0]
    scale = 1.0
    if n > 1:
        scale = max(1e-12, float(
            np.linalg.norm(proj.max(axis=0) - proj.min(axis=0))))
    tol = 1e-9 * scale
    for cell in cells:
        if len(cell) < 2:
            continue
        centre, radius = circumsphere_through(proj[list(cell)])
        others = [i for i in range(n) if i not in set(cell)]
        if not others:
            continue
        dist = np.linalg.norm(proj[others] - centre, axis=1)
        near = np.abs(dist - radius) <= tol
        if near.any():
            culprit = int(np.array(others)[near][0])
            raise NotSimplicial(
                f"point {culprit} is cospherical with cell {cell}",
                witness={"cell": list(cell), "point": culprit})
        inside = dist < radius - tol
        if inside.any():
            culprit = int(np.array(others)[inside][0])
            raise NotSimplicial(
                f"point {culprit} lies inside the sphere of cell {cell}",
                witness={"cell": list(cell), "point": culprit})


def chromatic_delaunay(cloud: ChromaticPointCloud,
                       mu: Optional[Sequence[int]] = None) -> Triangulation:
    """Delaunay triangulation of the chromatic lift of the cloud."""
    lifted = chromatic_lift(cloud, mu)
    return delaunay_triangulation(lifted)


def delaunay_membership_oracle(points, sigma: Simplex) -> bool:
    """Direct test: does some empty circumsphere pass through sigma?

    Independent of the hull-based triangulation.  The smallest empty
    sphere through sigma touches a support set T containing sigma, and
    its centre lies in the affine hull of T, so it is the smallest
    circumsphere of T; all support sets are enumerated.
    """
    pts = np.asarray(points, float)
    n = pts.shape[0]
    sig = simplex(sigma)
    if any(v < 0 or v >= n for v in sig):
        return False
    proj, a = affine_hull_projection(pts)
    scale = max(1.0, float(np.abs(proj).max()) if proj.size else 1.0)
    tol = 1e-9 * scale
    rest = [i for i in range(n) if i not in set(sig)]
    for extra in range(0, a + 2 - len(sig)):
        for add in itertools.combinations(rest, extra):
            support = sorted(set(sig) | set(add))
            try:
                centre, radius = circumsphere_through(proj[support])
            except DegenerateInput:
                continue
            others = [i for i in range(n) if i not in set(support)]
            if not others:
                return True
            dist = np.linalg.norm(proj[others] - centre, axis=1)
            if np.all(dist >= radius - tol):
                return True
    return False


def embed_subcomplex(cloud: ChromaticPointCloud,
                     mu: Sequence[int],
                     nu: Sequence[int]) -> Tuple[SimplicialComplex, bool]:
    """Check the coarser Delaunay complex inside the finer one.

    nu must refine mu.  Returns the complex Del(X, mu) together with a
    flag saying whether it embeds as a subcomplex of Del(X, nu) whose
    image is a membrane: the projection of each simplex to the base
    coordinates keeps its vertices affinely independent, so the image
    is the graph of a piecewise-linear map over the base.
    """
    from .core import is_refinement

    if not is_refinement(nu, mu):
        raise NotRefinement("nu must refine mu")
    coarse = chromatic_delaunay(cloud, mu)
    fine = chromatic_delaunay(cloud, nu)
    if not (coarse.complex <= fine.complex):
        return coarse.complex, False
    for sig in coarse.complex.simplices():
        if len(sig) < 2:
            continue
        _, rank = affine_hull_projection(cloud.points[list(sig)])
        if rank != len(sig) - 1:
            return coarse.complex, False
    return coarse.complex, True
