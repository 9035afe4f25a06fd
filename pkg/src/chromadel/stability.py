"""Distortion, chromatic distance, and perturbation experiments.

The chromatic distance between two clouds is the smallest sup
displacement achievable by a colour-preserving bijection; perturbation
experiments displace a cloud inside an eta-ball and measure how the
chromatic Delaunay-Rips filtration and its diagram respond.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from .core import ChromaticPointCloud, validate_chromatic_set
from .errors import LengthMismatch, SizeLimitExceeded
from .filtrations import del_rips_filtration
from .persistence import bottleneck_distance, compute_persistence

MAX_CLASS_SIZE = 64


def distortion(x_points, y_points, bijection: Sequence[int]) -> float:
    """sup over pairs of the change in pairwise distance under f."""
    xs = np.asarray(x_points, float)
    ys = np.asarray(y_points, float)
    f = list(int(i) for i in bijection)
    if len(f) != xs.shape[0] or sorted(f) != list(range(ys.shape[0])):
        raise LengthMismatch("bijection must map indices of X onto Y")
    worst = 0.0
    for i, j in itertools.combinations(range(xs.shape[0]), 2):
        dx = float(np.linalg.norm(xs[i] - xs[j]))
        dy = float(np.linalg.norm(ys[f[i]] - ys[f[j]]))
        worst = max(worst, abs(dx - dy))
    return worst


def _class_assignment(xs: np.ndarray, ys: np.ndarray) -> float:
    """Min over bijections of the largest displacement (exact)."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    n = xs.shape[0]
    dist = np.linalg.norm(xs[:, None, :] - ys[None, :, :], axis=2)
    levels = np.unique(dist)

    def feasible(t: float) -> bool:
        rows, cols = np.nonzero(dist <= t)
        graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                           shape=(n, n))
        match = maximum_bipartite_matching(graph, perm_type="column")
        return int((match >= 0).sum()) == n

    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(float(levels[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


def chromatic_distance(cloud_x: ChromaticPointCloud,
                       cloud_y: ChromaticPointCloud) -> float:
    """Smallest sup displacement over colour-preserving bijections.

    Infinite when some colour class has different sizes in the two
    clouds.  Classes are independent, so the distance is the largest
    per-class assignment optimum.
    """
    cx = {m: np.array(idx) for m, idx in _classes(cloud_x).items()}
    cy = {m: np.array(idx) for m, idx in _classes(cloud_y).items()}
    if set(cx) != set(cy):
        return float("inf")
    worst = 0.0
    for m in cx:
        if len(cx[m]) != len(cy[m]):
            return float("inf")
        if len(cx[m]) > MAX_CLASS_SIZE:
            raise SizeLimitExceeded(
                f"colour class {m} exceeds {MAX_CLASS_SIZE} points")
        worst = max(worst, _class_assignment(
            cloud_x.points[cx[m]], cloud_y.points[cy[m]]))
    return worst


def _classes(cloud: ChromaticPointCloud) -> Dict[int, list]:
    out: Dict[int, list] = {}
    for i, c in enumerate(cloud.colours):
        out.setdefault(int(c), []).append(i)
    return out


@dataclass
class PerturbationReport:
    eta: float
    seed: int
    complex_isomorphic: bool
    distortion: float
    sup_value_gap: Optional[float]
    bottleneck: float

    def to_json_dict(self) -> dict:
        return {
            "eta": self.eta,
            "seed": self.seed,
            "complex_isomorphic": self.complex_isomorphic,
            "distortion": self.distortion,
            "sup_value_gap": self.sup_value_gap,
            "bottleneck": self.bottleneck,
        }


def sample_perturbation(points: np.ndarray, eta: float,
                        seed: int) -> np.ndarray:
    """Displace every point independently, uniformly in the eta-ball."""
    n, d = points.shape
    rng = np.random.Generator(np.random.Philox(seed))
    direction = rng.standard_normal((n, d))
    norms = np.linalg.norm(direction, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    radius = eta * rng.random((n, 1)) ** (1.0 / d)
    return points + direction / norms * radius


def perturbation_experiment(cloud: ChromaticPointCloud,
                            mu: Optional[Sequence[int]] = None,
                            eta: float = 1e-6,
                            seed: int = 0) -> PerturbationReport:
    """Perturb the cloud inside an eta-ball and measure the response.

    Reports whether the chromatic Delaunay complex survives under the
    identity matching, the distortion of that matching, the largest
    per-simplex Delaunay-Rips value change when it does survive, and
    the bottleneck distance between the two Delaunay-Rips diagrams.
    """
    mu_t = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    moved = sample_perturbation(cloud.points, eta, seed)
    other = validate_chromatic_set(moved, mu_t)

    fc_a = del_rips_filtration(cloud, mu_t)
    fc_b = del_rips_filtration(other, mu_t)
    same = fc_a.complex == fc_b.complex
    dis = distortion(cloud.points, moved, range(cloud.n))
    gap: Optional[float] = None
    if same:
        gap = max((abs(fc_a.values[s] - fc_b.values[s]) for s in fc_a.complex),
                  default=0.0)
    bn = bottleneck_distance(compute_persistence(fc_a),
                             compute_persistence(fc_b))
    return PerturbationReport(eta=float(eta), seed=int(seed),
                              complex_isomorphic=bool(same),
                              distortion=float(dis), sup_value_gap=gap,
                              bottleneck=float(bn))
