"""Filtrations on chromatic complexes.

Values are radius functions: Cech (smallest enclosing ball), Rips
(half diameter), their restrictions to the chromatic Delaunay complex,
and the chromatic alpha filtration whose value at sigma is the radius
of the smallest stack through sigma that avoids the rest of the cloud.
The selective variant exposes the full radius function Rad_{mu,E} for
an arbitrary excluded set E, including its solver certificates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .core import (
    ChromaticPointCloud,
    Simplex,
    SimplicialComplex,
    all_faces,
    faces,
    simplex,
)
from .delaunay import chromatic_delaunay
from .errors import (
    InvalidGamma,
    NoStack,
    NonMonotoneFiltration,
    SizeLimitExceeded,
)
from .stacks import KKTCertificate, Stack, min_enclosing_ball, min_stack

FULL_COMPLEX_MAX_POINTS = 16


@dataclass
class FilteredComplex:
    """A simplicial complex with a monotone value per simplex."""

    complex: SimplicialComplex
    values: Dict[Simplex, float]
    d: int
    s: int
    kind: str
    certificates: Optional[Dict[Simplex, Tuple[Stack, KKTCertificate]]] = \
        field(default=None, repr=False)

    def value(self, sigma) -> float:
        return self.values[simplex(sigma)]

    def sorted_simplices(self) -> List[Tuple[Simplex, float]]:
        """Canonical order: value, then dimension, then vertex list."""
        return sorted(((s, self.values[s]) for s in self.complex),
                      key=lambda t: (t[1], len(t[0]), t[0]))

    def sublevel(self, r: float) -> SimplicialComplex:
        return SimplicialComplex(
            (s for s, v in self.values.items() if v <= r), check=False)

    def check_monotone(self, tol: float = 0.0) -> None:
        for s in self.complex:
            for tau in faces(s):
                if self.values[tau] > self.values[s] + tol:
                    raise NonMonotoneFiltration(
                        f"value({tau}) > value({s})",
                        witness={"face": list(tau), "coface": list(s)})

    def max_value(self) -> float:
        return max(self.values.values(), default=0.0)


def _full_complex_simplices(n: int, dim_cap: Optional[int]) -> List[Simplex]:
    if n > FULL_COMPLEX_MAX_POINTS and (dim_cap is None or dim_cap > 2):
        raise SizeLimitExceeded(
            f"full complex on {n} points exceeds the {FULL_COMPLEX_MAX_POINTS}"
            " point guard; pass a dim_cap")
    top = n - 1 if dim_cap is None else min(dim_cap, n - 1)
    out: List[Simplex] = []
    for k in range(1, top + 2):
        out.extend(itertools.combinations(range(n), k))
    return out


def cech_filtration(cloud: ChromaticPointCloud,
                    dim_cap: Optional[int] = None) -> FilteredComplex:
    """Smallest-enclosing-ball radius on the full simplex."""
    sims = _full_complex_simplices(cloud.n, dim_cap)
    values = {s: _cech_value(cloud.points, s) for s in sims}
    fc = FilteredComplex(SimplicialComplex(sims, check=False), values,
                         cloud.d, cloud.s, "cech")
    fc.check_monotone(tol=1e-12 * cloud.scale)
    _enforce_monotone(fc)
    return fc


def rips_filtration(cloud: ChromaticPointCloud,
                    dim_cap: Optional[int] = None) -> FilteredComplex:
    """Half the diameter on the full simplex."""
    sims = _full_complex_simplices(cloud.n, dim_cap)
    dm = np.linalg.norm(
        cloud.points[:, None, :] - cloud.points[None, :, :], axis=2)
    values = {s: _rips_value(dm, s) for s in sims}
    return FilteredComplex(SimplicialComplex(sims, check=False), values,
                           cloud.d, cloud.s, "rips")


def _cech_value(points: np.ndarray, sig: Simplex) -> float:
    if len(sig) == 1:
        return 0.0
    if len(sig) == 2:
        return 0.5 * float(np.linalg.norm(points[sig[0]] - points[sig[1]]))
    _, r = min_enclosing_ball(points[list(sig)])
    return r


def _rips_value(dm: np.ndarray, sig: Simplex) -> float:
    if len(sig) == 1:
        return 0.0
    return 0.5 * float(max(dm[a][b] for a, b in itertools.combinations(sig, 2)))


def _enforce_monotone(fc: FilteredComplex) -> None:
    # clamp roundoff-level inversions so sublevels stay complexes
    for s in sorted(fc.complex, key=len):
        for tau in faces(s):
            if fc.values[tau] > fc.values[s]:
                fc.values[s] = fc.values[tau]


def del_cech_filtration(cloud: ChromaticPointCloud,
                        mu: Optional[Sequence[int]] = None) -> FilteredComplex:
    """Cech radii restricted to the chromatic Delaunay complex."""
    tri = chromatic_delaunay(cloud, mu)
    values = {s: _cech_value(cloud.points, s) for s in tri.complex}
    s_top = max(mu) if mu is not None else cloud.s
    fc = FilteredComplex(tri.complex, values, cloud.d, s_top, "del-cech")
    fc.check_monotone(tol=1e-12 * cloud.scale)
    _enforce_monotone(fc)
    return fc


def del_rips_filtration(cloud: ChromaticPointCloud,
                        mu: Optional[Sequence[int]] = None) -> FilteredComplex:
    """Half diameters restricted to the chromatic Delaunay complex."""
    tri = chromatic_delaunay(cloud, mu)
    dm = np.linalg.norm(
        cloud.points[:, None, :] - cloud.points[None, :, :], axis=2)
    values = {s: _rips_value(dm, s) for s in tri.complex}
    s_top = max(mu) if mu is not None else cloud.s
    return FilteredComplex(tri.complex, values, cloud.d, s_top, "del-rips")


def chromatic_alpha_filtration(cloud: ChromaticPointCloud,
                               mu: Optional[Sequence[int]] = None
                               ) -> FilteredComplex:
    """Alpha values on the chromatic Delaunay complex.

    Processed top dimension first: a simplex whose smallest
    circumstack is empty of the cloud gets that radius, everything
    else inherits the smallest value among its cofacets.
    """
    mu_t = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    tri = chromatic_delaunay(cloud, mu_t)
    pts = cloud.points
    tol = 1e-9 * cloud.scale
    by_colour = {m: np.nonzero(np.array(mu_t) == m)[0] for m in set(mu_t)}
    values: Dict[Simplex, float] = {}
    for dim in range(tri.complex.dim, -1, -1):
        for sig in tri.complex.simplices(dim):
            stack, _ = min_stack(cloud, sig, sig, mu_t)
            if _empty_of_cloud(stack, pts, by_colour, sig, tol):
                values[sig] = stack.rad
            else:
                cof = [values[c] for c in tri.complex.cofaces(sig)
                       if len(c) == dim + 2]
                if cof:
                    values[sig] = min(cof)
                else:
                    # no cofacet to inherit from: solve with E = X
                    stack, _ = min_stack(cloud, sig, range(cloud.n), mu_t)
                    values[sig] = stack.rad
    s_top = max(mu_t)
    fc = FilteredComplex(tri.complex, values, cloud.d, s_top, "alpha")
    fc.check_monotone(tol=1e-8 * max(cloud.scale, fc.max_value()))
    _enforce_monotone(fc)
    return fc


def _empty_of_cloud(stack: Stack, pts: np.ndarray, by_colour, sig: Simplex,
                    tol: float) -> bool:
    sig_set = set(sig)
    slack = 2.0 * tol * max(1.0, float(np.abs(pts).max()))
    for m, rm in stack.radii.items():
        idx = [i for i in by_colour[m] if i not in sig_set]
        if not idx:
            continue
        dist2 = ((pts[idx] - stack.centre) ** 2).sum(axis=1)
        if np.any(dist2 < rm * rm - slack):
            return False
    return True


def selective_alpha_filtration(cloud: ChromaticPointCloud,
                               exclude: Iterable[int],
                               mu: Optional[Sequence[int]] = None,
                               dim_cap: Optional[int] = None,
                               keep_certificates: bool = False
                               ) -> FilteredComplex:
    """Radius function of the smallest stack through sigma avoiding E.

    The domain is every simplex over the cloud for which such a stack
    exists.  With E empty this is the Cech filtration; with E = X it is
    the chromatic alpha filtration on the Delaunay complex.
    """
    mu_t = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    exc = sorted(set(int(x) for x in exclude))
    sims = _full_complex_simplices(cloud.n, dim_cap)
    values: Dict[Simplex, float] = {}
    certs: Dict[Simplex, Tuple[Stack, KKTCertificate]] = {}
    present: Set[Simplex] = set()
    for sig in sims:
        try:
            stack, cert = min_stack(cloud, sig, exc, mu_t)
        except NoStack:
            continue
        present.add(sig)
        values[sig] = stack.rad
        if keep_certificates:
            certs[sig] = (stack, cert)
    # the domain must be closed under faces
    for sig in present:
        for tau in faces(sig):
            if tau not in present:
                raise NonMonotoneFiltration(
                    f"face {tau} of {sig} has no stack",
                    witness={"face": list(tau), "coface": list(sig)})
    fc = FilteredComplex(SimplicialComplex(present, check=False), values,
                         cloud.d, max(mu_t), "selective-alpha",
                         certificates=certs if keep_certificates else None)
    # near-infeasible instances push radii far beyond the cloud extent,
    # so the solver tolerance must scale with the values themselves
    fc.check_monotone(tol=1e-8 * max(cloud.scale, fc.max_value()))
    _enforce_monotone(fc)
    return fc


def gamma_subfiltration(fc: FilteredComplex,
                        colours: Sequence[int],
                        gamma_sets: Iterable[Iterable[int]]
                        ) -> FilteredComplex:
    """Restrict to simplices whose colour set belongs to the family.

    The family must be closed under nonempty subsets, otherwise the
    result would not be a complex.
    """
    fam = {tuple(sorted(set(int(m) for m in g))) for g in gamma_sets}
    if not fam or () in fam:
        raise InvalidGamma("family must consist of nonempty colour sets")
    for g in fam:
        for k in range(1, len(g)):
            for sub in itertools.combinations(g, k):
                if sub not in fam:
                    raise InvalidGamma(
                        f"family misses subset {sub} of {g}",
                        witness=list(sub))
    keep = {}
    for sig in fc.complex:
        g = tuple(sorted({colours[v] for v in sig}))
        if g in fam:
            keep[sig] = fc.values[sig]
    return FilteredComplex(SimplicialComplex(keep, check=True), dict(keep),
                           fc.d, fc.s, fc.kind + "-sub")


def verify_nesting(rips: FilteredComplex, cech: FilteredComplex,
                   d: Optional[int] = None) -> Tuple[bool, float]:
    """Check Rips <= Cech <= delta * Rips with delta = sqrt(2d/(d+1)).

    Returns (all simplices within the sandwich, worst observed ratio
    Cech / Rips over positive-diameter simplices).
    """
    dd = d if d is not None else cech.d
    delta = float(np.sqrt(2.0 * dd / (dd + 1.0)))
    ok = True
    worst = 1.0
    eps = 1e-9
    for sig in cech.complex:
        if sig not in rips.complex:
            continue
        rv, cv = rips.values[sig], cech.values[sig]
        if cv < rv - eps * max(rv, 1.0):
            ok = False
        if rv > 0:
            ratio = cv / rv
            worst = max(worst, ratio)
            if ratio > delta + eps:
                ok = False
    return ok, worst
