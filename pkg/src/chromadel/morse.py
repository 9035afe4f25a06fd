"""Generalized discrete Morse machinery and collapse verification.

A generalized vector field partitions a complex into intervals
[bottom, top] of the face poset.  When the quotient of the Hasse
diagram by the intervals is acyclic the field is a gradient, its
singleton intervals are the critical simplices, and removing a union
of non-critical intervals is a sequence of elementary collapses.

Two gradients are built geometrically: the vertical gradient pairing
the two chromatic Delaunay complexes of an elementary colour
refinement across a membrane, and the radius-function gradient whose
intervals are the level sets [Front(S), Incl(S*)] of a stack solver
certificate.  Intersecting such gradients gives the collapses
DelCech_r(X, nu) onto DelCech_r(X, mu) and DelCech_r(X, mu) onto
Alpha_r(X, mu), which execute_collapse verifies step by step.
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
    canonical_colouring,
    chromatic_lift,
    circumsphere_through,
    colour_classes,
    elementary_refinement_chain,
    faces,
    is_refinement,
    simplex,
)
from .delaunay import affine_hull_projection, delaunay_triangulation
from .errors import (
    NotCollapsible,
    NotInterval,
    NotRefinement,
    NotTransverse,
    NotUnionOfIntervals,
    NumericalFailure,
    PartitionFailure,
    StuckCollapse,
)
from .filtrations import FilteredComplex
from .stacks import extend_stack


@dataclass(frozen=True)
class Interval:
    """All simplices eta with bottom <= eta <= top."""

    bottom: Simplex
    top: Simplex

    def __post_init__(self):
        if not (set(self.bottom) <= set(self.top)) or not self.bottom:
            raise NotInterval(f"bad interval [{self.bottom}, {self.top}]")

    @property
    def is_singleton(self) -> bool:
        return self.bottom == self.top

    def __contains__(self, sigma) -> bool:
        s = set(sigma)
        return set(self.bottom) <= s <= set(self.top)

    def simplices(self) -> List[Simplex]:
        extra = sorted(set(self.top) - set(self.bottom))
        out = []
        for k in range(len(extra) + 1):
            for add in itertools.combinations(extra, k):
                out.append(simplex(self.bottom + add))
        return out


class GeneralizedVectorField:
    """A partition of a complex into face-poset intervals."""

    def __init__(self, complex_: SimplicialComplex,
                 intervals: Iterable[Interval], check: bool = True):
        self.complex = complex_
        self.intervals: List[Interval] = list(intervals)
        self._owner: Dict[Simplex, int] = {}
        for i, iv in enumerate(self.intervals):
            for s in iv.simplices():
                if check and s in self._owner:
                    raise PartitionFailure(
                        f"{s} lies in two intervals",
                        witness={"simplex": list(s)})
                self._owner[s] = i
        if check:
            missing = [s for s in complex_ if s not in self._owner]
            alien = [s for s in self._owner if s not in complex_]
            if missing or alien:
                raise PartitionFailure(
                    "intervals do not partition the complex",
                    witness={"missing": [list(s) for s in missing[:5]],
                             "alien": [list(s) for s in alien[:5]]})

    def interval_of(self, sigma) -> Interval:
        return self.intervals[self._owner[simplex(sigma)]]

    def owner_index(self, sigma) -> int:
        return self._owner[simplex(sigma)]

    def critical(self) -> List[Simplex]:
        return sorted((iv.bottom for iv in self.intervals if iv.is_singleton),
                      key=lambda s: (len(s), s))


def check_acyclicity(v: GeneralizedVectorField) -> bool:
    """Is the interval quotient of the Hasse diagram acyclic?"""
    n = len(v.intervals)
    succ: List[Set[int]] = [set() for _ in range(n)]
    indeg = [0] * n
    for s in v.complex:
        i = v.owner_index(s)
        for tau in faces(s):
            j = v.owner_index(tau)
            if i != j and j not in succ[i]:
                succ[i].add(j)
                indeg[j] += 1
    queue = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while queue:
        i = queue.pop()
        seen += 1
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    return seen == n


# ---------------------------------------------------------------------------
# upper and lower faces of a geometric simplex


@dataclass
class FaceSplit:
    """Upper/lower classification of the faces of one simplex.

    Local vertex indices throughout.  upper_dropped collects the
    vertices whose opposite facet is upper; a proper face is upper
    exactly when the dropped vertex set is nonempty and contained in
    upper_dropped, and dually for lower.
    """

    vertex_count: int
    upper_dropped: Tuple[int, ...]
    lower_dropped: Tuple[int, ...]

    @property
    def sigma_star(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.vertex_count)
                     if i not in set(self.upper_dropped))

    @property
    def sigma_lower_star(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.vertex_count)
                     if i not in set(self.lower_dropped))

    def is_upper(self, face: Sequence[int]) -> bool:
        dropped = set(range(self.vertex_count)) - set(face)
        return bool(dropped) and dropped <= set(self.upper_dropped)

    def is_lower(self, face: Sequence[int]) -> bool:
        dropped = set(range(self.vertex_count)) - set(face)
        return bool(dropped) and dropped <= set(self.lower_dropped)


def upper_lower_faces(coords, z, on_parallel: str = "raise") -> FaceSplit:
    """Classify the facets of a simplex relative to a direction.

    A facet is upper when its outward normal (within the affine hull
    of the simplex) has positive inner product with z, lower when
    negative.  A vanishing product means the direction is parallel to
    the facet; depending on on_parallel such facets raise NotTransverse
    or count as "upper" or "lower".
    """
    pts = np.asarray(coords, float)
    k1 = pts.shape[0]
    if k1 < 2:
        raise NotTransverse("a vertex has no facets")
    base = pts[0]
    diffs = pts[1:] - base
    u, svals, vt = np.linalg.svd(diffs, full_matrices=False)
    scale = max(float(svals[0]), 1e-300)
    rank = int(np.sum(svals > 1e-9 * scale))
    if rank < k1 - 1:
        raise NotTransverse("simplex is degenerate")
    basis = vt[:k1 - 1]                      # orthonormal hull directions
    local = (pts - base) @ basis.T           # (k1, k1-1)
    z_loc = np.asarray(z, float) @ basis.T
    zn = float(np.linalg.norm(z_loc))
    if zn <= 1e-12:
        raise NotTransverse("direction is orthogonal to the simplex")
    upper, lower = [], []
    for i in range(k1):
        facet = np.array([local[j] for j in range(k1) if j != i])
        n_vec = _outward_normal(facet, local[i])
        dot = float(n_vec @ z_loc) / (zn * float(np.linalg.norm(n_vec)))
        if abs(dot) <= 1e-9:
            if on_parallel == "upper":
                upper.append(i)
                continue
            if on_parallel == "lower":
                lower.append(i)
                continue
            raise NotTransverse(
                f"direction is parallel to facet opposite vertex {i}",
                witness={"dropped": i})
        (upper if dot > 0 else lower).append(i)
    return FaceSplit(vertex_count=k1, upper_dropped=tuple(upper),
                     lower_dropped=tuple(lower))


def _outward_normal(facet: np.ndarray, opposite: np.ndarray) -> np.ndarray:
    """Normal of the facet within the hull, pointing away from opposite."""
    c = facet[0]
    if facet.shape[0] == 1:
        n = c - opposite
        return n
    dirs = facet[1:] - c
    u, svals, vt = np.linalg.svd(dirs, full_matrices=True)
    null = vt[facet.shape[0] - 1:]
    # the hull has dimension facet rows, so the null space is a line
    n = null[0]
    if float(n @ (opposite - c)) > 0:
        n = -n
    return n


# ---------------------------------------------------------------------------
# the vertical gradient of an elementary refinement


@dataclass
class VerticalGradient:
    field: GeneralizedVectorField
    morse_values: Dict[Simplex, float]
    membrane: SimplicialComplex
    zeta: Tuple[int, ...]
    heights: Dict[Simplex, float]


def _split_class(mu: Sequence[int], nu: Sequence[int]) -> Tuple[int, ...]:
    """0/1 marker of the split-off class of an elementary refinement."""
    mu_c = canonical_colouring(mu)
    nu_c = canonical_colouring(nu)
    if not is_refinement(nu_c, mu_c):
        raise NotRefinement("second colouring does not refine the first")
    split = None
    for c, members in sorted(colour_classes(mu_c).items()):
        subs = sorted({nu_c[i] for i in members})
        if len(subs) == 2:
            if split is not None:
                raise NotRefinement("refinement is not elementary")
            split = (members, subs)
        elif len(subs) > 2:
            raise NotRefinement("refinement is not elementary")
    if split is None:
        raise NotRefinement("refinement does not split any class")
    members, subs = split
    # mark the subclass with the larger label
    marked = {i for i in members if nu_c[i] == subs[1]}
    return tuple(1 if i in marked else 0 for i in range(len(mu_c)))


def quotient_height(coords: np.ndarray, sigma: Simplex) -> float:
    """Last coordinate of the circumcentre of a top-dimensional cell."""
    centre, _ = circumsphere_through(coords[list(sigma)])
    return float(centre[-1])


def _vertical_intervals(coords: np.ndarray, k: SimplicialComplex, big: int):
    """Intervals pairing each top cell with its minimal upper/lower face.

    The classifying direction is the last basis vector.  Lifted point
    sets carry structurally vertical facets (several classes can share
    a flat), and a vertical facet separates two cells on the same side
    of the membrane, so it is resolved towards the side its own cell
    lies on; the partition check below catches any wrong resolution.
    """
    intervals: List[Interval] = []
    values: Dict[Simplex, float] = {}
    heights: Dict[Simplex, float] = {}
    covered: Set[Simplex] = set()
    z_dir = np.zeros(big)
    z_dir[-1] = 1.0
    base_dim = big - 1
    for top in k.simplices(big):
        h = quotient_height(coords, top)
        heights[top] = h
        if abs(h - 0.5) <= 1e-12:
            raise NumericalFailure(
                f"cell {top} has circumcentre exactly at mid-level",
                witness=list(top))
        above = h > 0.5
        split = upper_lower_faces(coords[list(top)], z_dir,
                                  on_parallel="upper" if above else "lower")
        local = split.sigma_star if above else split.sigma_lower_star
        bottom = simplex(top[i] for i in local)
        iv = Interval(bottom=bottom, top=top)
        intervals.append(iv)
        val = (h - 0.5) ** 2 + base_dim
        for eta in iv.simplices():
            if eta in values:
                raise PartitionFailure(
                    f"{eta} claimed by two cells", witness=list(eta))
            values[eta] = val
            covered.add(eta)
    return intervals, values, heights, covered


def vertical_gradient(cloud: ChromaticPointCloud, mu: Sequence[int],
                      nu: Sequence[int]) -> VerticalGradient:
    """Gradient collapsing Del(X, nu) onto the membrane Del(X, mu).

    nu must be an elementary refinement of mu.  The finer complex is
    realised as the Delaunay complex of the mu-lift with one extra 0/1
    coordinate marking the split-off class; a top cell pairs with its
    minimal upper or lower face according to whether its circumcentre
    sits above or below the mid-level 1/2, and everything left over is
    the membrane, which must coincide with Del(X, mu).
    """
    zeta = _split_class(mu, nu)
    mu_c = canonical_colouring(mu)
    w = chromatic_lift(cloud, mu_c)
    coords0 = np.hstack([w, np.array(zeta, float)[:, None]])
    big = coords0.shape[1]         # D + 1
    tri = delaunay_triangulation(coords0)
    k = tri.complex
    from .delaunay import chromatic_delaunay

    membrane_tri = chromatic_delaunay(cloud, mu)
    membrane = membrane_tri.complex

    intervals, values, heights, covered = _vertical_intervals(coords0, k, big)
    singles = [s for s in k if s not in covered]
    if set(singles) != membrane.simplex_set():
        raise PartitionFailure(
            "membrane does not match the coarser Delaunay complex",
            witness={"extra": [list(s) for s in singles
                               if s not in membrane][:5],
                     "missing": [list(s) for s in membrane
                                 if s not in set(singles)][:5]})
    for s in singles:
        intervals.append(Interval(bottom=s, top=s))
        values[s] = float(len(s) - 1)
    gvf = GeneralizedVectorField(k, intervals)
    return VerticalGradient(field=gvf, morse_values=values,
                            membrane=membrane, zeta=zeta, heights=heights)


# ---------------------------------------------------------------------------
# the gradient of a stack radius function


def filtration_gradient(cloud: ChromaticPointCloud, fc: FilteredComplex,
                        exclude: Iterable[int],
                        mu: Optional[Sequence[int]] = None
                        ) -> GeneralizedVectorField:
    """Level-set intervals [Front(S), Incl(S*)] of a radius function.

    fc must carry solver certificates.  The extension S* adds to the
    stack the widest admissible sphere for every missing colour; its
    inclusion set is the interval top.
    """
    if fc.certificates is None:
        raise NotInterval("filtration has no solver certificates")
    mu_t = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    exc = sorted(set(int(x) for x in exclude))
    tol = 1e-9 * cloud.scale
    slack = 2.0 * tol * max(1.0, float(np.abs(cloud.points).max()))
    seen: Dict[Tuple[Simplex, Simplex], Interval] = {}
    for sig in fc.complex:
        stack, cert = fc.certificates[sig]
        star = extend_stack(stack, cloud, exc, mu_t)
        front = simplex(cert.front())
        incl = []
        for i in range(cloud.n):
            r = star.radii[mu_t[i]]
            d2 = float(((cloud.points[i] - star.centre) ** 2).sum())
            if d2 <= r * r + slack:
                incl.append(i)
        top = simplex(incl)
        if not front or not set(front) <= set(sig) <= set(top):
            raise PartitionFailure(
                f"simplex {sig} escapes its level interval",
                witness={"simplex": list(sig), "front": list(front),
                         "top": list(top)})
        seen.setdefault((front, top), Interval(bottom=front, top=top))
    # interval tops must themselves belong to the complex
    for iv in seen.values():
        if iv.top not in fc.complex:
            raise PartitionFailure(
                f"interval top {iv.top} is not in the complex",
                witness=list(iv.top))
    return GeneralizedVectorField(fc.complex, seen.values())


# ---------------------------------------------------------------------------
# combining, restricting, collapsing


def sum_refine(k: SimplicialComplex, v: GeneralizedVectorField,
               w: GeneralizedVectorField) -> GeneralizedVectorField:
    """Common refinement {I cap J} of two gradients over a common complex.

    Each simplex of k must lie in both source complexes; the pairwise
    intersections of its two intervals, clipped to k, must again tile
    k into intervals.
    """
    groups: Dict[Tuple[Simplex, Simplex], List[Simplex]] = {}
    for s in k:
        i = v.interval_of(s)
        j = w.interval_of(s)
        bottom = simplex(set(i.bottom) | set(j.bottom))
        top = simplex(set(i.top) & set(j.top))
        if not set(bottom) <= set(s) <= set(top):
            raise NotInterval(
                f"{s} falls outside the intersection interval",
                witness={"simplex": list(s), "bottom": list(bottom),
                         "top": list(top)})
        groups.setdefault((bottom, top), []).append(s)
    intervals = []
    for (bottom, top), members in groups.items():
        iv = Interval(bottom=bottom, top=top)
        expected = set(iv.simplices())
        if expected != set(members):
            raise NotInterval(
                f"interval [{bottom}, {top}] is only partially inside",
                witness={"bottom": list(bottom), "top": list(top)})
        intervals.append(iv)
    return GeneralizedVectorField(k, intervals)


def restrict_gradient(v: GeneralizedVectorField,
                      sub: SimplicialComplex) -> GeneralizedVectorField:
    """Restrict to a subcomplex whose complement is a union of intervals."""
    keep, drop = [], []
    for iv in v.intervals:
        inside = [s in sub for s in iv.simplices()]
        if all(inside):
            keep.append(iv)
        elif not any(inside):
            drop.append(iv)
        else:
            raise NotUnionOfIntervals(
                f"interval [{iv.bottom}, {iv.top}] straddles the subcomplex",
                witness={"bottom": list(iv.bottom), "top": list(iv.top)})
    return GeneralizedVectorField(sub, keep)


def refine_to_pairs(iv: Interval) -> List[Tuple[Simplex, Simplex]]:
    """Split a non-singleton interval into free-face pairs.

    The apex is the smallest vertex of top minus bottom; every member
    without the apex pairs with itself plus the apex.
    """
    if iv.is_singleton:
        raise NotInterval("cannot pair a singleton interval")
    apex = min(set(iv.top) - set(iv.bottom))
    pairs = []
    for eta in iv.simplices():
        if apex not in set(eta):
            pairs.append((eta, simplex(set(eta) | {apex})))
    return pairs


# ---------------------------------------------------------------------------
# end-to-end verification of the two collapse statements


def _critical_radii(values: Iterable[float], scale: float = 1.0) -> List[float]:
    """Sample radii: just past every distinct value, midpoints, one beyond.

    Values are computed by two different solvers, so they agree only to
    roundoff; near-coincident values are merged and each sample sits far
    enough above its value to absorb the noise on both sides.
    """
    eps = 1e-7 * max(scale, 1.0)
    merged: List[float] = []
    for v in sorted(set(float(v) for v in values)):
        if merged and v - merged[-1] <= 4.0 * eps:
            continue
        merged.append(v)
    if not merged:
        return [1.0]
    out = [v + eps for v in merged]
    out.extend(0.5 * (a + b) for a, b in zip(merged, merged[1:]))
    out.append(merged[-1] + 1.0)
    return sorted(out)


def verify_collapse_theorems(cloud: ChromaticPointCloud,
                             mu: Optional[Sequence[int]] = None,
                             nu: Optional[Sequence[int]] = None,
                             radii: Optional[Sequence[float]] = None
                             ) -> List[dict]:
    """Certify the collapse statements across a refinement chain.

    For every elementary refinement step (coarse, fine) on the chain
    from mu to nu and every sampled radius r, the sublevel complex
    DelCech_r(X, fine) collapses onto DelCech_r(X, coarse) along the
    common refinement of the Cech level-set gradient and the vertical
    gradient, whose critical simplices must be exactly the coarse
    sublevel complex.  For every colouring on the chain and every r,
    DelCech_r collapses onto Alpha_r along the common refinement of
    the Cech and alpha level-set gradients.

    Every collapse is executed move by move.  Raises on any failure;
    returns one record per verified collapse.
    """
    from .core import validate_chromatic_set
    from .delaunay import chromatic_delaunay
    from .filtrations import del_cech_filtration, selective_alpha_filtration

    mu_t = tuple(int(c) for c in (mu if mu is not None
                                  else [0] * cloud.n))
    nu_t = tuple(int(c) for c in (nu if nu is not None else cloud.colours))
    chain = elementary_refinement_chain(mu_t, nu_t)

    mono = validate_chromatic_set(cloud.points, [0] * cloud.n)
    cech_cert = selective_alpha_filtration(mono, [], keep_certificates=True)
    w_cech = filtration_gradient(mono, cech_cert, [])

    records: List[dict] = []
    del_cech = {c: del_cech_filtration(cloud, c) for c in chain}

    for coarse, fine in zip(chain, chain[1:]):
        vg = vertical_gradient(cloud, coarse, fine)
        fine_tri = chromatic_delaunay(cloud, fine)
        if vg.field.complex != fine_tri.complex:
            raise PartitionFailure(
                "split-coordinate complex differs from the finer "
                "chromatic Delaunay complex")
        fc_fine, fc_coarse = del_cech[fine], del_cech[coarse]
        rs = radii if radii is not None else _critical_radii(
            list(fc_fine.values.values()) + list(fc_coarse.values.values()),
            cloud.scale)
        for r in rs:
            k_r = fc_fine.sublevel(r)
            l_r = fc_coarse.sublevel(r)
            lam = sum_refine(k_r, w_cech, vg.field)
            if not check_acyclicity(lam):
                raise StuckCollapse(
                    f"refined gradient is cyclic at radius {r}")
            if set(lam.critical()) != l_r.simplex_set():
                raise NotCollapsible(
                    f"critical cells differ from the coarse sublevel at {r}",
                    witness={"radius": r})
            trace = execute_collapse(k_r, lam, l_r, values=fc_fine.values)
            records.append({
                "kind": "refinement", "coarse": coarse, "fine": fine,
                "radius": r, "removed": len(k_r) - len(l_r),
                "collapse_steps": len(trace.steps)})

    for col in chain:
        alpha = selective_alpha_filtration(
            cloud, range(cloud.n), col, keep_certificates=True)
        w_alpha = filtration_gradient(cloud, alpha, range(cloud.n), col)
        fc = del_cech[col]
        if alpha.complex != fc.complex:
            raise PartitionFailure(
                "alpha domain differs from the chromatic Delaunay complex")
        rs = radii if radii is not None else _critical_radii(
            list(fc.values.values()) + list(alpha.values.values()),
            cloud.scale)
        for r in rs:
            k_r = fc.sublevel(r)
            l_r = alpha.sublevel(r)
            omega = sum_refine(k_r, w_cech, w_alpha)
            if not check_acyclicity(omega):
                raise StuckCollapse(
                    f"refined gradient is cyclic at radius {r}")
            # simplices entering the alpha filtration together stay a
            # non-singleton interval inside the target, so only ask
            # that every critical cell survives into it
            if not set(omega.critical()) <= l_r.simplex_set():
                raise NotCollapsible(
                    f"a critical cell escapes the alpha sublevel at {r}",
                    witness={"radius": r})
            trace = execute_collapse(k_r, omega, l_r, values=fc.values)
            records.append({
                "kind": "alpha", "colouring": col, "radius": r,
                "removed": len(k_r) - len(l_r),
                "collapse_steps": len(trace.steps)})
    return records


@dataclass
class CollapseTrace:
    """Elementary collapse steps, oldest first."""

    steps: List[Tuple[int, Simplex, Simplex]] = field(default_factory=list)

    def serialize(self) -> str:
        lines = []
        for dim, free, coface in self.steps:
            lines.append("{} | {} | {}".format(
                dim, " ".join(str(v) for v in free),
                " ".join(str(v) for v in coface)))
        return "\n".join(lines) + ("\n" if lines else "")


def execute_collapse(k: SimplicialComplex, v: GeneralizedVectorField,
                     sub: SimplicialComplex,
                     values: Optional[Dict[Simplex, float]] = None
                     ) -> CollapseTrace:
    """Collapse k onto sub along the intervals of v, step by step.

    k minus sub must be a union of non-singleton intervals of v.
    Intervals are processed so that an interval goes before everything
    it has codimension-one faces in (sources of the quotient order
    first, ties broken by Morse value when given, then dimension and
    vertex order); each interval is refined to free-face pairs and
    removed with the free-face property re-checked at every step.
    """
    removed_set = {s for s in k if s not in sub}
    if not removed_set:
        return CollapseTrace()
    ids: Set[int] = set()
    for s in removed_set:
        idx = v.owner_index(s)
        iv = v.intervals[idx]
        if iv.is_singleton:
            raise NotCollapsible(
                f"critical simplex {s} would have to be removed",
                witness=list(s))
        ids.add(idx)
    for idx in ids:
        for s in v.intervals[idx].simplices():
            if s not in removed_set:
                raise NotCollapsible(
                    f"interval of {v.intervals[idx].bottom} straddles "
                    "the subcomplex",
                    witness=list(v.intervals[idx].bottom))

    # quotient order among removed intervals: if interval A contains a
    # simplex with a facet in interval B, A must be removed first
    succ: Dict[int, Set[int]] = {i: set() for i in ids}
    indeg: Dict[int, int] = {i: 0 for i in ids}
    for s in removed_set:
        i = v.owner_index(s)
        for tau in faces(s):
            if tau not in removed_set:
                continue
            j = v.owner_index(tau)
            if i != j and i in ids and j in ids and j not in succ[i]:
                succ[i].add(j)
                indeg[j] += 1

    def sort_key(idx: int):
        iv = v.intervals[idx]
        val = values.get(iv.top, 0.0) if values else 0.0
        return (-val, -len(iv.top), iv.top)

    import heapq
    heap = [(sort_key(i), i) for i in ids if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (sort_key(j), j))
    if len(order) != len(ids):
        raise StuckCollapse("quotient order among removed intervals is cyclic")

    current = k.simplex_set()
    trace = CollapseTrace()
    for idx in order:
        iv = v.intervals[idx]
        pairs = refine_to_pairs(iv)
        pairs.sort(key=lambda p: (-len(p[0]), p[0]))
        for eta, eta_x in pairs:
            cofaces = [s for s in current
                       if len(s) > len(eta) and set(eta) < set(s)]
            if cofaces != [eta_x] and set(cofaces) != {eta_x}:
                raise StuckCollapse(
                    f"{eta} is not a free face (cofaces {cofaces[:4]})",
                    witness=list(eta))
            current.discard(eta)
            current.discard(eta_x)
            trace.steps.append((len(eta) - 1, eta, eta_x))
    if current != sub.simplex_set():
        raise StuckCollapse("collapse did not terminate at the subcomplex")
    return trace
