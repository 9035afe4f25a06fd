"""Minimal stacks of concentric spheres and their KKT certificates.

A stack over a colour set gamma assigns one sphere per colour, all with
a common centre.  Rad is the largest radius and Out the colours whose
radius attains it.  The solver finds the unique smallest stack that
includes a simplex (each vertex on or inside its own colour's sphere)
and excludes a point set (each point on or outside its own colour's
sphere); points of colours outside gamma are ignored.

The optimisation is solved combinatorially: the active set (points on
their spheres) together with the set of maximal colours determines the
stack through a square linear system, so candidates are enumerated and
screened through the first-order optimality conditions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .core import ChromaticPointCloud, Simplex, circumsphere_through, simplex
from .errors import (
    DegenerateInput,
    InvalidGamma,
    NoStack,
    NumericalFailure,
)

OUT_REL_TOL = 1e-9
SIGN_TOL = 1e-9


def _on_sphere(dist: float, r: float, tol: float, scale: float) -> bool:
    """On-sphere test via squared distances.

    Squares keep the tolerance meaningful near radius zero, where the
    radius itself only carries half the significant digits.
    """
    return abs(dist * dist - r * r) <= 2.0 * tol * max(scale, 1.0)


@dataclass
class Stack:
    """Concentric spheres, one per colour in gamma."""

    centre: np.ndarray
    radii: Dict[int, float]

    @property
    def gamma(self) -> Tuple[int, ...]:
        return tuple(sorted(self.radii))

    @property
    def rad(self) -> float:
        return max(self.radii.values())

    @property
    def out(self) -> Tuple[int, ...]:
        r = self.rad
        tol = OUT_REL_TOL * max(r, 1.0)
        return tuple(sorted(m for m, rm in self.radii.items()
                            if rm >= r - tol))

    def dist(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(np.asarray(x, float) - self.centre))

    def restrict(self, gamma: Iterable[int]) -> "Stack":
        gs = tuple(sorted(gamma))
        if not set(gs) <= set(self.radii):
            raise InvalidGamma(f"{gs} not within stack colours {self.gamma}")
        return Stack(self.centre.copy(), {m: self.radii[m] for m in gs})


@dataclass
class KKTCertificate:
    """Multipliers indexed by the points on their own spheres."""

    lambdas: Dict[int, float]
    on: Tuple[int, ...]
    out_colours: Tuple[int, ...]

    def front(self, tol: float = SIGN_TOL) -> Tuple[int, ...]:
        return tuple(sorted(v for v, l in self.lambdas.items() if l > tol))

    def back(self, tol: float = SIGN_TOL) -> Tuple[int, ...]:
        return tuple(sorted(v for v, l in self.lambdas.items() if l < -tol))


def min_enclosing_ball(points) -> Tuple[np.ndarray, float]:
    """Smallest ball containing the points (Welzl's recursion)."""
    pts = [np.asarray(p, float) for p in points]
    if not pts:
        raise DegenerateInput("cannot bound an empty point set")
    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(pts) + 64))
    try:
        centre, r2 = _welzl(pts, [], len(pts))
    finally:
        sys.setrecursionlimit(old)
    return centre, float(np.sqrt(max(r2, 0.0)))


def _boundary_ball(R: List[np.ndarray]) -> Tuple[np.ndarray, float]:
    if not R:
        return np.zeros(0), -1.0
    try:
        c, r = circumsphere_through(np.array(R))
    except DegenerateInput:
        # nearly dependent boundary set: fall back to the widest pair
        best = (R[0], 0.0)
        for a, b in itertools.combinations(R, 2):
            d2 = float(((a - b) ** 2).sum())
            if d2 > best[1]:
                best = ((a + b) / 2.0, d2)
        return best[0], best[1] / 4.0
    return c, r * r


def _welzl(P: List[np.ndarray], R: List[np.ndarray], n: int):
    if n == 0 or (R and len(R) == len(R[0]) + 1):
        return _boundary_ball(R)
    p = P[n - 1]
    c, r2 = _welzl(P, R, n - 1)
    if r2 >= 0.0:
        gap = float(((p - c) ** 2).sum())
        if gap <= r2 * (1.0 + 1e-12) + 1e-30:
            return c, r2
    return _welzl(P, R + [p], n - 1)


# ---------------------------------------------------------------------------
# the combinatorial stack solver


def _canonical_radii(rad: float, centre: np.ndarray, pts: np.ndarray,
                     exc_by_colour: Dict[int, List[int]],
                     colours_needed: Iterable[int],
                     radii: Dict[int, float]) -> None:
    """Fill radii for colours without active constraints.

    Convention: the largest admissible radius, min(Rad, distance to the
    nearest excluded point of that colour).  This makes a stack agree
    with the restriction of its own extension.
    """
    for m in colours_needed:
        if m in radii:
            continue
        r = rad
        for x in exc_by_colour.get(m, []):
            r = min(r, float(np.linalg.norm(pts[x] - centre)))
        radii[m] = r


def _solve_candidate(pts: np.ndarray, mu: Sequence[int], b_idx: List[int],
                     out_set: Tuple[int, ...], scale: float):
    """Solve the stationarity system for active set b_idx, maximal colours out_set.

    Unknowns: centre z, one squared-radius offset u_m per constrained
    colour, one multiplier per active point.  Returns (z, u, lam) or
    None when the system is singular or inconsistent.
    """
    d = pts.shape[1]
    gamma_b = sorted({mu[v] for v in b_idx})
    u_cols = sorted(set(out_set) | set(gamma_b))
    u_pos = {m: d + i for i, m in enumerate(u_cols)}
    nb = len(b_idx)
    nvar = d + len(u_cols) + nb
    rows: List[np.ndarray] = []
    rhs: List[float] = []
    # each active point lies on its colour's sphere
    for v in b_idx:
        row = np.zeros(nvar)
        row[:d] = 2.0 * pts[v]
        row[u_pos[mu[v]]] = -1.0
        rows.append(row)
        rhs.append(float(pts[v] @ pts[v]))
    # stationarity: z is the lambda-combination of active points
    for i in range(d):
        row = np.zeros(nvar)
        row[i] = 1.0
        for k, v in enumerate(b_idx):
            row[d + len(u_cols) + k] = -pts[v][i]
        rows.append(row)
        rhs.append(0.0)
    # per-colour multiplier sums: zero off the maximal colours
    for m in gamma_b:
        if m in out_set:
            continue
        row = np.zeros(nvar)
        for k, v in enumerate(b_idx):
            if mu[v] == m:
                row[d + len(u_cols) + k] = 1.0
        rows.append(row)
        rhs.append(0.0)
    # grand total over the maximal colours is one
    row = np.zeros(nvar)
    for k, v in enumerate(b_idx):
        if mu[v] in out_set:
            row[d + len(u_cols) + k] = 1.0
    rows.append(row)
    rhs.append(1.0)
    # the maximal colours share one radius
    out_sorted = sorted(out_set)
    for m1, m2 in zip(out_sorted, out_sorted[1:]):
        row = np.zeros(nvar)
        row[u_pos[m1]] = 1.0
        row[u_pos[m2]] = -1.0
        rows.append(row)
        rhs.append(0.0)

    a = np.array(rows)
    b = np.array(rhs)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    resid = float(np.linalg.norm(a @ sol - b))
    # the multipliers blow up when the centre runs far from the cloud,
    # so the admissible residual scales with the solution magnitude
    bound = 1e-7 * max(scale * scale, 1.0, float(np.abs(sol).max()))
    if not np.isfinite(sol).all() or resid > bound:
        return None
    z = sol[:d]
    u = {m: float(sol[u_pos[m]]) for m in u_cols}
    lam = {v: float(sol[d + len(u_cols) + k]) for k, v in enumerate(b_idx)}
    return z, u, lam


def min_stack(cloud: ChromaticPointCloud, sigma: Simplex,
              exclude: Iterable[int],
              mu: Optional[Sequence[int]] = None
              ) -> Tuple[Stack, KKTCertificate]:
    """Smallest stack including sigma and excluding the given points.

    Raises NoStack when the constraints are unsatisfiable and
    NumericalFailure when no candidate passes the optimality screen for
    a feasible instance.
    """
    mu = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    sig = simplex(sigma)
    if not sig:
        raise InvalidGamma("sigma must be a nonempty simplex")
    pts = cloud.points
    d = pts.shape[1]
    scale = cloud.scale
    tol = 1e-9 * scale
    gamma = tuple(sorted({mu[v] for v in sig}))
    exc_all = sorted(set(int(x) for x in exclude))
    exc = [x for x in exc_all if mu[x] in gamma]
    exc_by_colour: Dict[int, List[int]] = {}
    for x in exc:
        exc_by_colour.setdefault(mu[x], []).append(x)
    sig_by_colour: Dict[int, List[int]] = {}
    for v in sig:
        sig_by_colour.setdefault(mu[v], []).append(v)

    forced = sorted(set(sig) & set(exc))       # on both sides: pinned on-sphere
    free_sig = [v for v in sig if v not in set(forced)]
    free_exc = [x for x in exc if x not in set(forced)]
    max_b = d + len(gamma)

    # convexity makes the optimality screen sufficient, so the first
    # passing candidate is the global optimum
    for nf in range(0, len(free_sig) + 1):
        for f in itertools.combinations(free_sig, nf):
            if not forced and not f:
                continue  # some included vertex must be active
            room = max_b - len(forced) - nf
            if room < 0:
                continue
            for ng in range(0, min(room, len(free_exc)) + 1):
                for g in itertools.combinations(free_exc, ng):
                    b_idx = sorted(set(forced) | set(f) | set(g))
                    for no in range(1, len(gamma) + 1):
                        for out_set in itertools.combinations(gamma, no):
                            cand = _evaluate_candidate(
                                pts, mu, sig, sig_by_colour, exc,
                                exc_by_colour, gamma, b_idx, out_set,
                                scale, tol)
                            if cand is not None:
                                return cand
    # distinguish genuinely infeasible constraints from solver failure
    if _stack_feasible(pts, sig_by_colour, exc_by_colour, tol):
        raise NumericalFailure(
            "no candidate passed the optimality screen",
            witness={"sigma": list(sig), "exclude": exc_all})
    raise NoStack("inclusion and exclusion constraints are incompatible",
                  witness={"sigma": list(sig), "exclude": exc_all})


def _evaluate_candidate(pts, mu, sig, sig_by_colour, exc, exc_by_colour,
                        gamma, b_idx, out_set, scale, tol):
    sol = _solve_candidate(pts, mu, b_idx, out_set, scale)
    if sol is None:
        return None
    z, u, lam = sol
    z2 = float(z @ z)
    p = z2 - u[out_set[0]]
    # squared quantities grow like rad^2 when the centre runs far from
    # the cloud, so every squared comparison scales with their size
    mag = max(scale, 1.0, abs(p))
    if p < -2.0 * tol * mag:
        return None
    rad = float(np.sqrt(max(p, 0.0)))
    radii: Dict[int, float] = {}
    for m, um in u.items():
        r2 = z2 - um
        if r2 < -2.0 * tol * mag:
            return None
        if r2 > p + 2.0 * tol * mag:
            return None
        radii[m] = float(np.sqrt(max(min(r2, p), 0.0)))
    # re-derive radii from actual distances to the active points; the
    # algebraic route loses half the digits near radius zero
    by_colour: Dict[int, List[float]] = {}
    for v in b_idx:
        by_colour.setdefault(mu[v], []).append(
            float(np.linalg.norm(pts[v] - z)))
    for m, ds in by_colour.items():
        if max(ds) - min(ds) > np.sqrt(2.0 * tol * mag) + tol:
            return None
        radii[m] = sum(ds) / len(ds)
    rad = max((radii[m] for m in out_set if m in by_colour), default=rad)
    for m in out_set:
        radii[m] = rad
    _canonical_radii(rad, z, pts, exc_by_colour, gamma, radii)
    radii = {m: radii[m] for m in gamma}
    # primal feasibility, in squared distances (see _on_sphere)
    slack = 2.0 * tol * mag
    for m in gamma:
        rm2 = radii[m] ** 2
        for v in sig_by_colour.get(m, []):
            if float(((pts[v] - z) ** 2).sum()) > rm2 + slack:
                return None
        for x in exc_by_colour.get(m, []):
            if float(((pts[x] - z) ** 2).sum()) < rm2 - slack:
                return None
    # multiplier signs
    sig_set, exc_set = set(sig), set(exc)
    for v, l in lam.items():
        if l > SIGN_TOL and v not in sig_set:
            return None
        if l < -SIGN_TOL and v not in exc_set:
            return None
    weight = max(1.0, sum(abs(l) for l in lam.values()))
    for m in out_set:
        if sum(l for v, l in lam.items() if mu[v] == m) \
                < -(SIGN_TOL + 1e-14 * weight):
            return None
    stack = Stack(z, radii)
    on = tuple(sorted(
        v for v in set(sig) | exc_set
        if _on_sphere(float(np.linalg.norm(pts[v] - z)), radii[mu[v]],
                      tol, mag)))
    lambdas = {v: lam.get(v, 0.0) for v in on}
    cert = KKTCertificate(lambdas=lambdas, on=on, out_colours=stack.out)
    if not verify_kkt(pts, mu, sig, exc, stack, cert,
                      tol=1e-7 * max(scale, 1.0)):
        return None
    return stack, cert


def _stack_feasible(pts, sig_by_colour, exc_by_colour, tol) -> bool:
    """LP feasibility: is there any centre admitting a valid stack?"""
    d = pts.shape[1]
    rows, rhs = [], []
    for m, vs in sig_by_colour.items():
        for v in vs:
            for x in exc_by_colour.get(m, []):
                row = np.zeros(d + 1)
                row[:d] = 2.0 * (pts[x] - pts[v])
                row[d] = 1.0  # slack to be maximised
                rows.append(row)
                rhs.append(float(pts[x] @ pts[x] - pts[v] @ pts[v]))
    if not rows:
        return True
    c = np.zeros(d + 1)
    c[d] = -1.0
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=[(None, None)] * d + [(None, 1.0)],
                  method="highs")
    return bool(res.success) and float(res.x[d]) >= -tol


def verify_kkt(points, mu: Sequence[int], sigma: Simplex,
               exclude: Iterable[int], stack: Stack, cert: KKTCertificate,
               tol: float = 1e-7) -> bool:
    """Independent check of the stack optimality conditions.

    Checks primal feasibility, that the centre is the multiplier
    combination of the active points, the multiplier sign pattern and
    the per-colour sum conditions.
    """
    pts = np.asarray(points, float)
    sig = simplex(sigma)
    gamma = set(stack.radii)
    if {mu[v] for v in sig} != gamma:
        return False
    exc = [x for x in sorted(set(exclude)) if mu[x] in gamma]
    z = stack.centre
    scale = max(1.0, float(np.abs(pts).max()))
    # squared distances reach rad^2, so that sets the comparison scale
    # when the centre sits far outside the cloud
    mag = max(scale, stack.rad ** 2)
    slack = 2.0 * tol * mag
    # primal feasibility and the on-sets, in squared distances
    for v in sig:
        if float(((pts[v] - z) ** 2).sum()) > stack.radii[mu[v]] ** 2 + slack:
            return False
    for x in exc:
        if float(((pts[x] - z) ** 2).sum()) < stack.radii[mu[x]] ** 2 - slack:
            return False
    on = set(cert.on)
    for v in on:
        if not _on_sphere(float(np.linalg.norm(pts[v] - z)),
                          stack.radii[mu[v]], tol, mag):
            return False
    if set(cert.lambdas) - on:
        return False
    # stationarity; multipliers blow up with the centre distance, so
    # the residual is measured relative to their total weight
    comb = np.zeros_like(z)
    for v, l in cert.lambdas.items():
        comb += l * pts[v]
    weight = max(1.0, sum(abs(l) for l in cert.lambdas.values()))
    if np.linalg.norm(comb - z) > tol * max(scale, 1e-7 * weight):
        return False
    # sign pattern
    sig_set, exc_set = set(sig), set(exc)
    for v, l in cert.lambdas.items():
        if l > SIGN_TOL and v not in sig_set:
            return False
        if l < -SIGN_TOL and v not in exc_set:
            return False
    out = set(stack.out)
    # sums of huge near-cancelling multipliers carry roundoff of order
    # eps * weight, so the sum tolerances grow with the weight too
    sum_tol = SIGN_TOL * 10 + 1e-14 * weight
    total = 0.0
    for m in gamma:
        sm = sum(l for v, l in cert.lambdas.items() if mu[v] == m)
        if m in out:
            if sm < -sum_tol:
                return False
            total += sm
        else:
            if abs(sm) > sum_tol:
                return False
    return abs(total - 1.0) <= sum_tol


def extend_stack(stack: Stack, cloud: ChromaticPointCloud,
                 exclude: Iterable[int],
                 mu: Optional[Sequence[int]] = None) -> Stack:
    """Extension to all colours 0..s without changing Rad or existing spheres.

    Every missing colour receives the largest admissible radius:
    min(Rad, distance to the nearest excluded point of that colour).
    """
    mu = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    s = max(mu)
    exc_by_colour: Dict[int, List[int]] = {}
    for x in sorted(set(int(i) for i in exclude)):
        exc_by_colour.setdefault(mu[x], []).append(x)
    radii = dict(stack.radii)
    _canonical_radii(stack.rad, stack.centre, cloud.points, exc_by_colour,
                     range(s + 1), radii)
    return Stack(stack.centre.copy(), radii)


def lift_correspondence(stack: Stack, d: int) -> Tuple[np.ndarray, float]:
    """Sphere in R^(d+s) whose colour-flat sections give the stack.

    The stack must carry all colours 0..s.  Colour m's flat sits at
    height e_m in the lifted coordinates, so the section radii satisfy
    r_m^2 = R^2 - |t - e_m|^2 for the lifted centre (z, t).
    """
    gamma = stack.gamma
    s = len(gamma) - 1
    if gamma != tuple(range(s + 1)):
        raise InvalidGamma("correspondence needs a full stack over 0..s")
    r0sq = stack.radii[0] ** 2
    t = np.array([(stack.radii[m] ** 2 - r0sq + 1.0) / 2.0
                  for m in range(1, s + 1)])
    rsq = r0sq + float(t @ t)
    centre = np.concatenate([stack.centre, t])
    return centre, float(np.sqrt(max(rsq, 0.0)))


def inverse_correspondence(centre, radius: float, d: int, s: int,
                           tol: float = 1e-9) -> Stack:
    """Stack of colour-flat sections of a sphere in R^(d+s)."""
    c = np.asarray(centre, float)
    if c.shape[0] != d + s:
        raise InvalidGamma(f"centre must live in R^{d + s}")
    t = c[d:]
    radii = {}
    for m in range(s + 1):
        e = np.zeros(s)
        if m > 0:
            e[m - 1] = 1.0
        r2 = radius * radius - float((t - e) @ (t - e))
        if r2 < -tol * max(radius * radius, 1.0):
            raise NoStack(f"sphere misses the colour-{m} flat")
        radii[m] = float(np.sqrt(max(r2, 0.0)))
    return Stack(c[:d].copy(), radii)
