"""Slow, independent reference implementations used to cross-check solvers.

Everything here trades speed for transparency: exhaustive subset
enumeration and grid search only, no shared code paths with the
production solvers.
"""
from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import ChromaticPointCloud, Simplex, simplex
from .errors import MissingSimplex, NoStack, SizeLimitExceeded

ORACLE_MAX_POINTS = 12


def brute_force_meb(points) -> Tuple[np.ndarray, float]:
    """Smallest enclosing ball by subset enumeration.

    The optimum is the smallest circumsphere of some support subset of
    at most d+1 points, so every candidate subset is tried.
    """
    pts = np.asarray(points, float)
    n, d = pts.shape
    if n > ORACLE_MAX_POINTS + 4:
        raise SizeLimitExceeded(f"oracle limited to {ORACLE_MAX_POINTS + 4} points")
    scale = max(float(np.abs(pts).max()), 1.0)
    best: Optional[Tuple[float, np.ndarray]] = None
    for k in range(1, min(n, d + 1) + 1):
        for sub in itertools.combinations(range(n), k):
            centre, radius = _circumsphere_subset(pts[list(sub)])
            if centre is None:
                continue
            dmax = float(np.linalg.norm(pts - centre, axis=1).max())
            if dmax <= radius + 1e-9 * scale:
                if best is None or radius < best[0]:
                    best = (radius, centre)
    assert best is not None
    return best[1], best[0]


def _circumsphere_subset(pts: np.ndarray):
    """Min-radius sphere through the points; None when dependent."""
    if pts.shape[0] == 1:
        return pts[0].copy(), 0.0
    base = pts[0]
    diffs = pts[1:] - base
    gram = diffs @ diffs.T
    rhs = 0.5 * np.einsum("ij,ij->i", diffs, diffs)
    try:
        sol = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        return None, None
    if not np.isfinite(sol).all():
        return None, None
    cond = np.linalg.cond(gram)
    if cond > 1e12:
        return None, None
    centre = base + sol @ diffs
    return centre, float(np.linalg.norm(centre - base))


def brute_force_min_stack(cloud: ChromaticPointCloud, sigma: Simplex,
                          exclude: Iterable[int],
                          mu: Optional[Sequence[int]] = None,
                          grid: int = 21, rounds: int = 10
                          ) -> Tuple[np.ndarray, Dict[int, float], float]:
    """Grid search for the smallest stack; returns (centre, radii, rad).

    At a fixed centre z the optimal radius for colour m is the largest
    distance to the included vertices of that colour, and z is feasible
    when no excluded point of colour m comes closer than that.  The
    objective max_m r_m(z) is minimised by iterated grid refinement.

    Raises NoStack when no feasible centre is found at the finest level.
    """
    mu = tuple(int(c) for c in (mu if mu is not None else cloud.colours))
    sig = simplex(sigma)
    pts = cloud.points
    d = pts.shape[1]
    gamma = sorted({mu[v] for v in sig})
    exc = [x for x in sorted(set(int(i) for i in exclude))
           if mu[x] in gamma and x not in set(sig)]
    sig_pts = {m: pts[[v for v in sig if mu[v] == m]] for m in gamma}
    exc_pts = {m: pts[[x for x in exc if mu[x] == m]] for m in gamma}
    forced = sorted(set(sig) & set(int(i) for i in exclude))
    forced_by_colour = {m: [x for x in forced if mu[x] == m] for m in gamma}

    span_pts = pts[list(sig) + exc]
    span = float(np.max(span_pts.max(axis=0) - span_pts.min(axis=0)))
    span = span if span > 0 else 1.0
    slack = 1e-7 * span

    # forced points of one colour sit on the same sphere, which pins the
    # centre to an affine subspace; search only inside it
    eq_rows, eq_rhs = [], []
    for m in gamma:
        fm = forced_by_colour[m]
        for x, y in zip(fm, fm[1:]):
            eq_rows.append(2.0 * (pts[y] - pts[x]))
            eq_rhs.append(float(pts[y] @ pts[y] - pts[x] @ pts[x]))
    if eq_rows:
        a = np.array(eq_rows)
        b = np.array(eq_rhs)
        z0, *_ = np.linalg.lstsq(a, b, rcond=None)
        if np.linalg.norm(a @ z0 - b) > 1e-8 * span * span:
            raise NoStack("on-sphere constraints are inconsistent")
        _, svals, vt = np.linalg.svd(a)
        rank = int(np.sum(svals > 1e-9 * max(svals[0], 1.0)))
        basis = vt[rank:].T  # (d, d-rank)
    else:
        z0 = span_pts.mean(axis=0)
        basis = np.eye(d)
    ndim = basis.shape[1]

    def raw(zs: np.ndarray):
        # zs: (k, d) candidate centres; returns (rad, worst violation)
        k = zs.shape[0]
        rad = np.zeros(k)
        violation = np.zeros(k)
        for m in gamma:
            dmax = np.linalg.norm(
                zs[:, None, :] - sig_pts[m][None, :, :], axis=2).max(axis=1)
            if forced_by_colour[m]:
                don = np.linalg.norm(
                    zs[:, None, :] - pts[forced_by_colour[m]][None, :, :],
                    axis=2).min(axis=1)
                violation = np.maximum(violation, dmax - don)
            if exc_pts[m].shape[0]:
                dmin = np.linalg.norm(
                    zs[:, None, :] - exc_pts[m][None, :, :], axis=2).min(axis=1)
                violation = np.maximum(violation, dmax - dmin)
            rad = np.maximum(rad, dmax)
        return rad, violation

    def objective(zs: np.ndarray):
        rad, violation = raw(zs)
        rad = rad.copy()
        rad[violation > slack] = np.inf
        return rad

    if ndim == 0:
        rad = objective(z0[None, :])
        if not np.isfinite(rad[0]):
            raise NoStack("grid search found no feasible centre")
        centre, best_rad = z0, float(rad[0])
    else:
        lo = np.full(ndim, -3.0 * span)
        hi = np.full(ndim, 3.0 * span)
        centre = None
        best_rad = np.inf
        done, widens, grid_eff = 0, 0, grid
        while done < rounds:
            axes = [np.linspace(lo[i], hi[i], grid_eff) for i in range(ndim)]
            mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
            ws = mesh.reshape(-1, ndim)
            zs = z0[None, :] + ws @ basis.T
            rad = objective(zs)
            j = int(np.argmin(rad))
            if not np.isfinite(rad[j]):
                # the feasible region may lie outside the box (widen) or
                # be a thin pocket inside it (densify)
                dense = 2 * grid_eff - 1
                if centre is None and widens < 4:
                    lo, hi = 2.0 * lo, 2.0 * hi
                    widens += 1
                    continue
                if centre is None and dense ** ndim <= 300_000:
                    grid_eff = dense
                    widens += 1
                    continue
                if centre is None:
                    break
                break
            w_best = ws[j]
            # widen the box while the optimum sits on its boundary
            if done == 0 and widens < 6 and (
                    np.any(np.isclose(w_best, lo))
                    or np.any(np.isclose(w_best, hi))):
                lo, hi = 2.0 * lo, 2.0 * hi
                widens += 1
                continue
            centre = zs[j]
            best_rad = float(rad[j])
            width = (hi - lo) * (2.5 / (grid - 1))
            lo = w_best - width / 2
            hi = w_best + width / 2
            done += 1
        if centre is None:
            # last resort: the constrained solve can walk into a thin
            # feasible pocket the grid never samples
            starts = [pts[list(sig)].mean(axis=0)] + [pts[v] for v in sig]
            for start in starts:
                z, r = _polish(pts, gamma, sig, exc, forced, mu,
                               start, np.inf, raw, 1e-9 * span)
                if np.isfinite(r):
                    centre, best_rad = z, r
                    break
            if centre is None:
                raise NoStack("grid search found no feasible centre")
        else:
            # the polish must not buy radius with the coarse search slack
            centre, best_rad = _polish(
                pts, gamma, sig, exc, forced, mu, centre, best_rad, raw,
                1e-9 * span)
    radii = {m: float(np.linalg.norm(sig_pts[m] - centre, axis=1).max())
             for m in gamma}
    return centre, radii, best_rad


def _polish(pts, gamma, sig, exc, forced, mu, centre, best_rad, raw, slack):
    """Polish the grid optimum with a smooth constrained solve.

    In squared radii the problem is a smooth nonlinear program:
    minimise t subject to t >= rho_m, |z - v|^2 <= rho_m for included
    vertices (equality for the pinned ones) and |z - x|^2 >= rho_m for
    excluded points.  SLSQP started at the grid optimum recovers the
    digits the shrinking grid loses along valley floors.
    """
    from scipy.optimize import minimize

    d = pts.shape[1]
    pos = {m: d + i for i, m in enumerate(gamma)}
    forced_set = set(forced)

    def split(x):
        return x[:d], x[d:d + len(gamma)], x[d + len(gamma)]

    cons = []
    for i, m in enumerate(gamma):
        cons.append({"type": "ineq",
                     "fun": lambda x, i=i: x[d + len(gamma)] - x[d + i]})
    for v in sig:
        m = mu[v]
        kind = "eq" if v in forced_set else "ineq"
        cons.append({"type": kind,
                     "fun": lambda x, v=v, m=m:
                     x[pos[m]] - float(((x[:d] - pts[v]) ** 2).sum())})
    for x_ in exc:
        m = mu[x_]
        cons.append({"type": "ineq",
                     "fun": lambda x, v=x_, m=m:
                     float(((x[:d] - pts[v]) ** 2).sum()) - x[pos[m]]})

    rho0 = [max(float(((centre - pts[v]) ** 2).sum())
                for v in sig if mu[v] == m) for m in gamma]
    x0 = np.concatenate([centre, rho0, [max(rho0)]])
    res = minimize(lambda x: x[-1], x0, method="SLSQP", constraints=cons,
                   options={"maxiter": 500, "ftol": 1e-16})
    # keep whichever candidate is feasible at the tight slack; the grid
    # value may have bought some radius with the coarse search slack
    cands = []
    if np.isfinite(best_rad):
        rg, vg = raw(centre[None, :])
        if vg[0] <= slack:
            cands.append((float(rg[0]), centre))
    if res.x is not None and np.isfinite(res.x).all():
        z = res.x[:d]
        rp, vp = raw(z[None, :])
        if vp[0] <= slack:
            cands.append((float(rp[0]), z))
    if cands:
        best = min(cands, key=lambda t: t[0])
        return best[1], best[0]
    return centre, best_rad


def brute_force_alpha_value(cloud: ChromaticPointCloud, sigma: Simplex,
                            mu: Optional[Sequence[int]] = None,
                            grid: int = 21, rounds: int = 10) -> float:
    """Alpha filtration value of sigma via grid search with E = X.

    Raises MissingSimplex when no stack through sigma avoiding the rest
    of the cloud exists.
    """
    try:
        _, _, rad = brute_force_min_stack(
            cloud, sigma, range(cloud.n), mu=mu, grid=grid, rounds=rounds)
    except NoStack:
        raise MissingSimplex(
            "no stack includes the simplex and excludes the cloud",
            witness=list(simplex(sigma)))
    return rad
