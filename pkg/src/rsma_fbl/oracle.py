"""
Brute-force reference for the minimum feasible blocklength.

Powers are enumerated on a uniform grid over [0, P_t] per dimension
(endpoints included) and every grid point is checked with the exact
throughput formulas, written out here from the rate primitives rather
than borrowed from the solver or the throughput module.  The minimum
blocklength is then the smallest integer blocklength any point supports, found
by a vectorised bisection per point.  That is valid because each
clamped effective throughput is non-decreasing in n; for FDMA/TDMA a
point's admissible totals are capped by the per-user box, so the
per-point search runs below that cap.

An optional zoom stage re-grids small boxes around the most promising
points, so that the answer approaches the continuous optimum instead
of the grid-restricted one.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleError
from .fbl import fbl_rate

SCHEMES = ("rsma", "noma12", "noma21", "fdma", "tdma")


@dataclass(frozen=True)
class GridSpec:
    """``power_steps`` intervals per power axis (so ``power_steps + 1`` points)."""

    power_steps: int = 64
    n_tol: float = 1.0
    refine_levels: int = 3
    refine_factor: int = 8
    refine_top: int = 8
    alpha_rule: object = "power_ratio"

    def __post_init__(self):
        if self.power_steps < 2:
            raise DomainError("power_steps must be at least 2")
        if not self.n_tol > 0:
            raise DomainError("n_tol must be positive")


def _pos(r):
    return np.maximum(r, 0.0)


def _axis(sys, steps):
    return np.linspace(0.0, sys.p_max, steps + 1)


def _rsma_points(sys, steps):
    a = _axis(sys, steps)
    p11, p12, p2 = (x.ravel() for x in np.meshgrid(a, a, a, indexing="ij"))
    keep = p11 + p12 <= sys.p_max * (1 + 1e-12)
    return np.stack([p11[keep], p12[keep], p2[keep]], axis=1)


def _pair_points(sys, steps):
    a = _axis(sys, steps)
    p1, p2 = (x.ravel() for x in np.meshgrid(a, a, indexing="ij"))
    return np.stack([p1, p2], axis=1)


def _oma_points(sys, steps, rule):
    pts = _pair_points(sys, steps)
    if rule == "power_ratio":
        total = pts.sum(axis=1)
        alpha = np.divide(pts[:, 0], total, out=np.zeros(len(pts)), where=total > 0)
    elif rule == "optimized":
        alphas = np.linspace(0.0, 1.0, steps + 1)[1:-1]
        pts = np.repeat(pts, len(alphas), axis=0)
        alpha = np.tile(alphas, len(pts) // len(alphas))
    else:
        alpha = np.full(len(pts), float(rule))
    ok = (alpha > 0) & (alpha < 1)
    return np.column_stack([pts[ok], alpha[ok]])


def _throughputs(n, pts, scheme, sys, eps, rule):
    """Exact effective throughputs (T1, T2) at every grid point, shape (N,) each."""
    g1, g2, s2n = sys.g1, sys.g2, sys.noise_var
    e11, e12, e22 = eps
    if scheme == "rsma":
        p11, p12, p2 = pts.T
        interf11 = p12 * g1 + p2 * g2 + s2n
        r11 = _pos(fbl_rate(n, p11 * g1 / interf11, e11))
        r22 = _pos(fbl_rate(n, p2 * g2 / (p12 * g1 + s2n), e22))
        r12 = _pos(fbl_rate(n, p12 * g1 / s2n, e12))
        # silent streams are not sent: on the p12 = 0 face the chain is NOMA-12,
        # on the p11 = 0 face NOMA-21 with s12 as U1's stream
        face12, face21 = p12 == 0, (p11 == 0) & (p12 > 0)
        msg1 = np.where(face12, e11 + e22, np.where(face21, e12, e11 + e12 + e22))
        msg2 = np.where(face12, e22, np.where(face21, e22 + e12, e11 + e22))
        return (1 - msg1) * n * (r11 + r12), (1 - msg2) * n * r22
    if scheme in ("noma12", "noma21"):
        p1, p2 = pts.T
        if scheme == "noma12":
            gam1 = p1 * g1 / (p2 * g2 + s2n)
            gam2 = p2 * g2 / s2n
            msg1, msg2 = e11 + e22, e22
        else:
            gam1 = p1 * g1 / s2n
            gam2 = p2 * g2 / (p1 * g1 + s2n)
            msg1, msg2 = e11, e22 + e11
        r1 = _pos(fbl_rate(n, gam1, e11))
        r2 = _pos(fbl_rate(n, gam2, e22))
        return (1 - msg1) * n * r1, (1 - msg2) * n * r2
    if scheme in ("fdma", "tdma"):
        p1, p2, alpha = pts.T
        n1, n2 = alpha * n, (1 - alpha) * n
        if scheme == "fdma":
            gam1 = p1 * g1 / (alpha * s2n)
            gam2 = p2 * g2 / ((1 - alpha) * s2n)
        else:
            gam1 = p1 * g1 / s2n
            gam2 = p2 * g2 / s2n
        # alpha * C(gamma) - sqrt(V/n_user) Q^-1(eps) log2 e, i.e. alpha*C - D(n_user)
        r1 = _pos(alpha * np.log2(1 + gam1) - (np.log2(1 + gam1) - fbl_rate(n1, gam1, e11)))
        r2 = _pos((1 - alpha) * np.log2(1 + gam2) - (np.log2(1 + gam2) - fbl_rate(n2, gam2, e22)))
        t1 = (1 - e11) * n1 * r1
        t2 = (1 - e22) * n2 * r2
        in_box = (n1 >= sys.n_min) & (n1 <= sys.n_max) & (n2 >= sys.n_min) & (n2 <= sys.n_max)
        return np.where(in_box, t1, -np.inf), np.where(in_box, t2, -np.inf)
    raise DomainError(f"unknown scheme {scheme!r}")


def _margins(n, pts, scheme, sys, eps, targets, rule):
    t1, t2 = _throughputs(n, pts, scheme, sys, eps, rule)
    m1 = (t1 - targets.t1_th) / max(targets.t1_th, 1.0)
    m2 = (t2 - targets.t2_th) / max(targets.t2_th, 1.0)
    return np.minimum(m1, m2)


def _eps_triple(eps):
    if hasattr(eps, "eps11"):
        return (eps.eps11, eps.eps12, eps.eps22)
    if np.ndim(eps) == 0:
        return (float(eps),) * 3
    eps = tuple(float(e) for e in eps)
    return eps if len(eps) == 3 else (eps[0], eps[0], eps[1])


def _n_bounds(scheme, sys):
    # FDMA/TDMA: each user's share lies in [n_min, n_max], so the total does too, doubled
    if scheme in ("fdma", "tdma"):
        return 2 * sys.n_min, 2 * sys.n_max
    return sys.n_min, sys.n_max


def _base_points(scheme, sys, grid):
    if scheme == "rsma":
        return _rsma_points(sys, grid.power_steps)
    if scheme in ("noma12", "noma21"):
        return _pair_points(sys, grid.power_steps)
    return _oma_points(sys, grid.power_steps, grid.alpha_rule)


def oracle_feasible(n, scheme, sys, eps, targets, grid=None, points=None):
    """True if some grid power allocation meets both thresholds at blocklength ``n``."""
    grid = grid or GridSpec()
    scheme = scheme.lower()
    pts = _base_points(scheme, sys, grid) if points is None else points
    m = _margins(n, pts, scheme, sys, _eps_triple(eps), targets, grid.alpha_rule)
    return bool(np.any(m >= 0))


def _point_caps(pts, scheme, sys):
    """Largest admissible total blocklength at each point (OMA shares must stay in the box)."""
    lo, hi = _n_bounds(scheme, sys)
    if scheme in ("fdma", "tdma"):
        alpha = pts[:, 2]
        return np.minimum(hi, sys.n_max / np.maximum(alpha, 1 - alpha))
    return np.full(len(pts), float(hi))


def _per_point_min(pts, scheme, sys, eps, targets, rule, lo, hi, tol):
    """Smallest n = lo + k*tol feasible at each point; inf where none is.

    Vectorised bisection over k.  Each point's throughputs are
    non-decreasing in n, so its feasible blocklengths form an interval
    that starts at the returned value and ends at its cap.
    """
    if len(pts) == 0:
        return np.empty(0)
    cap = np.minimum(_point_caps(pts, scheme, sys), hi)
    k_cap = np.floor((cap - lo) / tol + 1e-9)
    ok_cap = (k_cap >= 0) & (_margins(lo + np.maximum(k_cap, 0) * tol, pts, scheme, sys, eps, targets, rule) >= 0)
    k_lo = np.full(len(pts), -1.0)
    k_hi = np.where(ok_cap, k_cap, np.nan)
    live = ok_cap.copy()
    while True:
        active = live & (k_hi - k_lo > 1)
        if not np.any(active):
            break
        k = np.floor((k_lo + k_hi) / 2)
        idx = np.flatnonzero(active)
        good = _margins(lo + k[idx] * tol, pts[idx], scheme, sys, eps, targets, rule) >= 0
        k_hi[idx[good]] = k[idx[good]]
        k_lo[idx[~good]] = k[idx[~good]]
    return np.where(ok_cap, lo + k_hi * tol, np.inf)


def _zoom(centres, scheme, sys, grid, level):
    """Fine grids spanning one parent step either side of each centre."""
    parent = sys.p_max / grid.power_steps / grid.refine_factor ** (level - 1)
    offsets = np.linspace(-parent, parent, 2 * grid.refine_factor + 1)
    width = centres.shape[1]
    d = width - (1 if scheme in ("fdma", "tdma") and grid.alpha_rule == "optimized" else 0)
    out = []
    for c in centres:
        axes = [np.clip(c[j] + offsets, 0.0, sys.p_max) for j in range(d)]
        if d < width:
            axes.append(np.clip(c[d] + offsets / sys.p_max, 1e-9, 1 - 1e-9))
        mesh = np.stack([x.ravel() for x in np.meshgrid(*axes, indexing="ij")], axis=1)
        out.append(mesh)
    new = np.unique(np.concatenate(out), axis=0)
    if scheme == "rsma":
        new = new[new[:, 0] + new[:, 1] <= sys.p_max * (1 + 1e-12)]
    if scheme in ("fdma", "tdma") and grid.alpha_rule == "power_ratio":
        total = new[:, 0] + new[:, 1]
        alpha = np.divide(new[:, 0], total, out=np.zeros(len(new)), where=total > 0)
        ok = (alpha > 0) & (alpha < 1)
        new = np.column_stack([new[ok, 0], new[ok, 1], alpha[ok]])
    elif scheme in ("fdma", "tdma") and grid.alpha_rule != "optimized":
        new = np.column_stack([new[:, 0], new[:, 1], np.full(len(new), float(grid.alpha_rule))])
    return new


@functools.lru_cache(maxsize=256)
def _oracle_min_cached(scheme, sys, eps, targets, grid):
    lo, hi = _n_bounds(scheme, sys)
    pts = _base_points(scheme, sys, grid)
    need = _per_point_min(pts, scheme, sys, eps, targets, grid.alpha_rule, lo, hi, grid.n_tol)
    for level in range(1, grid.refine_levels + 1):
        best = need.min()
        if not np.isfinite(best) or best <= lo:
            break
        # zoom around the points closest to feasibility one step below the incumbent
        probe = best - grid.n_tol
        m = np.where(_point_caps(pts, scheme, sys) >= probe,
                     _margins(probe, pts, scheme, sys, eps, targets, grid.alpha_rule), -np.inf)
        top = np.argsort(-m)[: grid.refine_top]
        centres = pts[top][:, :2] if scheme in ("fdma", "tdma") and grid.alpha_rule != "optimized" else pts[top]
        fine = _zoom(centres, scheme, sys, grid, level)
        fine_need = _per_point_min(fine, scheme, sys, eps, targets, grid.alpha_rule, lo, best, grid.n_tol)
        pts = np.concatenate([pts, fine])
        need = np.concatenate([need, fine_need])
    return float(need.min()), pts, need


def oracle_min_blocklength(scheme, sys, eps, targets, grid=None):
    """Smallest blocklength (multiple of ``grid.n_tol`` above the box floor) any grid point supports.

    For FDMA/TDMA this is the total ``n1 + n2``; each user's share must
    lie in the blocklength box.

    Raises:
        InfeasibleError: if no grid point is feasible at the top of the box.
    """
    grid = grid or GridSpec()
    scheme = scheme.lower()
    if scheme == "noma":
        scheme = "noma12"
    if scheme not in SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}")
    best, _, _ = _oracle_min_cached(scheme, sys, _eps_triple(eps), targets, grid)
    if not math.isfinite(best):
        raise InfeasibleError(f"{scheme}: thresholds {targets} unreachable on the grid")
    return float(best)


def oracle_best_point(scheme, sys, eps, targets, grid=None):
    """Grid power allocation achieving :func:`oracle_min_blocklength` (for diagnostics)."""
    grid = grid or GridSpec()
    n = oracle_min_blocklength(scheme, sys, eps, targets, grid)
    _, pts, need = _oracle_min_cached(scheme.lower(), sys, _eps_triple(eps), targets, grid)
    return n, pts[int(np.argmin(need))]
