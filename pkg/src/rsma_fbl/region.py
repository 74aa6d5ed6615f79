"""
Achievable rate regions of the two-user uplink at fixed per-user powers.

RSMA regions are traced by moving U1's power between its two streams
(``beta`` is the fraction given to s11); no time sharing is used for any
scheme.  ``n = math.inf`` gives the infinite-blocklength picture.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import DecodeOrder, OmaScheme, noma_sinrs, oma_sinrs, power_ratio_alpha, rsma_sinrs
from .errors import DomainError
from .fbl import fbl_rate, fbl_rate_clamped, shannon_capacity
from .reliability import StreamReliability, oma_user_rate


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise DomainError(f"rates must be non-negative: {self}")


@dataclass(frozen=True)
class RegionBoundary:
    """Upper-right boundary of a rate region.

    ``points`` run left to right (r1 ascending) with r2 non-increasing.
    ``coords`` holds the sweep coordinate (power split, power fraction
    or resource fraction) that produced each point, when there is one.
    """

    points: tuple
    scheme: str
    n: float = math.inf
    coords: tuple = field(default=None)

    def __post_init__(self):
        if len(self.points) == 0:
            raise DomainError("empty boundary")
        r1 = np.array([p.r1 for p in self.points])
        r2 = np.array([p.r2 for p in self.points])
        if np.any(np.diff(r1) < -1e-12) or np.any(np.diff(r2) > 1e-12):
            raise DomainError(f"{self.scheme} boundary is not monotone")
        if self.coords is not None and len(self.coords) != len(self.points):
            raise DomainError("coords and points differ in length")

    @property
    def r1(self):
        return np.array([p.r1 for p in self.points])

    @property
    def r2(self):
        return np.array([p.r2 for p in self.points])


def pareto_boundary(r1, r2, scheme, n=math.inf, coords=None):
    """Keep the Pareto-efficient subset of a cloud of rate pairs."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    order = np.lexsort((-r2, -r1))  # r1 descending, ties by r2 descending
    keep = []
    best = -np.inf
    for i in order:
        if r2[i] > best:
            keep.append(i)
            best = r2[i]
    keep.reverse()
    points = tuple(RatePoint(float(r1[i]), float(r2[i])) for i in keep)
    kept_coords = None if coords is None else tuple(float(coords[i]) for i in keep)
    return RegionBoundary(points, scheme, n, kept_coords)


def ibl_mac_pentagon(p1, p2, sys):
    """Gaussian MAC capacity region at powers (p1, p2), as four vertices."""
    s1 = p1 * sys.g1 / sys.noise_var
    s2 = p2 * sys.g2 / sys.noise_var
    c1_alone = shannon_capacity(s1)
    c2_alone = shannon_capacity(s2)
    c1_noisy = shannon_capacity(s1 / (s2 + 1))
    c2_noisy = shannon_capacity(s2 / (s1 + 1))
    pts = [(0.0, c2_alone), (c1_noisy, c2_alone), (c1_alone, c2_noisy), (c1_alone, 0.0)]
    return RegionBoundary(tuple(RatePoint(a, b) for a, b in pts), "mac", math.inf)


def pentagon_sum_rate(p1, p2, sys):
    return shannon_capacity((p1 * sys.g1 + p2 * sys.g2) / sys.noise_var)


def rsma_fbl_sweep(n, p1_total, p2, sys, s=None, num_points=201):
    """Raw power-split sweep: returns ``(beta, r1, r2, unclamped_sum)`` arrays.

    ``r1``/``r2`` use clamped stream rates; ``unclamped_sum`` is the
    algebraic sum of the three stream rates.
    """
    if num_points < 2:
        raise DomainError("num_points must be at least 2")
    s = s or StreamReliability()
    beta = np.linspace(0.0, 1.0, num_points)
    p11 = beta * p1_total
    p12 = (1.0 - beta) * p1_total
    g11, g22, g12 = rsma_sinrs(p11, p12, np.full_like(beta, p2), sys)
    r11 = fbl_rate(n, g11, s.eps11)
    r12 = fbl_rate(n, g12, s.eps12)
    r22 = fbl_rate(n, g22, s.eps22)
    r1 = np.maximum(r11, 0) + np.maximum(r12, 0)
    r2 = np.maximum(r22, 0)
    return beta, r1, r2, r11 + r12 + r22


def rsma_fbl_boundary(n, p1_total, p2, sys, s=None, num_points=201):
    """RSMA region boundary obtained by sweeping the s11/s12 power split."""
    beta, r1, r2, _ = rsma_fbl_sweep(n, p1_total, p2, sys, s, num_points)
    return pareto_boundary(r1, r2, "rsma", n, beta)


def noma_fbl_points(n, p1, p2, sys, eps=(1e-6, 1e-6), order=DecodeOrder.U1_FIRST):
    """Single NOMA operating point at the given powers (no time sharing)."""
    gamma1, gamma2 = noma_sinrs(p1, p2, sys, order)
    return RatePoint(fbl_rate_clamped(n, gamma1, eps[0]), fbl_rate_clamped(n, gamma2, eps[1]))


def noma_fbl_curve(n, p1, p2, sys, eps=(1e-6, 1e-6), order=DecodeOrder.U1_FIRST, num_points=201):
    """NOMA points obtained by backing off the first-decoded user's interferer.

    For NOMA-12, U2's power goes from 0 to ``p2`` with U1 at ``p1``; for
    NOMA-21 the roles swap.  Returns ``(fraction, r1, r2)`` arrays.
    """
    frac = np.linspace(0.0, 1.0, num_points)
    if DecodeOrder(order) is DecodeOrder.U1_FIRST:
        gamma1, gamma2 = noma_sinrs(np.full_like(frac, p1), frac * p2, sys, order)
    else:
        gamma1, gamma2 = noma_sinrs(frac * p1, np.full_like(frac, p2), sys, order)
    return frac, fbl_rate_clamped(n, gamma1, eps[0]), fbl_rate_clamped(n, gamma2, eps[1])


def oma_rate_pair(n, p1, p2, alpha, sys, eps, scheme):
    """Per-user OMA rates (clamped) for a resource fraction ``alpha``."""
    alpha = np.asarray(alpha, dtype=float)
    gamma1, gamma2 = oma_sinrs(p1, p2, alpha, sys, scheme)
    r1 = oma_user_rate(alpha * n, gamma1, alpha, eps[0])
    r2 = oma_user_rate((1 - alpha) * n, gamma2, 1 - alpha, eps[1])
    return np.maximum(r1, 0.0), np.maximum(r2, 0.0)


def oma_fbl_points(n, p1, p2, sys, eps=(1e-6, 1e-6), scheme=OmaScheme.FDMA,
                   alpha_rule="power_ratio", num_points=201):
    """FDMA/TDMA rate points.

    ``alpha_rule`` is ``"power_ratio"`` (alpha = P1/(P1+P2)), a number
    in (0, 1) for a fixed split, or ``"sweep"`` to trace ``num_points``
    splits across the open interval.
    """
    if alpha_rule == "sweep":
        alphas = np.linspace(0.0, 1.0, num_points + 2)[1:-1]
    elif alpha_rule == "power_ratio":
        alphas = np.array([power_ratio_alpha(p1, p2)])
    else:
        alphas = np.array([float(alpha_rule)])
    r1, r2 = oma_rate_pair(n, p1, p2, alphas, sys, eps, scheme)
    return [RatePoint(float(a), float(b)) for a, b in zip(r1, r2)]


def region_contains(outer, point, tol=1e-9):
    """True if ``point`` lies in the region under ``outer`` (axes included).

    The region is everything dominated by the piecewise-linear boundary:
    for r1 left of the first vertex the first vertex's r2 applies, and
    nothing right of the last vertex is inside.
    """
    if not isinstance(outer, RegionBoundary):
        raise DomainError("outer must be a RegionBoundary")
    r1 = outer.r1
    r2 = outer.r2
    if not (np.all(np.isfinite(r1)) and np.all(np.isfinite(r2))):
        raise DomainError("boundary has non-finite rates")
    if point.r1 > r1[-1] + tol:
        return False
    # on vertical steps np.interp may pick the lower branch; take the max
    # over the tolerance window instead
    x = min(max(point.r1, r1[0]), r1[-1])
    window = (r1 >= x - tol) & (r1 <= x + tol)
    ceiling = float(np.interp(x, r1, r2))
    if np.any(window):
        ceiling = max(ceiling, float(r2[window].max()))
    if point.r1 <= r1[0]:
        ceiling = max(ceiling, r2[0])
    return point.r2 <= ceiling + tol
