"""
Two-user uplink channel: system parameters and per-scheme SINRs.

RSMA splits U1's message into streams s11 and s12 and the receiver
decodes in the fixed order s11 -> s2 -> s12.  NOMA decodes one user
first while treating the other as noise.  FDMA/TDMA give each user an
orthogonal fraction ``alpha`` of the resource.

Powers, gains and noise are linear quantities; dB conversion lives at
the scenario/CLI boundary only.
"""

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


class DecodeOrder(enum.Enum):
    U1_FIRST = "12"
    U2_FIRST = "21"


class OmaScheme(enum.Enum):
    FDMA = "fdma"
    TDMA = "tdma"


@dataclass(frozen=True)
class SystemParams:
    """Channel gains, noise power, power budget and blocklength box."""

    g1: float = 1.0
    g2: float = 0.7
    noise_var: float = 1.0
    p_max: float = 1.0
    n_min: float = 100.0
    n_max: float = 3000.0

    def __post_init__(self):
        for name in ("g1", "g2", "noise_var", "p_max"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if not 0 < self.n_min <= self.n_max:
            raise DomainError(f"need 0 < n_min <= n_max, got [{self.n_min}, {self.n_max}]")
        if self.g1 < self.g2:
            warnings.warn("g1 < g2: U1 is not the stronger user", stacklevel=2)

    @classmethod
    def from_db(cls, p_max_db, **kwargs):
        return cls(p_max=float(db_to_linear(p_max_db)), **kwargs)


@dataclass(frozen=True)
class PowerAllocation:
    """Transmit powers of streams s11, s12 (U1) and s2 (U2)."""

    p11: float
    p12: float
    p2: float

    def __post_init__(self):
        if min(self.p11, self.p12, self.p2) < 0:
            raise DomainError(f"powers must be non-negative: {self}")

    @property
    def p1(self):
        return self.p11 + self.p12

    def check_budget(self, sys, tol=1e-12):
        """Raise unless p11 + p12 <= p_max and p2 <= p_max."""
        limit = sys.p_max * (1 + tol)
        if self.p1 > limit or self.p2 > limit:
            raise DomainError(f"{self} exceeds the power budget {sys.p_max}")
        return self

    def as_array(self):
        return np.array([self.p11, self.p12, self.p2])


@dataclass(frozen=True)
class OmaFraction:
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")

    def __float__(self):
        return float(self.alpha)


def _alpha(alpha):
    a = np.asarray(float(alpha) if isinstance(alpha, OmaFraction) else alpha, dtype=float)
    if np.any(~((a > 0.0) & (a < 1.0))):
        raise DomainError("alpha must lie in (0, 1)")
    return a


def power_ratio_alpha(p1, p2):
    """Resource fraction rule alpha = P1 / (P1 + P2)."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        a = p1 / (p1 + p2)
    return float(a) if a.ndim == 0 else a


def rsma_sinrs(p11, p12, p2=None, sys=None):
    """SINRs (gamma11, gamma22, gamma12) along the decoding chain s11 -> s2 -> s12.

    Accepts a :class:`PowerAllocation` as first argument, or three
    broadcastable power arrays.
    """
    if isinstance(p11, PowerAllocation):
        sys = p12
        p11, p12, p2 = p11.p11, p11.p12, p11.p2
    s1 = np.asarray(p11, dtype=float) * sys.g1
    s12 = np.asarray(p12, dtype=float) * sys.g1
    s2 = np.asarray(p2, dtype=float) * sys.g2
    gamma11 = s1 / (s12 + s2 + sys.noise_var)
    gamma22 = s2 / (s12 + sys.noise_var)
    gamma12 = s12 / sys.noise_var
    return _tuple(gamma11, gamma22, gamma12)


def aggregate_sinrs(p1, p2, sys):
    """(gamma1, gamma2, gamma_sum) used by the MAC capacity region.

    ``gamma1`` is U1's SINR with U2 as noise, ``gamma2`` the converse,
    and ``gamma_sum`` the total received SNR.  ``p1`` may be a
    :class:`PowerAllocation`, in which case ``p2`` is the system.
    """
    if isinstance(p1, PowerAllocation):
        sys = p2
        p1, p2 = p1.p1, p1.p2
    s1 = np.asarray(p1, dtype=float) * sys.g1
    s2 = np.asarray(p2, dtype=float) * sys.g2
    return _tuple(
        s1 / (s2 + sys.noise_var),
        s2 / (s1 + sys.noise_var),
        (s1 + s2) / sys.noise_var,
    )


def noma_sinrs(p1, p2, sys, order=DecodeOrder.U1_FIRST):
    """(gamma1, gamma2) of U1 and U2 under SIC without rate splitting.

    The user decoded first sees the other as interference; the second
    one is interference-free.  Returned in user order, not decoding
    order.
    """
    order = DecodeOrder(order)
    s1 = np.asarray(p1, dtype=float) * sys.g1
    s2 = np.asarray(p2, dtype=float) * sys.g2
    if order is DecodeOrder.U1_FIRST:
        return _tuple(s1 / (s2 + sys.noise_var), s2 / sys.noise_var)
    return _tuple(s1 / sys.noise_var, s2 / (s1 + sys.noise_var))


def fdma_sinrs(p1, p2, alpha, sys):
    a = _alpha(alpha)
    s1 = np.asarray(p1, dtype=float) * sys.g1
    s2 = np.asarray(p2, dtype=float) * sys.g2
    return _tuple(s1 / (a * sys.noise_var), s2 / ((1.0 - a) * sys.noise_var))


def tdma_sinrs(p1, p2, sys):
    s1 = np.asarray(p1, dtype=float) * sys.g1
    s2 = np.asarray(p2, dtype=float) * sys.g2
    return _tuple(s1 / sys.noise_var, s2 / sys.noise_var)


def oma_sinrs(p1, p2, alpha, sys, scheme):
    if OmaScheme(scheme) is OmaScheme.FDMA:
        return fdma_sinrs(p1, p2, alpha, sys)
    return tdma_sinrs(p1, p2, sys)


def _tuple(*arrays):
    return tuple(float(a) if np.ndim(a) == 0 else a for a in arrays)
