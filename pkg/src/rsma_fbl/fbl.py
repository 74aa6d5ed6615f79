"""
Finite-blocklength primitives for the real AWGN channel.

All rates are in bits per channel use and blocklengths are in channel
uses.  Functions accept scalars or numpy arrays and broadcast; scalar
inputs give Python floats back.  ``n = inf`` is accepted everywhere and
recovers the infinite-blocklength (Shannon) limit.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, erfcinv

from .errors import DomainError

LOG2E = math.log2(math.e)
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class ReliabilityTarget:
    """Predefined decoding error probability of one stream."""

    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")

    def __float__(self):
        return float(self.epsilon)


def q_function(x):
    """Gaussian tail probability Q(x) = P[N(0,1) > x]."""
    x = np.asarray(x, dtype=float)
    return _out(0.5 * erfc(x / _SQRT2))


def inverse_q(p):
    """Inverse of the Gaussian Q-function.

    The starting point comes from the rational approximation of the
    inverse complementary error function; two Newton steps on
    ``Q(x) - p`` then bring the absolute error down to rounding level,
    including the deep tail (p ~ 1e-12) used for URLLC targets.

    Raises:
        DomainError: if any ``p`` is outside the open interval (0, 1).
    """
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise DomainError("inverse_q needs 0 < p < 1")
    x = _SQRT2 * erfcinv(2.0 * p)
    for _ in range(2):
        pdf = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
        x = x + (0.5 * erfc(x / _SQRT2) - p) / pdf
    return _out(x)


def _check_gamma(gamma):
    gamma = np.asarray(gamma, dtype=float)
    if np.any(~(gamma >= 0.0)):
        raise DomainError("SINR must be non-negative")
    return gamma


def _check_n(n):
    n = np.asarray(n, dtype=float)
    if np.any(~(n > 0.0)):
        raise DomainError("blocklength must be positive")
    return n


def _eps_value(eps):
    if isinstance(eps, ReliabilityTarget):
        return eps.epsilon
    return eps


def channel_dispersion(gamma):
    """V = 1 - (1 + gamma)^-2, in [0, 1)."""
    gamma = _check_gamma(gamma)
    return _out(1.0 - (1.0 + gamma) ** -2)


def shannon_capacity(gamma):
    """log2(1 + gamma) in bits per channel use."""
    gamma = _check_gamma(gamma)
    return _out(np.log2(1.0 + gamma))


def dispersion_penalty(n, gamma, eps):
    """Second-order rate loss sqrt(V/n) * Q^-1(eps) * log2(e)."""
    n = _check_n(n)
    v = np.asarray(channel_dispersion(gamma))
    q = np.asarray(inverse_q(_eps_value(eps)))
    return _out(np.sqrt(v / n) * q * LOG2E)


def fbl_rate(n, gamma, eps):
    """Normal-approximation rate C(gamma) - D(n, gamma, eps).

    Not clamped: the result is negative when the dispersion penalty
    exceeds the capacity.  Use :func:`fbl_rate_clamped` where a physical
    (non-negative) rate is needed.
    """
    return _out(np.asarray(shannon_capacity(gamma)) - np.asarray(dispersion_penalty(n, gamma, eps)))


def fbl_rate_clamped(n, gamma, eps):
    return _out(np.maximum(np.asarray(fbl_rate(n, gamma, eps)), 0.0))
