"""
Message-level error probabilities and effective throughput.

A message is lost if any stream it depends on along the SIC chain is
lost.  Effective throughput is the expected number of delivered bits in
one block, ``(1 - eps_msg) * n * rate``, with stream rates clamped at
zero so that a stream whose dispersion penalty exceeds its capacity
simply carries nothing.
"""

from dataclasses import dataclass

import numpy as np

from .channel import DecodeOrder, OmaScheme, noma_sinrs, oma_sinrs, rsma_sinrs
from .errors import DomainError
from .fbl import LOG2E, channel_dispersion, fbl_rate_clamped, inverse_q, shannon_capacity


@dataclass(frozen=True)
class StreamReliability:
    """Per-stream target error probabilities of s11, s12 and s2."""

    eps11: float = 1e-6
    eps12: float = 1e-6
    eps22: float = 1e-6

    def __post_init__(self):
        for name in ("eps11", "eps12", "eps22"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {value}")

    @classmethod
    def uniform(cls, eps):
        return cls(eps, eps, eps)


@dataclass(frozen=True)
class ThroughputTargets:
    """Minimum effective throughput per user, in bits per block."""

    t1_th: float = 0.0
    t2_th: float = 0.0

    def __post_init__(self):
        if self.t1_th < 0 or self.t2_th < 0:
            raise DomainError(f"throughput thresholds must be non-negative: {self}")


def _triple(s, eps12, eps22):
    if isinstance(s, StreamReliability):
        return s.eps11, s.eps12, s.eps22
    return s, eps12, eps22


def rsma_message_errors(s, eps12=None, eps22=None, exact=False):
    """Error probabilities (eps1, eps2) of messages W1 and W2 under RSMA.

    W2 needs s11 and s2; W1 needs all three streams.  ``exact=False``
    drops the products of error probabilities, which is what the
    throughput and optimisation code uses by default.

    ``s`` is either a :class:`StreamReliability` or ``eps11`` with the
    other two given positionally.
    """
    e11, e12, e22 = _triple(s, eps12, eps22)
    if exact:
        eps2 = e11 + (1 - e11) * e22
        eps1 = eps2 + (1 - e11) * (1 - e22) * e12
    else:
        eps2 = e11 + e22
        eps1 = eps2 + e12
    return eps1, eps2


def noma_message_errors(eps11, eps22, exact=False, order=DecodeOrder.U1_FIRST):
    """Message errors (eps1, eps2) for NOMA, in user order.

    Follows the cascade as published for NOMA-12: the first-decoded
    user's message error accumulates both stream errors and the other
    user keeps its own.  NOMA-21 mirrors the roles.
    """
    if DecodeOrder(order) is DecodeOrder.U2_FIRST:
        eps2, eps1 = noma_message_errors(eps22, eps11, exact=exact)
        return eps1, eps2
    if exact:
        return eps11 + (1 - eps11) * eps22, eps22
    return eps11 + eps22, eps22


def rsma_message_errors_at(p, s, exact=False):
    """Message errors at a given power allocation.

    A stream with zero power is not transmitted and cannot fail.  With
    ``p12 = 0`` the chain is NOMA with U1 decoded first; with ``p11 = 0``
    it is NOMA with U2 first and s12 playing U1's stream.  Those faces
    use the NOMA cascade so the schemes coincide there exactly.
    """
    if p.p12 == 0.0:
        return noma_message_errors(s.eps11, s.eps22, exact, DecodeOrder.U1_FIRST)
    if p.p11 == 0.0:
        return noma_message_errors(s.eps12, s.eps22, exact, DecodeOrder.U2_FIRST)
    return rsma_message_errors(s, exact=exact)


def rsma_effective_throughput(n, p, sys, s, exact_errors=False, message_errors=None):
    """Effective throughputs (T1, T2) in bits for an RSMA power allocation.

    Args:
        n: blocklength in channel uses.
        p: :class:`PowerAllocation`.
        sys: :class:`SystemParams`.
        s: per-stream :class:`StreamReliability`; used for the rates.
        exact_errors: use the full error cascade instead of the sums.
        message_errors: optional ``(eps1, eps2)`` overriding the cascade;
            by default :func:`rsma_message_errors_at` is used.
    """
    if not n > 0:
        raise DomainError("blocklength must be positive")
    g11, g22, g12 = rsma_sinrs(p.p11, p.p12, p.p2, sys)
    eps1, eps2 = message_errors or rsma_message_errors_at(p, s, exact_errors)
    r1 = fbl_rate_clamped(n, g11, s.eps11) + fbl_rate_clamped(n, g12, s.eps12)
    r2 = fbl_rate_clamped(n, g22, s.eps22)
    return (1 - eps1) * n * r1, (1 - eps2) * n * r2


def noma_effective_throughput(n, p1, p2, sys, eps, order=DecodeOrder.U1_FIRST,
                              exact_errors=False, message_errors=None):
    """Effective throughputs (T1, T2) under NOMA with stream errors ``eps = (eps11, eps22)``."""
    if not n > 0:
        raise DomainError("blocklength must be positive")
    eps11, eps22 = eps
    gamma1, gamma2 = noma_sinrs(p1, p2, sys, order)
    eps1, eps2 = message_errors or noma_message_errors(eps11, eps22, exact_errors, order)
    t1 = (1 - eps1) * n * fbl_rate_clamped(n, gamma1, eps11)
    t2 = (1 - eps2) * n * fbl_rate_clamped(n, gamma2, eps22)
    return t1, t2


def oma_user_rate(n_user, gamma, alpha, eps):
    """Per-user OMA rate alpha*C(gamma) - sqrt(V/n_user)*Q^-1(eps)*log2(e).

    The resource fraction multiplies the capacity term and the user's own
    blocklength enters the dispersion term, exactly as the FDMA/TDMA
    baseline is usually written in this setting.  Note that the
    throughput multiplies by ``n_user`` again, so the fraction is
    effectively applied twice to the capacity term.
    """
    v = np.asarray(channel_dispersion(gamma))
    cap = np.asarray(shannon_capacity(gamma))
    rate = alpha * cap - np.sqrt(v / n_user) * inverse_q(eps) * LOG2E
    return float(rate) if np.ndim(rate) == 0 else rate


def oma_effective_throughput(n, p1, p2, alpha, sys, eps, scheme):
    """Effective throughputs (T1, T2) under FDMA or TDMA.

    User 1 occupies ``alpha * n`` channel uses and user 2 the rest.
    ``eps = (eps1, eps2)``; with no SIC the message error equals the
    stream error.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"degenerate resource split alpha={alpha}")
    if not n > 0:
        raise DomainError("blocklength must be positive")
    eps1, eps2 = eps
    n1, n2 = alpha * n, (1 - alpha) * n
    gamma1, gamma2 = oma_sinrs(p1, p2, alpha, sys, OmaScheme(scheme))
    r1 = max(oma_user_rate(n1, gamma1, alpha, eps1), 0.0)
    r2 = max(oma_user_rate(n2, gamma2, 1 - alpha, eps2), 0.0)
    return (1 - eps1) * n1 * r1, (1 - eps2) * n2 * r2
