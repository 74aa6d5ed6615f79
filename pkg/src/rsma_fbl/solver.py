"""
Blocklength minimisation under throughput and power constraints.

RSMA and NOMA are solved by successive convex approximation: around a
reference point the SINR lower-bound constraints and the dispersion
term of the throughput constraints are replaced by first-order Taylor
surrogates, and the resulting problem is solved for the smallest
blocklength.  For fixed ``n`` the surrogate problem is a small convex
feasibility problem, solved with a log-barrier method; the smallest
feasible ``n`` is found by bisection, since a larger ``n`` relaxes every
throughput constraint.  The reference point is then moved to the
solution and the loop repeats until ``n`` stops moving by more than
``xi``.

Every candidate power allocation is re-evaluated with the exact
nonlinear throughput before it is accepted, and a trust region on the
SINR slacks shrinks when the surrogate was too optimistic.  The reported
blocklength is therefore always exactly feasible.

FDMA/TDMA need no linearisation: per-user throughputs separate, so the
minimum total blocklength reduces to a one-dimensional search over the
resource split.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .barrier import barrier_maximize
from .channel import DecodeOrder, OmaScheme, PowerAllocation, oma_sinrs, power_ratio_alpha, rsma_sinrs
from .errors import DomainError, InfeasibleError
from .fbl import LOG2E, channel_dispersion, inverse_q, shannon_capacity
from .reliability import (
    StreamReliability,
    ThroughputTargets,
    noma_effective_throughput,
    noma_message_errors,
    oma_effective_throughput,
    oma_user_rate,
    rsma_effective_throughput,
    rsma_message_errors,
)

log = logging.getLogger(__name__)

CONVERGED = "converged"
MAX_ITERS = "max-iters"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the alternating optimisation.

    ``eps_convention`` selects which error probability enters the
    dispersion term while optimising: ``"message"`` uses the message
    error of the stream's owner (the slack-variable formulation), and
    ``"stream"`` uses each stream's own target.  The reported result is
    always re-checked with per-stream targets.

    ``multistart`` runs the RSMA/NOMA loops from a few extra initial
    powers (the degenerate NOMA-like corners among them) and keeps the
    best verified result; the loop itself is a local method.

    ``alpha_rule`` applies to FDMA/TDMA only: ``"power_ratio"`` ties the
    split to P1/(P1+P2), ``"optimized"`` treats it as a free variable,
    and a number fixes it.
    """

    xi: float = 0.5
    max_outer_iters: int = 60
    n_init: float = 1e6
    n_resolution: float = 1e-2
    rho_init: float = 0.5
    rho_min: float = 1e-3
    rho_max: float = 8.0
    delta_floor: float = 1e-6
    trust_floor: float = 1e-2
    barrier_gap_tol: float = 1e-9
    eps_convention: str = "stream"
    alpha_rule: object = "power_ratio"
    multistart: bool = True

    def __post_init__(self):
        if not self.xi > 0:
            raise DomainError("xi must be positive")
        if self.eps_convention not in ("message", "stream"):
            raise DomainError(f"unknown eps_convention {self.eps_convention!r}")


@dataclass(frozen=True)
class SlackState:
    """Reference point of the RSMA linearisation; ``tau`` values are in bits."""

    delta11: float
    delta22: float
    delta12: float
    tau11: float
    tau12: float
    powers: PowerAllocation
    n: float

    def __post_init__(self):
        if min(self.delta11, self.delta22, self.delta12) < 0:
            raise DomainError("SINR slacks must be non-negative")
        if not self.n > 0:
            raise DomainError("blocklength must be positive")

    @classmethod
    def at_powers(cls, powers, sys, s, n, eps_convention="stream"):
        """Slacks that are tight at ``powers``: deltas equal the actual SINRs."""
        g11, g22, g12 = rsma_sinrs(powers, sys)
        eps1, _ = rsma_message_errors(s)
        q11 = eps1 if eps_convention == "message" else s.eps11
        q12 = eps1 if eps_convention == "message" else s.eps12
        tau11 = (1 - eps1) * n * _rate(n, g11, q11)
        tau12 = (1 - eps1) * n * _rate(n, g12, q12)
        return cls(g11, g22, g12, tau11, tau12, powers, n)


@dataclass
class SolveReport:
    scheme: str
    n_star: float
    powers: dict
    slacks: dict
    iterations: int
    trace: list
    status: str
    events: list = field(default_factory=list)
    verified: bool = False

    @property
    def n_int(self):
        """Integer blocklength actually used on air."""
        if not math.isfinite(self.n_star):
            return None
        return int(math.ceil(self.n_star - 1e-9))

    def to_dict(self):
        d = asdict(self)
        d["n_int"] = self.n_int
        return d

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    def trace_rows(self):
        return [{"scheme": self.scheme, "iteration": i, "n": n} for i, n in enumerate(self.trace)]


def _rate(n, gamma, eps):
    return float(shannon_capacity(gamma) - math.sqrt(channel_dispersion(gamma) / n) * inverse_q(eps) * LOG2E)


# --------------------------------------------------------------------------
# Linearisation operators
# --------------------------------------------------------------------------

def nu(delta):
    """sqrt(1 - (1 + delta)^-2): the square root of the channel dispersion."""
    return math.sqrt(1.0 - (1.0 + delta) ** -2)


def nu_prime(delta):
    """Derivative of :func:`nu`; singular at ``delta = 0``."""
    return (1.0 + delta) ** -3 / nu(delta)


@dataclass(frozen=True)
class ThroughputSurrogate:
    """Tangent lower bound of a stream's throughput in its SINR slack.

    Because ``nu`` is concave the tangent over-estimates the dispersion
    term, so the surrogate never exceeds the exact expression and meets
    it at ``delta_ref``.
    """

    delta_ref: float
    factor: float       # (1 - eps) * n
    penalty: float      # E = Q^-1(eps) * log2(e) / sqrt(n)
    nu_ref: float
    slope_ref: float

    def __call__(self, delta):
        d = np.asarray(delta, dtype=float)
        tangent = self.nu_ref + (d - self.delta_ref) * self.slope_ref
        out = self.factor * (np.log2(1.0 + d) - self.penalty * tangent)
        return float(out) if out.ndim == 0 else out

    def exact(self, delta):
        return self.factor * (math.log2(1.0 + delta) - self.penalty * nu(delta))


def linearize_throughput(delta_ref, eps_msg, n):
    """First-order surrogate of ``(1-eps) n [log2(1+d) - E nu(d)]`` at ``delta_ref``.

    Raises:
        DomainError: for ``delta_ref <= 0``, where ``nu`` is not differentiable.
    """
    if not delta_ref > 0:
        raise DomainError("linearisation point must have positive SINR slack")
    penalty = inverse_q(eps_msg) * LOG2E / math.sqrt(n)
    return ThroughputSurrogate(delta_ref, (1 - eps_msg) * n, penalty, nu(delta_ref), nu_prime(delta_ref))


@dataclass(frozen=True)
class AffineConstraint:
    """``const + sum(coef[name] * var[name]) <= 0``."""

    name: str
    coef: dict
    const: float

    def value(self, **variables):
        return self.const + sum(c * variables[k] for k, c in self.coef.items())


def linearize_sinr(constraint_id, ref, sys):
    """Affine inner model of ``gamma11 >= delta11`` or ``gamma22 >= delta22`` at ``ref``.

    The ratio ``P * G / delta`` is expanded to first order in ``delta``
    around the reference slack, keeping the powers exact.
    """
    p = ref.powers
    if constraint_id == "gamma11-ge-delta11":
        d_ref = ref.delta11
        if not d_ref > 0:
            raise DomainError("zero reference slack for gamma11")
        coef = {
            "p11": -sys.g1 / d_ref,
            "p12": sys.g1,
            "p2": sys.g2,
            "delta11": p.p11 * sys.g1 / d_ref**2,
        }
        const = sys.noise_var - d_ref * p.p11 * sys.g1 / d_ref**2
    elif constraint_id == "gamma22-ge-delta22":
        d_ref = ref.delta22
        if not d_ref > 0:
            raise DomainError("zero reference slack for gamma22")
        coef = {
            "p12": sys.g1,
            "p2": -sys.g2 / d_ref,
            "delta22": p.p2 * sys.g2 / d_ref**2,
        }
        const = sys.noise_var - d_ref * p.p2 * sys.g2 / d_ref**2
    else:
        raise DomainError(f"unknown SINR constraint {constraint_id!r}")
    return AffineConstraint(constraint_id, coef, const)


# --------------------------------------------------------------------------
# SIC problem description shared by RSMA and NOMA
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Stream:
    name: str
    user: int
    power: int
    gain: float
    interference: tuple     # received-power gain of every power variable


@dataclass
class _SicProblem:
    scheme: str
    sys: object
    power_names: tuple
    budget: np.ndarray      # rows of 0/1, each row's sum <= p_max
    streams: tuple
    thresholds: tuple
    msg_eps: tuple
    stream_eps: tuple
    convention: str

    @property
    def m(self):
        return len(self.power_names)

    def user_streams(self, u):
        return [k for k, st in enumerate(self.streams) if st.user == u]

    def sinrs(self, p):
        p = np.asarray(p, dtype=float)
        return np.array([
            st.gain * p[st.power] / (np.dot(st.interference, p) + self.sys.noise_var)
            for st in self.streams
        ])

    def penalty_eps(self, k, per_stream=False):
        if per_stream or self.convention == "stream":
            return self.stream_eps[k]
        return self.msg_eps[self.streams[k].user]

    def throughput_fn(self, p, u, per_stream=False):
        """n -> effective throughput of user ``u`` at fixed powers (clamped rates)."""
        gam = self.sinrs(p)
        ks = self.user_streams(u)
        cap = np.array([math.log2(1 + gam[k]) for k in ks])
        a = np.array([
            math.sqrt(channel_dispersion(gam[k])) * inverse_q(self.penalty_eps(k, per_stream)) * LOG2E
            for k in ks
        ])
        scale = 1 - self.msg_eps[u]

        def throughput(n):
            return scale * float(np.sum(np.maximum(cap * n - a * math.sqrt(n), 0.0)))
        return throughput

    def min_blocklength(self, p, per_stream=False):
        """Smallest n in the box meeting both thresholds at powers ``p``; inf if none."""
        lo, hi = self.sys.n_min, self.sys.n_max
        need = lo
        for u in (0, 1):
            target = self.thresholds[u]
            if target <= 0:
                continue
            f = self.throughput_fn(p, u, per_stream)
            if f(lo) >= target:
                continue
            if f(hi) < target:
                return math.inf
            need = max(need, brentq(lambda n: f(n) - target, lo, hi, xtol=1e-10, rtol=1e-14))
        return need

    def capacity_bound_ok(self):
        """Cheap necessary condition: full power, no dispersion loss, n = n_max."""
        sys = self.sys
        c1 = math.log2(1 + sys.p_max * sys.g1 / sys.noise_var)
        c2 = math.log2(1 + sys.p_max * sys.g2 / sys.noise_var)
        cs = math.log2(1 + sys.p_max * (sys.g1 + sys.g2) / sys.noise_var)
        t1, t2 = self.thresholds
        return t1 <= sys.n_max * c1 and t2 <= sys.n_max * c2 and t1 + t2 <= sys.n_max * cs


def _rsma_problem(sys, s, targets, convention, split=True):
    g1, g2 = sys.g1, sys.g2
    if split:
        streams = (
            _Stream("s11", 0, 0, g1, (0.0, g1, g2)),
            _Stream("s22", 1, 2, g2, (0.0, g1, 0.0)),
            _Stream("s12", 0, 1, g1, (0.0, 0.0, 0.0)),
        )
        budget = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        msg = rsma_message_errors(s)
        return _SicProblem("rsma", sys, ("p11", "p12", "p2"), budget, streams,
                           (targets.t1_th, targets.t2_th), msg, (s.eps11, s.eps22, s.eps12), convention)
    # s12 removed: the chain collapses to NOMA with U1 decoded first
    streams = (
        _Stream("s11", 0, 0, g1, (0.0, g2)),
        _Stream("s22", 1, 1, g2, (0.0, 0.0)),
    )
    msg = noma_message_errors(s.eps11, s.eps22)
    return _SicProblem("rsma-nosplit", sys, ("p11", "p2"), np.eye(2), streams,
                       (targets.t1_th, targets.t2_th), msg, (s.eps11, s.eps22), convention)


def _noma_problem(sys, eps, targets, convention, order):
    order = DecodeOrder(order)
    eps11, eps22 = eps
    g1, g2 = sys.g1, sys.g2
    if order is DecodeOrder.U1_FIRST:
        streams = (_Stream("s1", 0, 0, g1, (0.0, g2)), _Stream("s2", 1, 1, g2, (0.0, 0.0)))
    else:
        streams = (_Stream("s1", 0, 0, g1, (0.0, 0.0)), _Stream("s2", 1, 1, g2, (g1, 0.0)))
    msg = noma_message_errors(eps11, eps22, order=order)
    return _SicProblem(f"noma{order.value}", sys, ("p1", "p2"), np.eye(2), streams,
                       (targets.t1_th, targets.t2_th), msg, (eps11, eps22), convention)


# --------------------------------------------------------------------------
# Linearised subproblem at fixed n
# --------------------------------------------------------------------------

@dataclass
class _Layout:
    m: int
    K: int
    tau: dict           # stream index -> column of its throughput slack
    size: int

    def delta(self, k):
        return self.m + k

    @property
    def margin(self):
        return self.size - 1


def _layout(prob):
    tau = {}
    col = prob.m + len(prob.streams)
    for u in (0, 1):
        ks = prob.user_streams(u)
        if len(ks) > 1:
            for k in ks:
                tau[k] = col
                col += 1
    return _Layout(prob.m, len(prob.streams), tau, col + 1)


def _assemble_p3(prob, p_ref, d_ref, rho, n, cfg):
    """Rows ``A z + b + w log1p(z[idx]) >= 0`` and a strictly feasible start.

    Soft rows (linearised throughput, SINR and sum constraints) carry a
    common margin variable; feasibility of the surrogate at ``n`` is
    equivalent to a non-negative optimal margin.
    """
    sys = prob.sys
    lay = _layout(prob)
    rows, b, w, idx, soft = [], [], [], [], []

    def add(coef, const, log_weight=0.0, log_col=0, is_soft=False):
        row = np.zeros(lay.size)
        for j, c in coef.items():
            row[j] += c
        if is_soft:
            row[lay.margin] -= 1.0
        rows.append(row)
        b.append(const)
        w.append(log_weight)
        idx.append(log_col)
        soft.append(is_soft)

    # a split stream whose rate is non-positive at the reference carries nothing
    # in the exact (clamped) throughput; pin its share at zero so the model
    # stays tight there
    idle = {k for k in lay.tau if _rate(n, d_ref[k], prob.penalty_eps(k)) <= 0.0}

    # throughput surrogates, normalised by (1 - eps_u) n so that they read in bits/channel use
    for k, st in enumerate(prob.streams):
        u = st.user
        if k in idle:
            add({lay.tau[k]: -1.0}, 0.0, is_soft=True)
            continue
        sur = linearize_throughput(d_ref[k], prob.penalty_eps(k), n)
        factor = (1 - prob.msg_eps[u]) * n
        coef = {lay.delta(k): -sur.penalty * sur.slope_ref}
        const = -sur.penalty * (sur.nu_ref - sur.delta_ref * sur.slope_ref)
        if k in lay.tau:
            coef[lay.tau[k]] = -1.0
        else:
            const -= prob.thresholds[u] / factor
        add(coef, const, 1.0 / math.log(2.0), lay.delta(k), True)

    for u in (0, 1):
        ks = [k for k in prob.user_streams(u) if k in lay.tau]
        if ks:
            factor = (1 - prob.msg_eps[u]) * n
            add({lay.tau[k]: 1.0 for k in ks}, -prob.thresholds[u] / factor, is_soft=True)

    # SINR lower bounds: exact when the stream sees only noise, tangent model otherwise
    for k, st in enumerate(prob.streams):
        interf = np.asarray(st.interference)
        if not np.any(interf):
            add({st.power: st.gain / sys.noise_var, lay.delta(k): -1.0}, 0.0, is_soft=True)
            continue
        dr, pr = d_ref[k], p_ref[st.power]
        scale = float(interf @ p_ref) + sys.noise_var
        coef = {j: -interf[j] / scale for j in range(prob.m) if interf[j]}
        coef[st.power] = coef.get(st.power, 0.0) + st.gain / (dr * scale)
        coef[lay.delta(k)] = -pr * st.gain / (dr**2 * scale)
        const = -(sys.noise_var - pr * st.gain / dr) / scale
        add(coef, const, is_soft=True)

    # hard rows: power box, trust region on the slacks, margin cap
    for j in range(prob.m):
        add({j: 1.0}, 0.0)
    for brow in prob.budget:
        add({j: -c / sys.p_max for j, c in enumerate(brow) if c}, 1.0)
    for k in range(lay.K):
        radius = rho * max(d_ref[k], cfg.trust_floor)
        add({lay.delta(k): 1.0}, -max(d_ref[k] - radius, 0.0))
        add({lay.delta(k): -1.0}, d_ref[k] + radius)
    add({lay.margin: -1.0}, 10.0)

    A = np.array(rows)
    b = np.array(b)
    w = np.array(w)
    idx = np.array(idx, dtype=int)
    soft = np.array(soft)

    z0 = np.zeros(lay.size)
    interior = sys.p_max / (1.0 + prob.budget.sum(axis=1).max())
    z0[: prob.m] = (1 - 1e-3) * np.asarray(p_ref) + 1e-3 * interior
    for k in range(lay.K):
        z0[lay.delta(k)] = d_ref[k]
    for u in (0, 1):
        ks = [k for k in prob.user_streams(u) if k in lay.tau]
        if not ks:
            continue
        factor = (1 - prob.msg_eps[u]) * n
        vals = {}
        for k in ks:
            sur = linearize_throughput(d_ref[k], prob.penalty_eps(k), n)
            vals[k] = 0.0 if k in idle else math.log2(1 + d_ref[k]) - sur.penalty * sur.nu_ref
        spare = (sum(vals.values()) - prob.thresholds[u] / factor) / (len(ks) + 1)
        for k in ks:
            z0[lay.tau[k]] = vals[k] - spare
    G = A @ z0 + b + w * np.log1p(z0[idx])
    z0[lay.margin] = min(G[soft].min() - 1.0, 9.0)
    c = np.zeros(lay.size)
    c[lay.margin] = 1.0
    return c, A, b, w, idx, z0, lay


def _p3_feasible(prob, p_ref, d_ref, rho, n, cfg):
    c, A, b, w, idx, z0, lay = _assemble_p3(prob, p_ref, d_ref, rho, n, cfg)

    def decided(z, value, gap):
        return value >= 0.0 or value + gap < 0.0

    res = barrier_maximize(c, A, b, w, idx, z0, gap_tol=cfg.barrier_gap_tol, stop=decided)
    return res.value >= 0.0, res.z, lay


def _solve_p3(prob, p_ref, d_ref, rho, n_hi, cfg):
    """Smallest n (to ``cfg.n_resolution``) at which the surrogate is feasible.

    Returns ``(n, z, layout)`` or ``None`` when even ``n_max`` fails.
    """
    sys = prob.sys
    n_hi = min(max(n_hi, sys.n_min), sys.n_max)
    ok, z, lay = _p3_feasible(prob, p_ref, d_ref, rho, n_hi, cfg)
    if not ok and n_hi < sys.n_max:
        n_hi = sys.n_max
        ok, z, lay = _p3_feasible(prob, p_ref, d_ref, rho, n_hi, cfg)
    if not ok:
        return None
    ok_lo, z_lo, _ = _p3_feasible(prob, p_ref, d_ref, rho, sys.n_min, cfg)
    if ok_lo:
        return sys.n_min, z_lo, lay
    lo, hi = sys.n_min, n_hi
    # probe just below the incumbent first: late iterations move n very little
    step = max(0.02 * hi, 4 * cfg.n_resolution)
    while hi - lo > cfg.n_resolution:
        mid = max(hi - step, lo + 0.5 * (hi - lo)) if step < 0.5 * (hi - lo) else 0.5 * (lo + hi)
        ok, z_mid, _ = _p3_feasible(prob, p_ref, d_ref, rho, mid, cfg)
        if ok:
            hi, z = mid, z_mid
            step *= 2
        else:
            lo = mid
            step = math.inf
    return hi, z, lay


def _run_ao(prob, cfg, p0):
    """Alternating optimisation loop; returns (powers, n, trace, status, events)."""
    sys = prob.sys
    trace = [cfg.n_init]
    events = []
    p = np.asarray(p0, dtype=float)
    n_cur = prob.min_blocklength(p)
    rho = cfg.rho_init
    status = MAX_ITERS
    iterations = 0
    for it in range(cfg.max_outer_iters):
        iterations = it + 1
        d_ref = np.maximum(prob.sinrs(p), cfg.delta_floor)
        res = _solve_p3(prob, p, d_ref, rho, n_cur, cfg)
        if res is None:
            if rho < cfg.rho_max:
                rho = min(2 * rho, cfg.rho_max)
                events.append(f"iter {it}: surrogate infeasible at n_max, trust radius -> {rho:g}")
                continue
            status = CONVERGED if math.isfinite(n_cur) else INFEASIBLE
            break
        n_lin, z, lay = res
        p_new = np.clip(z[: prob.m], 0.0, sys.p_max)
        n_new = prob.min_blocklength(p_new)
        if n_new <= n_cur:
            prev = trace[-1]
            p, n_cur = p_new, n_new
            trace.append(n_new)
            rho = min(2 * rho, cfg.rho_max)
            if abs(prev - n_new) <= cfg.xi:
                status = CONVERGED
                break
        else:
            rho *= 0.5
            events.append(
                f"iter {it}: surrogate n={n_lin:.4f} but exact n={n_new:.4f} > {n_cur:.4f}; "
                f"trust radius -> {rho:g}"
            )
            if rho < cfg.rho_min:
                status = CONVERGED if math.isfinite(n_cur) else INFEASIBLE
                break
    for e in events:
        log.debug("%s: %s", prob.scheme, e)
    return p, n_cur, trace, status, events, iterations


def _finish(prob, cfg, p, n_ao, trace, status, events, iterations, verify):
    if not math.isfinite(n_ao):
        return SolveReport(prob.scheme, math.inf, dict(zip(prob.power_names, map(float, p))), {},
                           iterations, trace, INFEASIBLE, events)
    n_exact = prob.min_blocklength(p, per_stream=True)
    n_star = max(n_ao, n_exact)
    if n_star > n_ao:
        events.append(f"exact re-check raised n from {n_ao:.4f} to {n_star:.4f}")
    if not math.isfinite(n_star):
        status = INFEASIBLE
    gam = prob.sinrs(p)
    slacks = {f"delta_{st.name[1:]}": float(gam[k]) for k, st in enumerate(prob.streams)}
    if math.isfinite(n_star):
        for u in (0, 1):
            ks = prob.user_streams(u)
            if len(ks) > 1:
                for k in ks:
                    eps = prob.stream_eps[k]
                    r = max(_rate(n_star, gam[k], eps), 0.0)
                    slacks[f"tau_{prob.streams[k].name[1:]}"] = (1 - prob.msg_eps[u]) * n_star * r
    report = SolveReport(prob.scheme, float(n_star), dict(zip(prob.power_names, map(float, p))),
                         slacks, iterations, [float(x) for x in trace], status, events)
    if math.isfinite(n_star):
        report.verified = bool(verify(n_star, p))
    return report


def _best_of(prob, cfg, starts, verify):
    """Run the loop from each start and keep the smallest verified blocklength.

    The first start is the reference initialisation; its trace is kept
    unless another start ends strictly lower.
    """
    best = None
    summary = []
    for p0 in starts:
        report = _finish(prob, cfg, *_run_ao(prob, cfg, p0), verify)
        summary.append(f"start {[round(float(x), 4) for x in p0]} -> n={report.n_star:.4f}")
        ok = report.verified and math.isfinite(report.n_star)
        if best is None or (ok and (not best.verified or report.n_star < best.n_star - 1e-9)):
            best = report
    if len(starts) > 1:
        best.events.extend(summary)
    return best


# --------------------------------------------------------------------------
# Public solvers
# --------------------------------------------------------------------------

def exact_constraints_satisfied(n, p, sys, s, targets, tol=1e-6):
    """Check the original (non-linearised) RSMA constraints at ``(n, p)``."""
    if not (sys.n_min - tol <= n <= sys.n_max + tol):
        return False
    if p.p1 > sys.p_max * (1 + 1e-12) or p.p2 > sys.p_max * (1 + 1e-12):
        return False
    t1, t2 = rsma_effective_throughput(n, p, sys, s)
    return t1 >= targets.t1_th - tol and t2 >= targets.t2_th - tol


def solve_p3(ref, sys, s, targets, cfg=None, rho=None):
    """One linearised RSMA subproblem around ``ref``; returns its solution.

    Raises:
        InfeasibleError: if the surrogate is infeasible even at ``n_max``.
    """
    cfg = cfg or SolverConfig()
    prob = _rsma_problem(sys, s, targets, cfg.eps_convention)
    p_ref = ref.powers.as_array()
    d_floor = cfg.delta_floor
    d_ref = np.array([max(ref.delta11, d_floor), max(ref.delta22, d_floor), max(ref.delta12, d_floor)])
    res = _solve_p3(prob, p_ref, d_ref, cfg.rho_init if rho is None else rho, ref.n, cfg)
    if res is None:
        raise InfeasibleError("linearised problem infeasible at n_max")
    n, z, lay = res
    eps1, _ = prob.msg_eps
    factor = (1 - eps1) * n
    p11, p12, p2 = np.clip(z[:3], 0.0, None)
    return SlackState(
        delta11=float(max(z[lay.delta(0)], 0.0)),
        delta22=float(max(z[lay.delta(1)], 0.0)),
        delta12=float(max(z[lay.delta(2)], 0.0)),
        tau11=float(z[lay.tau[0]] * factor),
        tau12=float(z[lay.tau[2]] * factor),
        powers=PowerAllocation(float(p11), float(p12), float(p2)),
        n=float(n),
    )


def minimize_blocklength_rsma(sys, s=None, targets=None, cfg=None, split=True, p0=None):
    """Minimum blocklength for RSMA with power allocation.

    ``split=False`` pins p12 to zero and removes stream s12, which must
    reproduce NOMA with U1 decoded first.
    """
    s = s or StreamReliability()
    targets = targets or ThroughputTargets()
    cfg = cfg or SolverConfig()
    prob = _rsma_problem(sys, s, targets, cfg.eps_convention, split)
    if not prob.capacity_bound_ok():
        return SolveReport(prob.scheme, math.inf, {}, {}, 0, [cfg.n_init], INFEASIBLE,
                           ["thresholds exceed the capacity bound at n_max"])
    pt = sys.p_max
    if p0 is not None:
        starts = [p0]
    elif split:
        starts = [[pt / 2, pt / 2, pt]]
        if cfg.multistart:
            starts += [[pt / 2, pt / 2, pt / 2]]
    else:
        starts = [[pt, pt]] + ([[pt, pt / 2]] if cfg.multistart else [])

    def verify(n, p):
        pa = PowerAllocation(*p) if split else PowerAllocation(p[0], 0.0, p[1])
        if split:
            return exact_constraints_satisfied(n, pa, sys, s, targets)
        t1, t2 = noma_effective_throughput(n, pa.p11, pa.p2, sys, (s.eps11, s.eps22))
        return t1 >= targets.t1_th - 1e-6 and t2 >= targets.t2_th - 1e-6

    best = _best_of(prob, cfg, starts, verify)
    if split and p0 is None and cfg.multistart:
        for face in _rsma_faces(sys, s, targets, cfg):
            if face.verified and face.n_star < best.n_star - 1e-9:
                face.events = best.events + face.events
                best = face
    return best


def _rsma_faces(sys, s, targets, cfg):
    """RSMA restricted to p12 = 0 and to p11 = 0, where it is NOMA-12 / NOMA-21."""
    for order, eps, name in ((DecodeOrder.U1_FIRST, (s.eps11, s.eps22), "p12"),
                             (DecodeOrder.U2_FIRST, (s.eps12, s.eps22), "p11")):
        r = minimize_blocklength_noma(sys, eps, targets, cfg, order)
        if not math.isfinite(r.n_star):
            continue
        p1, p2 = r.powers["p1"], r.powers["p2"]
        pa = PowerAllocation(p1, 0.0, p2) if name == "p12" else PowerAllocation(0.0, p1, p2)
        g11, g22, g12 = rsma_sinrs(pa.p11, pa.p12, pa.p2, sys)
        yield SolveReport(
            "rsma", r.n_star, {"p11": pa.p11, "p12": pa.p12, "p2": pa.p2},
            {"delta_11": float(g11), "delta_22": float(g22), "delta_12": float(g12)},
            r.iterations, r.trace, r.status, [f"best on the {name} = 0 face"],
            exact_constraints_satisfied(r.n_star, pa, sys, s, targets),
        )


def _eps_pair(eps):
    if isinstance(eps, StreamReliability):
        return eps.eps11, eps.eps22
    if np.ndim(eps) == 0:
        return float(eps), float(eps)
    return tuple(float(e) for e in eps)


def minimize_blocklength_noma(sys, eps=1e-6, targets=None, cfg=None, order=DecodeOrder.U1_FIRST, p0=None):
    """Minimum blocklength for NOMA (no rate splitting) with power allocation."""
    eps = _eps_pair(eps)
    targets = targets or ThroughputTargets()
    cfg = cfg or SolverConfig()
    order = DecodeOrder(order)
    prob = _noma_problem(sys, eps, targets, cfg.eps_convention, order)
    if not prob.capacity_bound_ok():
        return SolveReport(prob.scheme, math.inf, {}, {}, 0, [cfg.n_init], INFEASIBLE,
                           ["thresholds exceed the capacity bound at n_max"])
    pt = sys.p_max
    if p0 is not None:
        starts = [p0]
    else:
        starts = [[pt, pt]] + ([[pt, pt / 2], [pt / 2, pt]] if cfg.multistart else [])

    def verify(n, p):
        t1, t2 = noma_effective_throughput(n, p[0], p[1], sys, eps, order)
        return t1 >= targets.t1_th - 1e-6 and t2 >= targets.t2_th - 1e-6

    return _best_of(prob, cfg, starts, verify)


def oma_user_blocklength(gamma, share, eps, target, n_floor, n_cap):
    """Smallest per-user blocklength with ``(1-eps) n_u R(n_u) >= target``; inf if above ``n_cap``."""
    if target <= 0:
        return n_floor

    def excess(nu_):
        r = oma_user_rate(nu_, gamma, share, eps)
        return (1 - eps) * nu_ * max(r, 0.0) - target

    if excess(n_floor) >= 0:
        return n_floor
    if excess(n_cap) < 0:
        return math.inf
    return brentq(excess, n_floor, n_cap, xtol=1e-10, rtol=1e-14)


def oma_total_blocklength(p1, p2, alpha, sys, eps, targets, scheme):
    """Total blocklength n = n1 + n2 needed at fixed powers and split.

    Each user's share must lie in [n_min, n_max] and meet its threshold.
    """
    if not 0 < alpha < 1:
        return math.inf
    g1, g2 = oma_sinrs(p1, p2, alpha, sys, scheme)
    n1 = oma_user_blocklength(g1, alpha, eps[0], targets.t1_th, sys.n_min, sys.n_max)
    n2 = oma_user_blocklength(g2, 1 - alpha, eps[1], targets.t2_th, sys.n_min, sys.n_max)
    n = max(n1 / alpha, n2 / (1 - alpha))
    # the other user's share grows with n; it must stay inside the box
    if alpha * n > sys.n_max * (1 + 1e-12) or (1 - alpha) * n > sys.n_max * (1 + 1e-12):
        return math.inf
    return n


def _oma_powers(alpha, sys, rule):
    if rule == "power_ratio":
        # alpha = P1/(P1+P2) and every SINR grows with P1+P2, so the larger
        # of the two powers sits at the budget
        if alpha >= 0.5:
            return sys.p_max, sys.p_max * (1 - alpha) / alpha
        return sys.p_max * alpha / (1 - alpha), sys.p_max
    return sys.p_max, sys.p_max


def minimize_blocklength_oma(sys, eps=1e-6, targets=None, cfg=None, scheme=OmaScheme.FDMA):
    """Minimum total blocklength n1 + n2 for FDMA or TDMA."""
    eps = _eps_pair(eps)
    targets = targets or ThroughputTargets()
    cfg = cfg or SolverConfig()
    scheme = OmaScheme(scheme)
    rule = cfg.alpha_rule
    name = scheme.value

    def total(alpha):
        p1, p2 = _oma_powers(alpha, sys, rule)
        return oma_total_blocklength(p1, p2, alpha, sys, eps, targets, scheme)

    if rule in ("power_ratio", "optimized"):
        grid = np.linspace(0.0, 1.0, 401)[1:-1]  # contains alpha = 1/2
        values = np.array([total(a) for a in grid])
        i = int(np.argmin(values))
        best_alpha, best_n = float(grid[i]), float(values[i])
        if math.isfinite(best_n):
            lo = grid[max(i - 1, 0)]
            hi = grid[min(i + 1, len(grid) - 1)]
            res = minimize_scalar(total, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-12, "maxiter": 200})
            if res.fun < best_n:
                best_alpha, best_n = float(res.x), float(res.fun)
        trace = [cfg.n_init, float(values[i]), best_n]
    else:
        best_alpha = float(rule)
        best_n = total(best_alpha)
        trace = [cfg.n_init, best_n]
    p1, p2 = _oma_powers(best_alpha, sys, rule)
    if rule == "power_ratio":
        best_alpha = power_ratio_alpha(p1, p2)
    powers = {"p1": float(p1), "p2": float(p2), "alpha": best_alpha}
    if not math.isfinite(best_n):
        return SolveReport(name, math.inf, powers, {}, 1, trace, INFEASIBLE)
    report = SolveReport(name, best_n, powers, {"n1": best_alpha * best_n, "n2": (1 - best_alpha) * best_n},
                         1, trace, CONVERGED)
    t1, t2 = oma_effective_throughput(best_n, p1, p2, best_alpha, sys, eps, scheme)
    report.verified = t1 >= targets.t1_th - 1e-6 and t2 >= targets.t2_th - 1e-6
    return report


def minimize_blocklength(scheme, sys, s=None, targets=None, cfg=None):
    """Dispatch by scheme name: rsma, noma12, noma21, fdma, tdma."""
    s = s or StreamReliability()
    scheme = scheme.lower()
    if scheme == "rsma":
        return minimize_blocklength_rsma(sys, s, targets, cfg)
    if scheme in ("noma", "noma12"):
        return minimize_blocklength_noma(sys, (s.eps11, s.eps22), targets, cfg, DecodeOrder.U1_FIRST)
    if scheme == "noma21":
        return minimize_blocklength_noma(sys, (s.eps11, s.eps22), targets, cfg, DecodeOrder.U2_FIRST)
    if scheme in ("fdma", "tdma"):
        return minimize_blocklength_oma(sys, (s.eps11, s.eps22), targets, cfg, scheme)
    raise DomainError(f"unknown scheme {scheme!r}")
