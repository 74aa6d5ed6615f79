"""
Experiment drivers behind the CLI.

Each driver turns a :class:`Scenario` into a :class:`Dataset` of flat
rows.  Rows carry the scenario hash, the scheme and every sweep
coordinate, so any single row can be regenerated on its own.  Work is
fanned out to a process pool when ``workers > 1``; results come back
in submission order, so output never depends on the worker count.
"""

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import DecodeOrder, OmaScheme, noma_sinrs, power_ratio_alpha
from .errors import InfeasibleError
from .fbl import fbl_rate_clamped
from .oracle import GridSpec, oracle_min_blocklength
from .region import (ibl_mac_pentagon, noma_fbl_curve, oma_rate_pair, pentagon_sum_rate,
                     rsma_fbl_sweep)
from .scenario import optimisation_schemes
from .solver import INFEASIBLE, SolverConfig, minimize_blocklength

_ORDERS = {"noma12": DecodeOrder.U1_FIRST, "noma21": DecodeOrder.U2_FIRST}


@dataclass
class Dataset:
    """Column names plus rows, emitted in a fixed order."""

    columns: tuple
    rows: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def records(self):
        return [dict(zip(self.columns, r)) for r in self.rows]

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()

    def to_json(self):
        recs = [{k: _json_val(v) for k, v in zip(self.columns, r)} for r in self.rows]
        return json.dumps({"columns": list(self.columns), "rows": recs}, indent=1) + "\n"

    def write(self, path, fmt="csv"):
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _fmt(v):
    if isinstance(v, float):
        return "inf" if v == math.inf else repr(v)
    return str(v)


def _json_val(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else "nan"
    return v


def _pool_map(fn, tasks, workers):
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks))


# --------------------------------------------------------------------------
# Rate regions
# --------------------------------------------------------------------------

REGION_COLUMNS = ("scenario_hash", "experiment", "scheme", "n", "kind", "coord", "r1", "r2")


def _pentagon_samples(p1, p2, sys, num):
    """``num`` points along the IBL MAC boundary, spaced evenly in r1."""
    b = ibl_mac_pentagon(p1, p2, sys)
    r1 = np.linspace(0.0, b.r1[-1], num)
    return r1, np.interp(r1, b.r1, b.r2)


def _region_task(args):
    scen, scheme, n = args
    sys = scen.system()
    p1, p2 = scen.user_powers()
    s = scen.reliability
    eps = (s.eps11, s.eps22)
    num = scen.num_points
    if scheme == "rsma":
        coord, r1, r2, _ = rsma_fbl_sweep(n, p1, p2, sys, s, num)
        kind = "beta"
    elif scheme in _ORDERS:
        coord, r1, r2 = noma_fbl_curve(n, p1, p2, sys, eps, _ORDERS[scheme], num)
        kind = "power_fraction"
    elif scheme in ("fdma", "tdma"):
        coord = np.linspace(0.0, 1.0, num + 2)[1:-1]
        r1, r2 = oma_rate_pair(n, p1, p2, coord, sys, eps, OmaScheme(scheme))
        kind = "alpha"
    else:
        # the IBL pentagon does not depend on n; repeated so every block has equal size
        r1, r2 = _pentagon_samples(p1, p2, sys, num)
        coord = np.linspace(0.0, 1.0, num)
        kind = "r1_fraction"
    return [
        (scen.hash, "region", scheme, float(n), kind, float(c), float(a), float(b))
        for c, a, b in zip(coord, r1, r2)
    ]


def run_region_experiment(scen, workers=1):
    """Rate-region samples for every scheme and blocklength of ``scen``.

    Rows come in blocks of ``num_points`` per (blocklength, scheme).
    RSMA rows are the raw power-split sweep; the Pareto boundary can be
    recovered with :func:`rsma_fbl_boundary`.
    """
    tasks = [(scen, scheme, n) for n in scen.n_list for scheme in scen.schemes]
    ds = Dataset(REGION_COLUMNS)
    for block in _pool_map(_region_task, tasks, workers):
        ds.rows.extend(block)
    return ds


# --------------------------------------------------------------------------
# Minimum blocklength sweeps
# --------------------------------------------------------------------------

MINLEN_COLUMNS = (
    "scenario_hash", "experiment", "scheme", "pt_db", "eps11", "eps12", "eps22",
    "t1_th", "t2_th", "n_star", "n_int", "status", "verified", "iterations", "powers",
)


def _minlen_task(args):
    scen, experiment, scheme = args
    cfg = SolverConfig(alpha_rule=scen.alpha_rule)
    sys = scen.system()
    s = scen.reliability
    r = minimize_blocklength(scheme, sys, s, scen.targets, cfg)
    powers = ";".join(f"{k}={v!r}" for k, v in r.powers.items())
    return (
        scen.hash, experiment, scheme, scen.pt_db[0], s.eps11, s.eps12, s.eps22,
        scen.targets.t1_th, scen.targets.t2_th, float(r.n_star),
        "" if r.n_int is None else r.n_int, r.status, bool(r.verified), r.iterations, powers,
    )


def _minlen_rows(points, experiment, scen, workers):
    tasks = [(p, experiment, scheme) for p in points for scheme in optimisation_schemes(scen)]
    ds = Dataset(MINLEN_COLUMNS, _pool_map(_minlen_task, tasks, workers))
    # rows keep the parent hash so a sweep's rows group together
    ds.rows = [(scen.hash,) + r[1:] for r in ds.rows]
    return ds


def _pt_values(scen):
    return scen.sweep.values if scen.sweep.axis == "pt_db" else scen.pt_db


def run_blocklength_vs_power(scen, workers=1):
    """Minimum blocklength per scheme over the transmit-power sweep (dB).

    Infeasible points appear as rows with ``status = infeasible`` and
    ``n_star = inf``.
    """
    points = [scen.with_sweep_point("pt_db", pt) for pt in _pt_values(scen)]
    return _minlen_rows(points, "minlen-power", scen, workers)


def run_blocklength_vs_epsilon(scen, workers=1):
    """Minimum blocklength per scheme over the error-probability sweep.

    One group of rows per listed ``pt_db`` value; every stream gets the
    swept error probability.
    """
    eps_values = scen.sweep.values if scen.sweep.axis == "eps" else (scen.reliability.eps11,)
    points = [
        scen.with_sweep_point("pt_db", pt).with_sweep_point("eps", e)
        for pt in scen.pt_db for e in eps_values
    ]
    return _minlen_rows(points, "minlen-eps", scen, workers)


# --------------------------------------------------------------------------
# Sum rate versus blocklength
# --------------------------------------------------------------------------

SUMRATE_COLUMNS = ("scenario_hash", "experiment", "scheme", "pt_db", "n", "sum_rate", "argmax")


def _grid_max_sum(n, scheme, sys, eps, steps, alpha_rule):
    """Largest r1 + r2 over a power grid (and the maximiser, as text)."""
    a = np.linspace(0.0, sys.p_max, steps + 1)
    p1, p2 = (x.ravel() for x in np.meshgrid(a, a, indexing="ij"))
    if scheme in _ORDERS:
        g1, g2 = noma_sinrs(p1, p2, sys, _ORDERS[scheme])
        total = fbl_rate_clamped(n, g1, eps[0]) + fbl_rate_clamped(n, g2, eps[1])
        i = int(np.argmax(total))
        return float(total[i]), f"p1={p1[i]!r};p2={p2[i]!r}"
    keep = (p1 + p2) > 0
    p1, p2 = p1[keep], p2[keep]
    if alpha_rule == "power_ratio":
        alpha = np.array([power_ratio_alpha(x, y) for x, y in zip(p1, p2)])
    elif alpha_rule == "optimized":
        grid = np.linspace(0.0, 1.0, steps + 1)[1:-1]
        p1, p2 = np.repeat(p1, len(grid)), np.repeat(p2, len(grid))
        alpha = np.tile(grid, len(p1) // len(grid))
    else:
        alpha = np.full(len(p1), float(alpha_rule))
    ok = (alpha > 0) & (alpha < 1)
    p1, p2, alpha = p1[ok], p2[ok], alpha[ok]
    r1, r2 = oma_rate_pair(n, p1, p2, alpha, sys, eps, OmaScheme(scheme))
    total = r1 + r2
    i = int(np.argmax(total))
    return float(total[i]), f"p1={p1[i]!r};p2={p2[i]!r};alpha={alpha[i]!r}"


def _sumrate_task(args):
    scen, n = args
    sys = scen.system()
    s = scen.reliability
    eps = (s.eps11, s.eps22)
    pt = scen.pt_db[0]
    rows = []
    for scheme in optimisation_schemes(scen):
        if scheme == "rsma":
            beta, r1, r2, _ = rsma_fbl_sweep(n, sys.p_max, sys.p_max, sys, s, scen.num_points)
            total = r1 + r2
            i = int(np.argmax(total))
            rows.append((scen.hash, "sumrate", "rsma", pt, float(n), float(total[i]), f"beta={beta[i]!r}"))
            # without power allocation: U1's budget split evenly between its streams
            _, r1, r2, _ = rsma_fbl_sweep(n, sys.p_max, sys.p_max, sys, s, 3)
            rows.append((scen.hash, "sumrate", "rsma-nopa", pt, float(n), float(r1[1] + r2[1]), "beta=0.5"))
        else:
            val, arg = _grid_max_sum(n, scheme, sys, eps, scen.power_steps, scen.alpha_rule)
            rows.append((scen.hash, "sumrate", scheme, pt, float(n), val, arg))
    ibl = float(pentagon_sum_rate(sys.p_max, sys.p_max, sys))
    rows.append((scen.hash, "sumrate", "ibl", pt, float(n), ibl, "full power"))
    return rows


def run_sumrate_vs_blocklength(scen, workers=1):
    """Best sum rate per scheme at each blocklength of the sweep.

    RSMA maximises over the power split at full transmit power and is
    also reported with an even split (``rsma-nopa``); NOMA and OMA
    maximise over a power grid; ``ibl`` is C(gamma_sum) at full power.
    """
    n_values = scen.sweep.values if scen.sweep.axis == "n" else tuple(x for x in scen.n_list if math.isfinite(x))
    ds = Dataset(SUMRATE_COLUMNS)
    for block in _pool_map(_sumrate_task, [(scen, n) for n in n_values], workers):
        ds.rows.extend(block)
    return ds


# --------------------------------------------------------------------------
# Oracle cross-check
# --------------------------------------------------------------------------

VERIFY_COLUMNS = (
    "scenario_hash", "experiment", "scheme", "pt_db", "n_star", "n_int", "oracle_min",
    "in_band", "verified", "ok",
)


def _verify_task(args):
    scen, scheme = args
    cfg = SolverConfig(alpha_rule=scen.alpha_rule)
    sys = scen.system()
    r = minimize_blocklength(scheme, sys, scen.reliability, scen.targets, cfg)
    grid = GridSpec(power_steps=scen.power_steps, alpha_rule=scen.alpha_rule)
    try:
        o = oracle_min_blocklength(scheme, sys, scen.reliability, scen.targets, grid)
    except InfeasibleError:
        o = math.inf
    if r.status == INFEASIBLE or not math.isfinite(r.n_star):
        in_band = not math.isfinite(o)
        n_int = ""
    else:
        n_int = r.n_int
        in_band = o <= n_int <= 1.02 * o + 2
    ok = bool(in_band and (r.verified or r.status == INFEASIBLE))
    return (scen.hash, "verify", scheme, scen.pt_db[0], float(r.n_star), n_int, float(o),
            bool(in_band), bool(r.verified), ok)


def run_verify(scen, workers=1):
    """Solver against the grid oracle for every scheme and power of ``scen``.

    A row is ``ok`` when ``oracle <= ceil(n_star) <= 1.02 * oracle + 2``
    and the reported powers meet the exact constraints.
    """
    points = [scen.with_sweep_point("pt_db", pt) for pt in _pt_values(scen)]
    tasks = [(p, scheme) for p in points for scheme in optimisation_schemes(scen)]
    ds = Dataset(VERIFY_COLUMNS, _pool_map(_verify_task, tasks, workers))
    ds.rows = [(scen.hash,) + r[1:] for r in ds.rows]
    return ds
