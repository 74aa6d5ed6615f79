"""
Damped-Newton log-barrier method for small concave programs.

Solves

    maximize    c @ z
    subject to  G(z) = A @ z + b + w * log1p(z[idx]) >= 0

where every row is affine plus (optionally, ``w > 0``) one concave
``log(1 + z_j)`` term.  That is enough to express the linearised
blocklength subproblems, which have at most a dozen variables, so
everything is dense numpy.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class BarrierResult:
    z: np.ndarray
    value: float
    gap: float          # m / t: the optimum is at most value + gap
    newton_steps: int
    stopped_early: bool


def _constraints(z, A, b, w, idx):
    arg = 1.0 + z[idx]
    if np.any(arg <= 0.0):
        return None
    return A @ z + b + w * np.log(arg)


def barrier_maximize(c, A, b, w, idx, z0, t0=1.0, mu=8.0, gap_tol=1e-8,
                     newton_tol=1e-9, max_newton=80, stop=None):
    """Maximise ``c @ z`` from the strictly feasible start ``z0``.

    ``stop(z, value, gap)`` may end the outer loop early, e.g. once a
    feasibility certificate is available in either direction.

    Raises:
        ValueError: if ``z0`` is not strictly feasible.
    """
    A = np.asarray(A, dtype=float)
    m = A.shape[0]
    z = np.array(z0, dtype=float)
    G = _constraints(z, A, b, w, idx)
    if G is None or np.any(G <= 0):
        raise ValueError("barrier start point is not strictly feasible")
    rows = np.arange(m)
    t = t0
    steps = 0

    def merit(zz, tt):
        gg = _constraints(zz, A, b, w, idx)
        if gg is None or np.any(gg <= 0):
            return np.inf
        return -tt * (c @ zz) - np.sum(np.log(gg))

    while True:
        for _ in range(max_newton):
            G = _constraints(z, A, b, w, idx)
            arg = 1.0 + z[idx]
            J = A.copy()
            J[rows, idx] += w / arg
            inv = 1.0 / G
            grad = -t * c - J.T @ inv
            H = (J.T * inv**2) @ J
            np.add.at(H, (idx, idx), w * inv / arg**2)
            try:
                dz = -np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                dz = -np.linalg.lstsq(H, grad, rcond=None)[0]
            decrement = -grad @ dz
            steps += 1
            if decrement / 2.0 <= newton_tol:
                break
            f0 = merit(z, t)
            step = 1.0
            while step > 1e-14:
                trial = z + step * dz
                if merit(trial, t) <= f0 - 0.25 * step * decrement:
                    break
                step *= 0.5
            else:
                break
            z = trial
        value = float(c @ z)
        gap = m / t
        if stop is not None and stop(z, value, gap):
            return BarrierResult(z, value, gap, steps, True)
        if gap < gap_tol:
            return BarrierResult(z, value, gap, steps, False)
        t *= mu
