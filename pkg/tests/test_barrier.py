import numpy as np
import pytest
from scipy.optimize import linprog, minimize

from rsma_fbl.barrier import barrier_maximize


def test_lp_matches_linprog():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m, d = 8, 3
        A = rng.normal(size=(m, d))
        b = np.abs(rng.normal(size=m)) + 0.5        # z = 0 strictly feasible
        box = np.vstack([np.eye(d), -np.eye(d)])
        A = np.vstack([A, box])
        b = np.concatenate([b, 5 * np.ones(2 * d)])
        c = rng.normal(size=d)
        res = barrier_maximize(c, A, b, np.zeros(len(b)), np.zeros(len(b), dtype=int), np.zeros(d),
                               gap_tol=1e-10)
        ref = linprog(-c, A_ub=-A, b_ub=b, bounds=[(None, None)] * d)
        assert res.value == pytest.approx(-ref.fun, abs=1e-7)


def test_log_rows_match_slsqp():
    # maximise z0 + z1 s.t. log(1 + z0) - z1 >= 0.5, z1 >= 0, z0 <= 3
    A = np.array([[0.0, -1.0], [0.0, 1.0], [-1.0, 0.0]])
    b = np.array([-0.5, 0.0, 3.0])
    w = np.array([1.0, 0.0, 0.0])
    idx = np.array([0, 0, 0])
    res = barrier_maximize(np.array([1.0, 1.0]), A, b, w, idx, np.array([1.5, 0.1]), gap_tol=1e-11)
    assert res.z[0] == pytest.approx(3.0, abs=1e-8)
    assert res.z[1] == pytest.approx(np.log(4.0) - 0.5, abs=1e-8)
    assert res.gap < 1e-10


def test_rejects_infeasible_start():
    with pytest.raises(ValueError):
        barrier_maximize(np.ones(1), np.ones((1, 1)), np.array([-1.0]), np.zeros(1),
                         np.zeros(1, dtype=int), np.zeros(1))


def test_early_stop():
    A = np.array([[1.0], [-1.0]])
    b = np.array([1.0, 1.0])
    res = barrier_maximize(np.ones(1), A, b, np.zeros(2), np.zeros(2, dtype=int), np.zeros(1),
                           stop=lambda z, v, g: v > 0.5)
    assert res.stopped_early and res.value > 0.5
