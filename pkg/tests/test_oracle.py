import math

import numpy as np
import pytest
from scipy.stats import norm

from rsma_fbl import InfeasibleError, DomainError, StreamReliability
from rsma_fbl.oracle import GridSpec, oracle_best_point, oracle_feasible, oracle_min_blocklength

from conftest import system_at, targets

EPS = StreamReliability(1e-6, 1e-6, 1e-6)


def _scalar_min_n(gamma, eps_rate, eps_msg, t, n_min, n_max):
    """Independent reference: smallest integer n with (1-eps) n R(n) >= t."""
    def ok(n):
        v = 1 - (1 + gamma) ** -2
        r = math.log2(1 + gamma) - math.sqrt(v / n) * norm.isf(eps_rate) / math.log(2)
        return (1 - eps_msg) * n * max(r, 0.0) >= t
    lo, hi = int(n_min), int(n_max)
    if ok(lo):
        return lo
    assert ok(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (lo, mid) if ok(mid) else (mid, hi)
    return hi


@pytest.mark.parametrize("scheme", ["rsma", "noma12", "noma21"])
def test_feasibility_is_monotone_in_n(scheme):
    sys = system_at(5.0)
    t = targets(300, 200)
    grid = GridSpec(power_steps=16)
    rng = np.random.default_rng(11)
    for _ in range(25):
        a, b = np.sort(rng.uniform(100, 3000, size=2))
        if oracle_feasible(a, scheme, sys, EPS, t, grid):
            assert oracle_feasible(b, scheme, sys, EPS, t, grid)


@pytest.mark.parametrize("scheme", ["rsma", "noma12", "noma21", "fdma", "tdma"])
def test_finer_nested_grid_never_worse(scheme):
    sys = system_at(2.0)
    t = targets(200, 300)
    coarse = oracle_min_blocklength(scheme, sys, EPS, t, GridSpec(power_steps=8, refine_levels=0))
    fine = oracle_min_blocklength(scheme, sys, EPS, t, GridSpec(power_steps=16, refine_levels=0))
    zoomed = oracle_min_blocklength(scheme, sys, EPS, t, GridSpec(power_steps=16, refine_levels=2))
    assert zoomed <= fine <= coarse


def test_single_user_noma_matches_scalar_search():
    sys = system_at(5.0)
    eps = StreamReliability(1e-6, 1e-5, 1e-4)
    t = targets(400, 0)
    gamma = sys.p_max * sys.g1 / sys.noise_var           # best with U2 silent
    ref = _scalar_min_n(gamma, eps.eps11, eps.eps11 + eps.eps22, 400, sys.n_min, sys.n_max)
    assert oracle_min_blocklength("noma12", sys, eps, t) == ref


def test_single_user_rsma_uses_the_cheaper_stream():
    # with U2 silent, U1 is best served by s12 alone, whose message error is eps12 only
    sys = system_at(5.0)
    eps = StreamReliability(1e-6, 1e-5, 1e-4)
    t = targets(400, 0)
    gamma = sys.p_max * sys.g1 / sys.noise_var
    via_s12 = _scalar_min_n(gamma, eps.eps12, eps.eps12, 400, sys.n_min, sys.n_max)
    via_s11 = _scalar_min_n(gamma, eps.eps11, eps.eps11 + eps.eps22, 400, sys.n_min, sys.n_max)
    assert oracle_min_blocklength("rsma", sys, eps, t) == min(via_s11, via_s12)
    n, pt = oracle_best_point("rsma", sys, eps, t)
    assert n == min(via_s11, via_s12)


@pytest.mark.parametrize("scheme, floor", [("rsma", 100), ("noma21", 100), ("tdma", 200)])
def test_zero_thresholds_hit_the_floor(scheme, floor):
    assert oracle_min_blocklength(scheme, system_at(2.0), EPS, targets(0, 0)) == floor


def test_unreachable_thresholds_raise():
    with pytest.raises(InfeasibleError):
        oracle_min_blocklength("rsma", system_at(2.0), EPS, targets(5000, 5000))
    with pytest.raises(DomainError):
        oracle_min_blocklength("cdma", system_at(2.0), EPS, targets(1, 1))
