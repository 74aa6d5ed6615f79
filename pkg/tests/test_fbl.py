import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from rsma_fbl import (DomainError, channel_dispersion, dispersion_penalty, fbl_rate,
                      fbl_rate_clamped, inverse_q, q_function, shannon_capacity)
from rsma_fbl.fbl import LOG2E


def _tail_by_quadrature(x):
    pdf = lambda t: math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi)
    return quad(pdf, x, math.inf, epsabs=0, epsrel=1e-13, limit=200)[0]


def _inverse_by_bisection(p):
    lo, hi = -10.0, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _tail_by_quadrature(mid) > p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("p", [1e-9, 1e-6, 1e-5, 1e-3, 0.1, 0.5, 0.9])
def test_inverse_q_matches_quadrature_bisection(p):
    assert inverse_q(p) == pytest.approx(_inverse_by_bisection(p), abs=1e-9)


def test_inverse_q_reference_value():
    # independent quadrature + bisection, computed before the implementation existed
    assert inverse_q(1e-6) == pytest.approx(4.753424, abs=1e-6)
    assert inverse_q(0.5) == 0.0


@given(st.floats(min_value=1e-4, max_value=1 - 1e-4))
def test_inverse_q_odd_symmetry(p):
    # 1 - p is exact to ~1e-16 here, so the mirrored value is well conditioned
    assert inverse_q(p) == pytest.approx(-inverse_q(1 - p), abs=1e-9)


@given(st.floats(min_value=1e-15, max_value=0.5))
def test_q_of_inverse_round_trip(p):
    assert q_function(inverse_q(p)) == pytest.approx(p, rel=1e-9)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_inverse_q_domain(bad):
    with pytest.raises(DomainError):
        inverse_q(bad)


def test_inverse_q_vectorised():
    p = np.array([1e-6, 0.5, 0.9])
    out = inverse_q(p)
    assert out.shape == (3,)
    assert out[1] == 0.0


def test_dispersion_values():
    assert channel_dispersion(0.0) == 0.0
    assert channel_dispersion(1.0) == pytest.approx(0.75, abs=1e-15)
    g = np.logspace(-3, 6, 50)
    v = channel_dispersion(g)
    assert np.all(np.diff(v) > 0) and np.all(v < 1)
    with pytest.raises(DomainError):
        channel_dispersion(-0.1)


def test_capacity_values():
    assert shannon_capacity(0.0) == 0.0
    assert shannon_capacity(1.0) == 1.0
    assert shannon_capacity(3.0) == 2.0
    with pytest.raises(DomainError):
        shannon_capacity(-1.0)


def test_dispersion_penalty_values():
    assert dispersion_penalty(500, 0.0, 1e-6) == 0.0
    assert dispersion_penalty(500, 2.0, 0.5) == 0.0
    expected = math.sqrt(0.75 / 500) * 4.753424308822899 * LOG2E
    assert dispersion_penalty(500, 1.0, 1e-6) == pytest.approx(expected, rel=1e-12)
    # sqrt(0.75/500) * 4.753424 * 1.442695 = 0.265599...
    assert dispersion_penalty(500, 1.0, 1e-6) == pytest.approx(0.2656, abs=1e-4)
    with pytest.raises(DomainError):
        dispersion_penalty(0, 1.0, 1e-6)


@given(st.floats(min_value=1.0, max_value=1e6), st.floats(min_value=1e-4, max_value=1e4),
       st.floats(min_value=1e-12, max_value=0.49))
def test_penalty_scales_with_inverse_root_n(n, gamma, eps):
    assert dispersion_penalty(4 * n, gamma, eps) == pytest.approx(dispersion_penalty(n, gamma, eps) / 2, rel=1e-12)


def test_fbl_rate_values():
    assert fbl_rate(500, 1.0, 1e-6) == pytest.approx(1 - dispersion_penalty(500, 1.0, 1e-6), abs=1e-15)
    assert fbl_rate(500, 1.0, 1e-6) == pytest.approx(0.7344, abs=1e-4)
    assert fbl_rate(math.inf, 1.0, 1e-6) == 1.0
    assert fbl_rate(1e12, 1.0, 1e-6) == pytest.approx(1.0, abs=1e-5)
    for g in (0.1, 1.0, 7.0):
        assert fbl_rate(123, g, 0.5) == shannon_capacity(g)


def test_fbl_rate_clamping():
    assert fbl_rate(100, 0.01, 1e-9) < 0
    assert fbl_rate_clamped(100, 0.01, 1e-9) == 0.0
    assert fbl_rate_clamped(100, 3.0, 1e-6) == fbl_rate(100, 3.0, 1e-6)


@settings(max_examples=200)
@given(st.floats(min_value=10, max_value=1e5), st.floats(min_value=1e-3, max_value=100),
       st.floats(min_value=1e-10, max_value=0.3))
def test_rate_increasing_in_n_and_eps(n, gamma, eps):
    assert fbl_rate(2 * n, gamma, eps) > fbl_rate(n, gamma, eps)
    assert fbl_rate(n, gamma, min(10 * eps, 0.49)) >= fbl_rate(n, gamma, eps)
    assert fbl_rate(n, gamma, eps) < shannon_capacity(gamma)
