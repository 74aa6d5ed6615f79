import math

import pytest
from hypothesis import given, strategies as st

from rsma_fbl import (DecodeOrder, DomainError, OmaScheme, PowerAllocation, StreamReliability,
                      SystemParams, ThroughputTargets, fbl_rate, noma_effective_throughput,
                      noma_message_errors, oma_effective_throughput, rsma_effective_throughput,
                      rsma_message_errors, shannon_capacity)
from rsma_fbl.reliability import oma_user_rate, rsma_message_errors_at

probs = st.floats(min_value=1e-12, max_value=1e-3)


def test_types_validate():
    with pytest.raises(DomainError):
        StreamReliability(0.0, 1e-6, 1e-6)
    with pytest.raises(DomainError):
        StreamReliability(1e-6, 1.0, 1e-6)
    with pytest.raises(DomainError):
        ThroughputTargets(-1.0, 0.0)


def test_rsma_message_errors_approx():
    e1, e2 = rsma_message_errors(StreamReliability.uniform(1e-6))
    assert e1 == pytest.approx(3e-6, rel=1e-12)
    assert e2 == pytest.approx(2e-6, rel=1e-12)


def test_rsma_message_errors_exact():
    e = 1e-6
    e1, e2 = rsma_message_errors(e, e, e, exact=True)
    assert e1 == pytest.approx(e + (1 - e) * e + (1 - e) ** 2 * e, rel=1e-14)
    assert e2 == pytest.approx(e + (1 - e) * e, rel=1e-14)
    assert rsma_message_errors(0.0, 0.0, 0.0, exact=True) == (0.0, 0.0)


@given(probs, probs, probs)
def test_exact_below_approx_by_second_order(a, b, c):
    ex = rsma_message_errors(a, b, c, exact=True)
    ap = rsma_message_errors(a, b, c)
    m = max(a, b, c)
    for x, y in zip(ex, ap):
        assert 0 <= x <= y
        assert y - x <= 3 * m * m + 4 * 2.2e-16 * y


def test_noma_message_errors():
    e1, e2 = noma_message_errors(1e-6, 1e-6)
    assert e1 == pytest.approx(2e-6) and e2 == 1e-6
    assert noma_message_errors(0.0, 0.3) == (0.3, 0.3)
    assert noma_message_errors(0.3, 0.0) == (0.3, 0.0)
    # mirrored order swaps the roles
    assert noma_message_errors(0.1, 0.2, order=DecodeOrder.U2_FIRST) == (0.1, pytest.approx(0.3))


def test_message_errors_on_faces():
    s = StreamReliability(1e-6, 2e-6, 3e-6)
    assert rsma_message_errors_at(PowerAllocation(1, 1, 1), s) == rsma_message_errors(s)
    assert rsma_message_errors_at(PowerAllocation(1, 0, 1), s) == noma_message_errors(1e-6, 3e-6)
    assert rsma_message_errors_at(PowerAllocation(0, 1, 1), s) == noma_message_errors(
        2e-6, 3e-6, order=DecodeOrder.U2_FIRST)


def test_rsma_throughput_composition(unit_sys, rel):
    t1, t2 = rsma_effective_throughput(1000, PowerAllocation(1, 1, 1), unit_sys, rel)
    expected1 = (1 - 3e-6) * 1000 * (fbl_rate(1000, 1 / 2.7, 1e-6) + fbl_rate(1000, 1.0, 1e-6))
    expected2 = (1 - 2e-6) * 1000 * fbl_rate(1000, 0.35, 1e-6)
    assert t1 == pytest.approx(expected1, rel=1e-13)
    assert t2 == pytest.approx(expected2, rel=1e-13)


def test_rsma_throughput_clamped(unit_sys):
    s = StreamReliability.uniform(1e-9)
    assert rsma_effective_throughput(1, PowerAllocation(1e-3, 1e-3, 1e-3), unit_sys, s) == (0.0, 0.0)


def test_rsma_throughput_half_error_on_p12_face(unit_sys):
    # at eps = 0.5 the dispersion term vanishes; with s12 silent U1's message
    # survives with probability (1 - 0.5)(1 - 0.5) = 1/4
    s = StreamReliability.uniform(0.5)
    n = 400
    t1, _ = rsma_effective_throughput(n, PowerAllocation(1.0, 0.0, 1.0), unit_sys, s, exact_errors=True)
    assert t1 == pytest.approx(0.25 * n * shannon_capacity(1 / 1.7), rel=1e-13)


def test_rsma_with_silent_s12_equals_noma(sys5, rel):
    for p11, p2 in [(1.0, 1.0), (3.1, 0.2), (0.3, 2.9)]:
        for n in (100, 517.3, 3000):
            a = rsma_effective_throughput(n, PowerAllocation(p11, 0.0, p2), sys5, rel)
            b = noma_effective_throughput(n, p11, p2, sys5, (rel.eps11, rel.eps22))
            assert a == pytest.approx(b, abs=1e-9)


def test_noma_throughput(unit_sys):
    assert noma_effective_throughput(500, 0.0, 0.0, unit_sys, (1e-6, 1e-6)) == (0.0, 0.0)
    t1, t2 = noma_effective_throughput(500, 2, 1, unit_sys, (0.5, 0.5), exact_errors=True)
    assert t1 == pytest.approx(0.25 * 500 * shannon_capacity(2 / 1.7))
    assert t2 == pytest.approx(0.5 * 500 * shannon_capacity(0.7))
    t1, t2 = noma_effective_throughput(800, 2, 1, unit_sys, (1e-6, 1e-6), DecodeOrder.U2_FIRST)
    assert t1 == pytest.approx((1 - 1e-6) * 800 * fbl_rate(800, 2.0, 1e-6))
    assert t2 == pytest.approx((1 - 2e-6) * 800 * fbl_rate(800, 0.7 / 3, 1e-6))


def test_oma_user_rate_formula():
    g, a, n, e = 2.0, 2 / 3, 666.67, 1e-6
    expected = a * math.log2(3) - math.sqrt((1 - 1 / 9) / n) * 4.753424308822899 * math.log2(math.e)
    assert oma_user_rate(n, g, a, e) == pytest.approx(expected, rel=1e-12)


def test_oma_throughput(unit_sys):
    n, a = 1000, 2 / 3
    t1, _ = oma_effective_throughput(n, 2, 1, a, unit_sys, (1e-6, 1e-6), OmaScheme.TDMA)
    assert t1 == pytest.approx((1 - 1e-6) * a * n * oma_user_rate(a * n, 2.0, a, 1e-6), rel=1e-13)
    sym = SystemParams(g1=1.0, g2=1.0)
    t1, t2 = oma_effective_throughput(800, 1.3, 1.3, 0.5, sym, (1e-6, 1e-6), "fdma")
    assert t1 == pytest.approx(t2, rel=1e-14)
    t1, _ = oma_effective_throughput(600, 2, 1, a, unit_sys, (0.5, 0.5), "tdma")
    assert t1 == pytest.approx(0.5 * a * 600 * a * math.log2(3))
    with pytest.raises(DomainError):
        oma_effective_throughput(600, 2, 1, 1.0, unit_sys, (0.5, 0.5), "tdma")


@given(st.floats(0.05, 3), st.floats(0.05, 3), st.floats(0.05, 3), st.floats(100, 2999))
def test_throughput_increasing_in_n(p11, p12, p2, n):
    sys = SystemParams(p_max=6.0)
    s = StreamReliability.uniform(1e-6)
    p = PowerAllocation(p11, p12, p2)
    lo = rsma_effective_throughput(n, p, sys, s)
    hi = rsma_effective_throughput(n + 1, p, sys, s)
    assert hi[0] >= lo[0] and hi[1] >= lo[1]
