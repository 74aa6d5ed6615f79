import math

import pytest

from rsma_fbl import StreamReliability, SystemParams, ThroughputTargets, db_to_linear

# simulation set-up used throughout: G1 = 1, G2 = 0.7, unit noise, n in [100, 3000]
REF_EPS = 1e-6


def system_at(pt_db):
    return SystemParams(g1=1.0, g2=0.7, noise_var=1.0, p_max=float(db_to_linear(pt_db)),
                        n_min=100, n_max=3000)


@pytest.fixture
def sys5():
    return system_at(5.0)


@pytest.fixture
def sys2():
    return system_at(2.0)


@pytest.fixture
def unit_sys():
    return SystemParams(g1=1.0, g2=0.7, noise_var=1.0, p_max=1.0)


@pytest.fixture
def rel():
    return StreamReliability.uniform(REF_EPS)


def targets(t1, t2):
    return ThroughputTargets(float(t1), float(t2))


def ceil_int(x):
    return int(math.ceil(x - 1e-9))


# acceptance criteria outcomes, echoed in the terminal summary
_CRITERIA = {}


def record_criterion(k, title, passed, detail=""):
    line = f"CRITERION {k}: {'PASS' if passed else 'FAIL'} - {title} ({detail})"
    _CRITERIA[k] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
