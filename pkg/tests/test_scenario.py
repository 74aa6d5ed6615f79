import math
from pathlib import Path

import pytest

from rsma_fbl import ScenarioError, load_scenario, parse_scenario
from rsma_fbl.scenario import optimisation_schemes

SCEN_DIR = Path(__file__).resolve().parents[1] / "scenarios"

BASE = """
[scenario]
name = t
eps = 1e-5
t1_th = 300
t2_th = 200
pt_db = 2, 5
"""


def test_parse_basic_fields():
    s = parse_scenario(BASE)
    assert s.name == "t" and s.pt_db == (2.0, 5.0)
    assert s.reliability.eps12 == 1e-5
    assert (s.targets.t1_th, s.targets.t2_th) == (300.0, 200.0)
    assert s.system().p_max == pytest.approx(10 ** 0.2)
    assert s.system(5.0).p_max == pytest.approx(10 ** 0.5)


def test_per_stream_eps_overrides_uniform():
    s = parse_scenario(BASE + "eps22 = 1e-4\n")
    assert (s.reliability.eps11, s.reliability.eps22) == (1e-5, 1e-4)


def test_sweeps():
    s = parse_scenario(BASE + "[sweep]\naxis = eps\nstart = 1e-9\nstop = 1e-3\nnum = 7\nscale = log\n")
    assert len(s.sweep.values) == 7 and s.sweep.values[0] == pytest.approx(1e-9)
    s = parse_scenario(BASE + "[sweep]\naxis = n\nvalues = 100, 200, 400\n")
    assert s.sweep.values == (100.0, 200.0, 400.0)


def test_inf_in_n_list():
    s = parse_scenario(BASE + "n_list = 500, inf\n")
    assert s.n_list == (500.0, math.inf)
    assert s.to_dict()["n_list"] == [500.0, "inf"]


@pytest.mark.parametrize("extra, field", [
    ("g2 = -1\n", "scenario.g2"),
    ("eps11 = 1.5\n", "scenario.eps11"),
    ("t3_th = 1\n", "scenario.t3_th"),
    ("bogus = 1\n", "scenario.bogus"),
    ("schemes = rsma, cdma\n", "scenario.schemes"),
    ("num_points = 2.5\n", "scenario.num_points"),
    ("g1 = abc\n", "scenario.g1"),
    ("alpha_rule = 1.2\n", "scenario.alpha_rule"),
    ("[sweep]\naxis = foo\n", "sweep.axis"),
    ("[sweep]\naxis = eps\nstart = 1\n", "sweep.stop"),
    ("[sweep]\naxis = n\nvalues = 3, 2\n", "sweep.values"),
    ("[sweep]\naxis = eps\nstart = 0\nstop = 1\nnum = 3\nscale = log\n", "sweep.start"),
    ("[other]\nx = 1\n", "other"),
])
def test_errors_name_the_field(extra, field):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(BASE + extra)
    assert info.value.field == field
    assert field in str(info.value)


def test_negative_threshold():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(BASE.replace("t1_th = 300", "t1_th = -3"))
    assert info.value.field == "scenario.t1_th"


def test_duplicate_key_is_a_file_error():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(BASE + "t1_th = 1\n")
    assert info.value.field == "file"


def test_missing_section_and_file(tmp_path):
    with pytest.raises(ScenarioError):
        parse_scenario("[sweep]\naxis = none\n")
    with pytest.raises(ScenarioError) as info:
        load_scenario(tmp_path / "nope.ini")
    assert info.value.field == "file"


def test_hash_is_stable_and_sensitive():
    a, b = parse_scenario(BASE), parse_scenario(BASE)
    assert a.hash == b.hash and len(a.hash) == 12
    assert parse_scenario(BASE.replace("300", "301")).hash != a.hash


@pytest.mark.parametrize("path", sorted(SCEN_DIR.glob("*.ini")), ids=lambda p: p.stem)
def test_shipped_scenarios_parse(path):
    s = load_scenario(path)
    assert s.name == path.stem


def test_mac_is_region_only():
    s = parse_scenario(BASE + "schemes = rsma, mac, tdma\n")
    assert optimisation_schemes(s) == ("rsma", "tdma")
