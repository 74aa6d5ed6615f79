import subprocess
import sys

import pytest

from rsma_fbl.cli import main

GOOD = """
[scenario]
name = tiny
eps = 1e-6
t1_th = 300
t2_th = 200
schemes = noma12, tdma
pt_db = 5
"""


def _write(tmp_path, text, name="s.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_minlen_power_writes_csv(tmp_path, capsys):
    scen = _write(tmp_path, GOOD)
    assert main(["minlen-power", "--scenario", scen, "--out", str(tmp_path)]) == 0
    out = tmp_path / "minlen-power_tiny.csv"
    lines = out.read_text().splitlines()
    assert lines[0].startswith("scenario_hash,") and len(lines) == 3
    assert "minlen-power_tiny.csv" in capsys.readouterr().out


def test_output_is_byte_identical_across_runs_and_workers(tmp_path):
    scen = _write(tmp_path, GOOD)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["minlen-power", "--scenario", scen, "--out", str(a), "--format", "json"]) == 0
    assert main(["minlen-power", "--scenario", scen, "--out", str(b), "--format", "json",
                 "--workers", "2"]) == 0
    assert (a / "minlen-power_tiny.json").read_bytes() == (b / "minlen-power_tiny.json").read_bytes()


def test_bad_scenario_exits_2(tmp_path, capsys):
    scen = _write(tmp_path, GOOD + "g2 = -0.7\n")
    assert main(["region", "--scenario", scen, "--out", str(tmp_path)]) == 2
    assert "scenario.g2" in capsys.readouterr().err
    assert main(["region", "--scenario", str(tmp_path / "missing.ini")]) == 2
    assert main(["region", "--scenario", _write(tmp_path, GOOD, "ok.ini"), "--workers", "0"]) == 2


def test_all_infeasible_exits_3(tmp_path):
    scen = _write(tmp_path, GOOD.replace("t1_th = 300", "t1_th = 9000"))
    assert main(["minlen-power", "--scenario", scen, "--out", str(tmp_path)]) == 3
    assert (tmp_path / "minlen-power_tiny.csv").exists()


def test_verify_succeeds(tmp_path):
    scen = _write(tmp_path, GOOD)
    assert main(["verify", "--scenario", scen, "--out", str(tmp_path)]) == 0


def test_usage_errors():
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["region"])


def test_module_entry_point(tmp_path):
    scen = _write(tmp_path, GOOD)
    proc = subprocess.run([sys.executable, "-m", "rsma_fbl.cli", "sumrate", "--scenario", scen,
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "sumrate_tiny.csv").exists()
