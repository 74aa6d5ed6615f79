import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parents[1] / "demos"


@pytest.mark.parametrize("name", ["01_finite_blocklength_cost.py", "02_rate_regions.py"])
def test_quick_demos_run(name):
    proc = subprocess.run([sys.executable, str(DEMOS / name)], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip()
