"""
Driving a sweep from a scenario file.

Scenario files are plain INI text with powers in dB.  This loads the
reliability sweep shipped in scenarios/, runs it for the two NOMA orders
only (to keep it quick) and writes the CSV the CLI would produce.  The
command-line equivalent is

    rsma-fbl minlen-eps --scenario scenarios/reliability.ini --out results
"""

import dataclasses
import sys
from pathlib import Path

from rsma_fbl import load_scenario
from rsma_fbl.experiments import run_blocklength_vs_epsilon

root = Path(__file__).resolve().parents[1]
scen = load_scenario(root / "scenarios" / "reliability.ini")
scen = dataclasses.replace(scen, schemes=("noma12", "noma21"))
print(f"scenario {scen.name} ({scen.hash}): eps sweep {scen.sweep.values[0]:g} .. {scen.sweep.values[-1]:g}")

ds = run_blocklength_vs_epsilon(scen)
for r in ds.records():
    print(f"  Pt {r['pt_db']:>4} dB  {r['scheme']:<7} eps {r['eps11']:8.1e}  n* {r['n_star']:8.2f}")

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("minlen-eps_demo.csv")
ds.write(out)
print(f"wrote {out}")
