"""
Command-line entry point.

    rsma-fbl region      --scenario scenarios/region.ini --out results
    rsma-fbl minlen-power --scenario scenarios/power_user1_heavy.ini --workers 4
    rsma-fbl minlen-eps  --scenario scenarios/reliability.ini --format json
    rsma-fbl sumrate     --scenario scenarios/sumrate.ini
    rsma-fbl verify      --scenario scenarios/verify.ini

Exit codes: 0 success, 2 bad scenario file, 3 every sweep point
infeasible (or, for ``verify``, any solver/oracle disagreement).
"""

import argparse
import logging
import math
import sys
from pathlib import Path

from .errors import ScenarioError
from .experiments import (run_blocklength_vs_epsilon, run_blocklength_vs_power,
                          run_region_experiment, run_sumrate_vs_blocklength, run_verify)
from .scenario import load_scenario

EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3

COMMANDS = {
    "region": run_region_experiment,
    "minlen-power": run_blocklength_vs_power,
    "minlen-eps": run_blocklength_vs_epsilon,
    "sumrate": run_sumrate_vs_blocklength,
    "verify": run_verify,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rsma-fbl",
        description="Finite-blocklength RSMA/NOMA/OMA experiments; writes CSV or JSON.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=(COMMANDS[name].__doc__ or "").strip().splitlines()[0])
        p.add_argument("--scenario", required=True, help="scenario file (key = value, powers in dB)")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--workers", type=int, default=1, help="process-pool size (default 1)")
    return parser


def _whole_run_failed(command, ds):
    if command == "verify":
        return not all(ds.column("ok"))
    if command in ("minlen-power", "minlen-eps"):
        return len(ds) > 0 and all(not math.isfinite(v) for v in ds.column("n_star"))
    return False


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        scen = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"config error in {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    ds = COMMANDS[args.command](scen, workers=args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{args.command}_{scen.name}.{args.format}"
    ds.write(path, args.format)
    print(f"{path} ({len(ds)} rows, scenario {scen.hash})")

    if _whole_run_failed(args.command, ds):
        what = "solver/oracle mismatch" if args.command == "verify" else "every point infeasible"
        print(f"error: {what}; see {path}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return 0


if __name__ == "__main__":
    sys.exit(main())
