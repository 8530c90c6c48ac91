"""Proposed-scheme throughput versus K under deeper burial, wetter soil and fewer UDs.

Writes one CSV per variant plus a combined SVG whose series are the variants.

    python scripts/sweep_environment.py --out results/ --trials 100
"""

import argparse
import logging
from dataclasses import replace
from pathlib import Path

from wpbusn.config import DEFAULT_K_GRID, Deployment, SweepSpec
from wpbusn.harness import emit_csv, emit_plot, run_sweep

VARIANTS = {
    "default": {},
    "depth_0.6m": {"burial_depth": 0.6},
    "vwc_0.2": {"vwc": 0.2},
    "uds_32": {"num_uds": 32},
}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    spec = SweepSpec("ris_elements", DEFAULT_K_GRID, trials=args.trials, base_seed=args.seed,
                     strategies=("proposed",))
    combined = []
    for name, changes in VARIANTS.items():
        dep = Deployment()
        for variable, value in changes.items():
            dep = dep.with_value(variable, value)
        rows = run_sweep(dep, spec)
        emit_csv(rows, out / f"environment_{name}.csv")
        # relabel so each variant becomes its own series in the plot
        combined += [replace(r, strategy=name) for r in rows]
        fractions = ", ".join(f"{r.bc_enabled_fraction:.2f}" for r in rows)
        print(f"{name}: BC-enabled fraction over K = {fractions}")
    emit_plot(combined, out / "environment.svg")


if __name__ == "__main__":
    main()
