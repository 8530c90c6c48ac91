"""Sum throughput of all four strategies versus the number of RIS elements.

    python scripts/sweep_ris_elements.py --out results/ --trials 100
"""

import argparse
import logging
from pathlib import Path

from wpbusn.config import DEFAULT_K_GRID, Deployment, SweepSpec
from wpbusn.harness import emit_csv, emit_plot, run_sweep
from wpbusn.strategies import STRATEGIES


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
                     strategies=STRATEGIES)
    rows = run_sweep(Deployment(), spec)
    emit_csv(rows, out / "ris_elements.csv")
    emit_plot(rows, out / "ris_elements.svg")
    for r in rows:
        if r.strategy == "proposed":
            print(f"K={r.value:g}: sum {r.mean_sum_kbps:.1f} kbps "
                  f"(BC {r.mean_bc_kbps:.1f}, HTT {r.mean_htt_kbps:.1f})")


if __name__ == "__main__":
    main()
