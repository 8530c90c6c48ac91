"""``wpbusn-sim`` command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .config import DEFAULT_TEXT, ConfigError, load_config

EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _parse_size(text: str) -> dict:
    out = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, _, val = item.partition("=")
        key = key.strip().lower()
        if key not in ("n", "k", "instances", "seed"):
            raise ValueError(f"unknown size field {key!r}")
        out[key] = int(val)
    return out


def cmd_run(args) -> int:
    from .harness import emit_csv, emit_plot, format_csv, run_sweep

    try:
        deployment, spec = load_config(args.config)
        if args.seed is not None:
            spec = replace(spec, base_seed=args.seed)
        if args.trials is not None:
            spec = replace(spec, trials=args.trials)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = run_sweep(deployment, spec)
        if args.out:
            emit_csv(rows, args.out)
        else:
            sys.stdout.write(format_csv(rows))
        if args.plot:
            emit_plot(rows, args.plot)
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return 0


def cmd_oracle(args) -> int:
    from .oracles import compare_phases, compare_time

    try:
        size = _parse_size(args.size)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    instances = size.get("instances", 20)
    seed = size.get("seed", 0)
    if args.module == "phases":
        worst = compare_phases(k=size.get("k", 4), instances=instances, seed=seed)
        for name, dev in worst.items():
            print(f"{name}: max relative deviation {max(dev, 0.0):.3e} (raw {dev:+.3e})")
    else:
        dev = compare_time(n=size.get("n", 2), k=size.get("k", 4), instances=instances,
                           seed=seed)
        print(f"time: max relative deviation {dev:.3e}")
    return 0


def cmd_defaults(args) -> int:
    sys.stdout.write(DEFAULT_TEXT)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wpbusn-sim",
                                description="RIS-aided wireless-powered backscatter "
                                            "underground sensor network simulator")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the sweep described by a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--out", help="CSV path (default: stdout)")
    run.add_argument("--plot", help="SVG path")
    run.add_argument("--seed", type=int, help="override base_seed")
    run.add_argument("--trials", type=int, help="override trials")
    run.set_defaults(func=cmd_run)

    orc = sub.add_parser("oracle", help="compare the optimizers against brute force")
    orc.add_argument("--module", choices=("phases", "time"), required=True)
    orc.add_argument("--size", default="N=2,K=4,instances=20",
                     help="comma list of N=, K=, instances=, seed=")
    orc.set_defaults(func=cmd_oracle)

    dft = sub.add_parser("defaults", help="print the default config")
    dft.set_defaults(func=cmd_defaults)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
