"""Command line entry point.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .harness import ConfigError, atom_scan, load_config, run_scenario, write_detections
from .quadrature import QuadratureError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2

log = logging.getLogger("wienerlab")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wienerlab",
                                description="Recover atoms of measures from Fourier averages.")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a scenario and write a CSV table")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True)

    scan = sub.add_parser("scan", help="scan the torus for atoms")
    scan.add_argument("--config", required=True)
    scan.add_argument("--index", type=float, required=True)
    scan.add_argument("--grid", type=float, required=True)
    scan.add_argument("--threshold", type=float, required=True)
    scan.add_argument("--out", required=True)

    sub.add_parser("selftest", help="run the invariant checks and report per module")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        if args.command == "selftest":
            from .selftest import run_selftest

            return EXIT_OK if run_selftest(0 if args.seed is None else args.seed) else EXIT_NUMERIC
        cfg = load_config(args.config, seed=args.seed)
        if args.command == "run":
            records = run_scenario(cfg, args.out)
            log.info("wrote %d records to %s", len(records), args.out)
        else:
            index = int(args.index) if args.index.is_integer() else args.index
            found = atom_scan(cfg, index, args.grid, args.threshold)
            write_detections(args.out, found, cfg.group.d)
            log.info("found %d atoms; wrote %s", len(found), args.out)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (QuadratureError, FloatingPointError, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except ValueError as exc:
        # remaining validation errors come from inconsistent inputs
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
