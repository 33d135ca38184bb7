#!/usr/bin/env python3
"""Epsilon-convergence study for the sine-wave relaxation experiment.

Runs the kinetic solver against the acoustic limit over a list of Knudsen
numbers, prints the distance table, and fits log-log decay slopes.

Usage:
    python3 scripts/convergence_study.py [--eps "1/32 1/64 1/128"] \
        [--out results/convergence] [--paper-scale]
"""

from __future__ import annotations

import argparse
import sys

from knudsen.cli import _parse_eps
from knudsen.config import config_from_dict
from knudsen.harness import run_experiment, write_outputs


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--eps", default=None,
                        help="whitespace-separated list, fractions allowed")
    parser.add_argument("--out", default="results/convergence")
    parser.add_argument("--paper-scale", action="store_true")
    args = parser.parse_args()

    spec: dict = {"test": 1, "paper_scale": args.paper_scale}
    if args.eps is not None:
        spec["eps"] = _parse_eps(args.eps)
    config = config_from_dict(spec)

    result = run_experiment(config)
    write_outputs(args.out, config, result)

    print(f"{'eps':>10s} {'D_rho':>12s} {'D_u':>12s} {'D_T':>12s}")
    for eps, d_rho, d_u, d_T in result.report_rows():
        print(f"{eps:>10.6f} {d_rho:>12.4e} {d_u:>12.4e} {d_T:>12.4e}")
    if result.slopes is not None:
        print("fitted decay slopes (rho, u, T): "
              + ", ".join(f"{s:.3f}" for s in result.slopes))
    print(f"outputs in {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
