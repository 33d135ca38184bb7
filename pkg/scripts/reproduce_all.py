#!/usr/bin/env python3
"""Run all six stock experiments at desk scale and collect their outputs.

Each experiment writes per-epsilon profile CSVs, a distance report, and a
meta.json under results/<name>/.  Pass --paper-scale for the finer grids
and the extended epsilon list (slow: budget several hours).

Usage:
    python3 scripts/reproduce_all.py [--paper-scale] [--out results]
"""

from __future__ import annotations

import argparse
import sys
import time

from knudsen.config import config_from_dict
from knudsen.harness import run_experiment, write_outputs


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results")
    parser.add_argument("--paper-scale", action="store_true")
    args = parser.parse_args()

    jobs: list[tuple[str, dict]] = []
    for num in (1, 2, 3, 4, 6):
        jobs.append((f"test{num}", {"test": num}))
    for variant in ("small", "large"):
        jobs.append((f"test5-{variant}", {"test": 5, "variant": variant}))

    failures = 0
    for name, spec in jobs:
        spec = dict(spec, paper_scale=args.paper_scale)
        config = config_from_dict(spec)
        t0 = time.time()
        try:
            result = run_experiment(config)
        except Exception as exc:  # noqa: BLE001 - report and keep going
            print(f"{name}: FAILED ({exc})", flush=True)
            failures += 1
            continue
        out_dir = f"{args.out}/{name}"
        write_outputs(out_dir, config, result)
        line = f"{name}: {time.time() - t0:.0f}s -> {out_dir}"
        if result.slopes is not None:
            line += ("  slopes (rho, u, T) = "
                     + ", ".join(f"{s:.3f}" for s in result.slopes))
        print(line, flush=True)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
