#!/usr/bin/env python3
"""Solve one half-space boundary-layer problem and print its anatomy.

Feeds a sample inflow into the spectral layer solver at a chosen reference
state, then reports the end-state coefficients (the data a fluid solver
would receive), the conservation residual, and a short table of the
boundary trace on the incoming velocity half-line.

Usage:
    python3 scripts/layer_profile.py [--rho 1.0 --u 1.0 --temp 1.0]
        [--order 30] [--mode 2 | --poly "0.2 0.1 -0.05"]
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from knudsen.halfspace import CallableInflow, LayerWorkbench, NullModeInflow
from knudsen.linearization import ReferenceState


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rho", type=float, default=1.0)
    parser.add_argument("--u", type=float, default=1.0)
    parser.add_argument("--temp", type=float, default=1.0)
    parser.add_argument("--order", type=int, default=30)
    parser.add_argument("--mode", type=int, default=None, choices=(0, 1, 2),
                        help="feed one equilibrium mode instead of a profile")
    parser.add_argument("--poly", default="0.2 0.1 -0.05",
                        help="Gaussian-windowed polynomial coefficients")
    args = parser.parse_args()

    ref = ReferenceState(args.rho, args.u, args.temp)
    workbench = LayerWorkbench(ref, order=args.order)

    if args.mode is not None:
        inflow = NullModeInflow({args.mode: 1.0})
        label = f"equilibrium mode {args.mode}"
    else:
        coeffs = [float(c) for c in args.poly.split()]
        inflow = CallableInflow(
            lambda w: sum(c * w ** k for k, c in enumerate(coeffs))
            * np.exp(-(w ** 2) / 2.0))
        label = f"windowed polynomial {coeffs}"

    pinned = {j: 0.0 for j in ref.outgoing_modes}
    sol = workbench.solve(inflow, pinned=pinned)

    print(f"reference state: rho={ref.rho}, u={ref.u}, T={ref.T}")
    print(f"mode speeds: "
          + ", ".join(f"{s:+.4f}" for s in ref.mode_speeds))
    print(f"inflow: {label}; outgoing modes pinned to zero: "
          f"{sorted(ref.outgoing_modes)}")
    print("end-state coefficients (drift, fast, slow): "
          + ", ".join(f"{c:+.10f}" for c in sol.end_coeffs))
    print(f"conservation residual: {sol.conservation_residual:.3e}")

    v = ref.u + np.linspace(-3.0, 3.0, 7) * np.sqrt(ref.T)
    values = sol.trace(v)
    print("boundary trace samples f(0, v):")
    for vi, fi in zip(v, values):
        print(f"    v = {vi:+8.4f}   f(0, v) = {fi:+.8f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
