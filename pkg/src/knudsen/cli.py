"""Command-line interface: experiment runs, single layer solves, slopes."""

from __future__ import annotations

import dataclasses
import json
import sys
import time

import click
import numpy as np

from .config import (
    RunConfig,
    config_from_dict,
    load_config,
    velocity_grid,
)
from .errors import KnudsenError
from .halfspace import CallableInflow, LayerWorkbench, NullModeInflow
from .harness import run_experiment, slopes_from_report, write_outputs
from .linearization import ReferenceState


@click.group()
def main() -> None:
    """Kinetic-fluid limit experiments with spectral layer closures."""


def _parse_eps(text: str) -> tuple:
    values = []
    for token in text.replace(",", " ").split():
        if "/" in token:
            num, den = token.split("/", 1)
            values.append(float(num) / float(den))
        else:
            values.append(float(token))
    return tuple(values)


@main.command()
@click.option("--test", "test_id", required=True,
              help="Experiment number 1..6 (or 'custom' with --config).")
@click.option("--eps", "eps_text", default=None,
              help="Knudsen numbers, e.g. '1/32 1/64 1/128'.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Output directory for CSV profiles, report, metadata.")
@click.option("--paper-scale", is_flag=True,
              help="Full-resolution preset (finer kinetic grid, extra eps).")
@click.option("--seed", default=None, type=int,
              help="RNG seed recorded with the run (default 0).")
@click.option("--variant", default=None,
              type=click.Choice(["small", "large"]),
              help="Boundary-ramp preset for experiment 5 (default: both).")
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True),
              help="JSON configuration file; flags override its entries.")
def run(test_id, eps_text, out_dir, paper_scale, seed, variant,
        config_path) -> None:
    """Run one experiment and write its profiles and error report."""
    try:
        if config_path is not None:
            config = load_config(config_path)
        else:
            test = test_id if test_id == "custom" else int(test_id)
            config = config_from_dict({"test": test})
        updates = {"out_dir": out_dir}
        if seed is not None:
            updates["seed"] = seed
        if test_id != str(config.test):
            updates["test"] = (test_id if test_id == "custom"
                               else int(test_id))
        if eps_text is not None:
            updates["eps"] = _parse_eps(eps_text)
        if paper_scale:
            updates["paper_scale"] = True
        if variant is not None:
            updates["variant"] = variant
        config = dataclasses.replace(config, **updates)
        config.validate()

        # Experiment 5 is a two-preset comparison; without an explicit
        # choice, run both presets into sibling subdirectories.
        if config.test == 5 and config.variant is None:
            for preset in ("small", "large"):
                sub = dataclasses.replace(config, variant=preset)
                _run_single(sub, f"{out_dir}/{preset}")
        else:
            _run_single(config, out_dir)
    except KnudsenError as exc:
        raise click.ClickException(str(exc)) from exc


def _run_single(config: RunConfig, out_dir: str) -> None:
    start = time.perf_counter()
    result = run_experiment(config)
    elapsed = time.perf_counter() - start
    write_outputs(out_dir, config, result, elapsed)
    click.echo(f"experiment {result.case_number}"
               + (f" ({result.variant})" if result.variant else "")
               + f" finished in {elapsed:.1f}s -> {out_dir}")
    for eps, dists in sorted(result.distances.items(), reverse=True):
        click.echo(f"  eps={eps:<10g} D_rho={dists[0]:.3e} "
                   f"D_u={dists[1]:.3e} D_T={dists[2]:.3e}")
    if result.slopes is not None:
        click.echo("  slopes: D_rho {:.3f}, D_u {:.3f}, D_T {:.3f}".format(
            *result.slopes))
    if result.clamp_events:
        click.echo(f"  warning: {result.clamp_events} clamped reference "
                   "extrapolations (see meta.json)")


def _load_inflow(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if "modes" in data:
        coeffs = {int(k): float(v) for k, v in data["modes"].items()}
        return NullModeInflow(coeffs)
    if "v" in data and "values" in data:
        v = np.asarray(data["v"], dtype=float)
        vals = np.asarray(data["values"], dtype=float)
        return CallableInflow(lambda w: np.interp(w, v, vals,
                                                  left=0.0, right=0.0))
    raise click.ClickException(
        "inflow file needs either {'modes': {...}} or {'v': [...], "
        "'values': [...]}")


@main.command("layer-solve")
@click.option("--rho", required=True, type=float)
@click.option("--u", required=True, type=float)
@click.option("--t", "--T", "temperature", required=True, type=float)
@click.option("--order", default=30, show_default=True)
@click.option("--inflow", "inflow_path", required=True,
              type=click.Path(exists=True),
              help="JSON inflow: null-mode coefficients or sampled values.")
@click.option("--trace-out", default=None, type=click.Path(),
              help="Write the boundary trace as CSV (v, value).")
def layer_solve(rho, u, temperature, order, inflow_path, trace_out) -> None:
    """Solve one half-space layer problem; print far-field coefficients."""
    try:
        state = ReferenceState(rho=rho, u=u, T=temperature)
        bench = LayerWorkbench(state, order=order)
        inflow = _load_inflow(inflow_path)
        pinned = {j: 0.0 for j in state.outgoing_modes}
        sol = bench.solve(inflow, pinned)
        for j, name in enumerate(("zero", "plus", "minus")):
            click.echo(f"xi[{name}] = {sol.end_coeffs[j]:.12e}")
        if trace_out is not None:
            v = np.linspace(-4 * max(1.0, np.sqrt(temperature)),
                            4 * max(1.0, np.sqrt(temperature)), 801)
            trace = sol.trace(v)
            with open(trace_out, "w", encoding="utf-8") as handle:
                handle.write("v,value\n")
                for vi, fi in zip(v, trace):
                    handle.write(f"{vi:.17g},{fi:.17g}\n")
            click.echo(f"boundary trace -> {trace_out}")
    except KnudsenError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@click.option("--report", "report_path", required=True,
              type=click.Path(exists=True),
              help="report.csv produced by 'run'.")
def convergence(report_path) -> None:
    """Fit log-log convergence slopes from a written error report."""
    try:
        slopes = slopes_from_report(report_path)
    except (KnudsenError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    for name, slope in zip(("D_rho", "D_u", "D_T"), slopes):
        click.echo(f"{name} slope: {slope:.4f}")


if __name__ == "__main__":
    sys.exit(main())
