"""Experiment orchestration: solver pairing, error reports, file emission.

Every experiment pairs one limit-regime solution (acoustic or coupled;
independent of the Knudsen number) with a family of fine-grid kinetic
reference solutions, one per Knudsen number, all marched to the same final
time.  Field differences are measured in the windowed L2 norm and written
as a per-eps error report next to the solution profiles.
"""

from __future__ import annotations

import json
import platform
import sys
import time
from dataclasses import dataclass, field

import numpy as np

import knudsen

from .acoustic import AcousticSolver
from .cases import CoupledCase, LinearizedCase, get_case
from .config import RunConfig, resolve_scale, velocity_grid
from .coupling import CoupledSystem
from .errors import ConfigError
from .kinetic import KineticSolver
from .metrics import (
    cell_window_weights,
    combined_distance,
    convergence_slope,
    point_window_weights,
    sample_nearest,
    weighted_l2,
)
from .phase import CellMesh, PointGrid

__all__ = [
    "ExperimentResult",
    "Profile",
    "run_experiment",
    "slopes_from_report",
    "write_report",
]

FIELD_NAMES = ("rho", "u", "T")


@dataclass
class Profile:
    """A solution snapshot: fields sampled at positions, at one time."""

    x: np.ndarray
    fields: np.ndarray  # shape (3, n): rho, u, T (fluctuations when linear)
    t: float


@dataclass
class ExperimentResult:
    """Everything one experiment run produced."""

    case_number: int | str
    variant: str | None
    eps_values: tuple
    distances: dict  # eps -> (D_rho, D_u, D_T)
    slopes: tuple | None
    limit: Profile
    references: dict  # eps -> Profile
    clamp_events: int = 0
    timings: dict = field(default_factory=dict)

    def report_rows(self):
        for eps in self.eps_values:
            yield (eps, *self.distances[eps])


def _steps(t_end: float, dt: float) -> int:
    n = int(round(t_end / dt))
    if abs(n * dt - t_end) > 1e-9 * max(1.0, t_end):
        raise ConfigError(
            f"t_end {t_end} is not an integer number of steps of dt {dt}")
    return n


def _cells(h: float, length: float = 1.0) -> int:
    n = int(round(length / h))
    if abs(n * h - length) > 1e-9:
        raise ConfigError(f"cell width {h} does not tile a length-{length} "
                          "domain")
    return n


# ---------------------------------------------------------------------------
# Linear experiments (1-3 and custom): acoustic limit vs linearized kinetic
# ---------------------------------------------------------------------------

def _acoustic_limit(case: LinearizedCase, config: RunConfig) -> Profile:
    num = config.numerics
    mesh = PointGrid(0.0, 1.0, _cells(num.limit_h))
    solver = AcousticSolver(case.reference_state, mesh,
                            order=num.spectral_order, alpha=num.damping)
    eta = solver.initial_amplitudes(case.tilde_profile(mesh.points))
    eta = solver.run(eta, num.limit_dt, _steps(config.t_end, num.limit_dt),
                     inflow_left=case.left_inflow,
                     inflow_right=case.right_inflow)
    return Profile(x=mesh.points, fields=np.asarray(solver.tilde_fields(eta)),
                   t=config.t_end)


def _linearized_reference(case: LinearizedCase, eps: float,
                          config: RunConfig, grid) -> Profile:
    num = config.numerics
    mesh = CellMesh(0.0, 1.0, _cells(num.kinetic_h))
    solver = KineticSolver(mesh, grid, eps, mode="linearized",
                           ref=case.reference_state)
    state = case.initial_fluctuation(mesh, grid)
    left, right = case.kinetic_ghosts(grid)
    state = solver.run(state, num.kinetic_dt,
                       _steps(config.t_end, num.kinetic_dt),
                       left_inflow=left, right_inflow=right)
    return Profile(x=mesh.centers,
                   fields=np.asarray(solver.macro_fields(state)),
                   t=config.t_end)


def _linear_distances(limit: Profile, reference: Profile,
                      config: RunConfig) -> tuple:
    num = config.numerics
    points = PointGrid(0.0, 1.0, _cells(num.limit_h))
    ref_mesh = CellMesh(0.0, 1.0, _cells(num.kinetic_h))
    weights = point_window_weights(points)
    out = []
    for k in range(3):
        ref_on_points = sample_nearest(limit.x, ref_mesh,
                                       reference.fields[k])
        out.append(weighted_l2(limit.fields[k] - ref_on_points, weights))
    return tuple(out)


# ---------------------------------------------------------------------------
# Coupled experiments (4-6): Euler limit vs nonlinear kinetic
# ---------------------------------------------------------------------------

def _coupled_meshes(case: CoupledCase, config: RunConfig):
    num = config.numerics
    if case.kinetic_side is None:
        return None, CellMesh(0.0, 1.0, _cells(num.limit_h))
    if case.kinetic_side == "left":
        kin = CellMesh(0.0, case.interface,
                       _cells(num.kinetic_h, case.interface))
        fluid = CellMesh(case.interface, 1.0,
                         _cells(num.limit_h, 1.0 - case.interface))
    else:
        kin = CellMesh(case.interface, 1.0,
                       _cells(num.kinetic_h, 1.0 - case.interface))
        fluid = CellMesh(0.0, case.interface,
                         _cells(num.limit_h, case.interface))
    return kin, fluid


def _coupled_limit(case: CoupledCase, config: RunConfig, grid):
    num = config.numerics
    kin_mesh, fluid_mesh = _coupled_meshes(case, config)
    from .phase import conservative_from_primitive

    U0 = conservative_from_primitive(
        *case.initial_fluid_primitives(fluid_mesh.centers))
    kwargs = {}
    if kin_mesh is not None:
        kwargs = dict(kinetic_side=case.kinetic_side,
                      kinetic_mesh=kin_mesh,
                      kinetic_state=case.initial_distribution(kin_mesh, grid),
                      eps=1.0)
        dt = num.kinetic_dt
    else:
        dt = num.limit_dt
    system = CoupledSystem(
        grid=grid, fluid_mesh=fluid_mesh, fluid_state=U0,
        wall_left=case.wall_left(grid), wall_right=case.wall_right(grid),
        order=num.spectral_order, alpha=num.damping, **kwargs)
    system.run(dt, _steps(config.t_end, dt))

    fluid_fields = np.asarray(system.fluid_fields())
    if kin_mesh is None:
        profile = Profile(x=fluid_mesh.centers, fields=fluid_fields,
                          t=config.t_end)
    else:
        kin_fields = np.asarray(system.kinetic_fields())
        if case.kinetic_side == "left":
            x = np.concatenate([kin_mesh.centers, fluid_mesh.centers])
            fields = np.concatenate([kin_fields, fluid_fields], axis=1)
        else:
            x = np.concatenate([fluid_mesh.centers, kin_mesh.centers])
            fields = np.concatenate([fluid_fields, kin_fields], axis=1)
        profile = Profile(x=x, fields=fields, t=config.t_end)
    return profile, system.clamp_count


def _nonlinear_reference(case: CoupledCase, eps: float, config: RunConfig,
                         grid) -> Profile:
    num = config.numerics
    mesh = CellMesh(0.0, 1.0, _cells(num.kinetic_h))
    solver = KineticSolver(mesh, grid, case.eps_profile(mesh, eps),
                           mode="nonlinear")
    state = case.initial_distribution(mesh, grid)
    state = solver.run(state, num.kinetic_dt,
                       _steps(config.t_end, num.kinetic_dt),
                       left_inflow=case.wall_left(grid),
                       right_inflow=case.wall_right(grid))
    return Profile(x=mesh.centers,
                   fields=np.asarray(solver.macro_fields(state)),
                   t=config.t_end)


def _coupled_distances(case: CoupledCase, limit: Profile,
                       reference: Profile, config: RunConfig) -> tuple:
    num = config.numerics
    ref_mesh = CellMesh(0.0, 1.0, _cells(num.kinetic_h))
    kin_mesh, fluid_mesh = _coupled_meshes(case, config)
    out = []
    if kin_mesh is None:
        weights = cell_window_weights(fluid_mesh)
        for k in range(3):
            ref_vals = sample_nearest(limit.x, ref_mesh, reference.fields[k])
            out.append(weighted_l2(limit.fields[k] - ref_vals, weights))
        return tuple(out)
    # Two subdomains: windowed distance on each, combined in quadrature.
    for k in range(3):
        parts = []
        for mesh in (kin_mesh, fluid_mesh):
            sel = (limit.x >= mesh.x_left) & (limit.x <= mesh.x_right)
            x_sub = limit.x[sel]
            lim_vals = limit.fields[k][sel]
            ref_vals = sample_nearest(x_sub, ref_mesh, reference.fields[k])
            weights = cell_window_weights(mesh)
            parts.append(weighted_l2(lim_vals - ref_vals, weights))
        out.append(combined_distance(*parts))
    return tuple(out)


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def _resolve_case(config: RunConfig):
    if config.test == "custom":
        rho, u, T = config.reference_state
        return LinearizedCase(
            number="custom", title="user-defined acoustic-limit scenario",
            rho=rho, u=u, T=T, amplitude=config.amplitude,
            ramp_base=config.ramp_base, ramp_rate=config.ramp_rate)
    return get_case(config.test, config.variant)


def run_experiment(config: RunConfig) -> ExperimentResult:
    """Run one experiment: limit solve, references per eps, error report."""
    config.validate()
    config = resolve_scale(config)
    case = _resolve_case(config)
    grid = velocity_grid(config.numerics)
    timings = {}
    clamp_events = 0

    start = time.perf_counter()
    if case.regime == "linearized":
        limit = _acoustic_limit(case, config)
    else:
        limit, clamp_events = _coupled_limit(case, config, grid)
    timings["limit"] = time.perf_counter() - start

    distances = {}
    references = {}
    for eps in config.eps:
        start = time.perf_counter()
        if case.regime == "linearized":
            reference = _linearized_reference(case, eps, config, grid)
            distances[eps] = _linear_distances(limit, reference, config)
        else:
            reference = _nonlinear_reference(case, eps, config, grid)
            distances[eps] = _coupled_distances(case, limit, reference,
                                                config)
        references[eps] = reference
        timings[f"reference eps={eps:g}"] = time.perf_counter() - start

    slopes = None
    if len(config.eps) >= 2 and all(
            all(d > 0 for d in distances[e]) for e in config.eps):
        slopes = tuple(
            convergence_slope(config.eps,
                              [distances[e][k] for e in config.eps])
            for k in range(3))
    return ExperimentResult(
        case_number=case.number, variant=getattr(case, "variant", None),
        eps_values=tuple(config.eps), distances=distances, slopes=slopes,
        limit=limit, references=references, clamp_events=clamp_events,
        timings=timings)


# ---------------------------------------------------------------------------
# File emission
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_profile_csv(path, profile: Profile) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("x,rho,u,T,t\n")
        for i in range(profile.x.size):
            row = [profile.x[i], profile.fields[0][i], profile.fields[1][i],
                   profile.fields[2][i], profile.t]
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def write_report(path, result: ExperimentResult) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("eps,D_rho,D_u,D_T\n")
        for row in result.report_rows():
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def read_report(path):
    """Read a report CSV back as (eps, D_rho, D_u, D_T) arrays."""
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if rows.shape[1] != 4:
        raise ConfigError(f"{path} is not an error report")
    return rows[:, 0], rows[:, 1:]


def slopes_from_report(path):
    """Fitted log-log slopes (rho, u, T) of a written error report."""
    eps, distances = read_report(path)
    return tuple(convergence_slope(eps, distances[:, k]) for k in range(3))


def write_outputs(out_dir, config: RunConfig, result: ExperimentResult,
                  elapsed: float) -> None:
    """Write solution profiles, the error report, and run metadata."""
    import os

    from .config import config_to_dict

    os.makedirs(out_dir, exist_ok=True)
    write_profile_csv(os.path.join(out_dir, "limit.csv"), result.limit)
    for eps, profile in result.references.items():
        write_profile_csv(
            os.path.join(out_dir, f"reference_eps_{eps:g}.csv"), profile)
    write_report(os.path.join(out_dir, "report.csv"), result)
    meta = {
        "config": config_to_dict(config),
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "knudsen": knudsen.__version__,
            "platform": platform.platform(),
        },
        "clamp_warnings": result.clamp_events,
        "slopes": list(result.slopes) if result.slopes else None,
        "timings": result.timings,
        "elapsed_seconds": elapsed,
        "seed": config.seed,
    }
    with open(os.path.join(out_dir, "meta.json"), "w",
              encoding="utf-8") as handle:
        json.dump(meta, handle, indent=2, sort_keys=True)
        handle.write("\n")
