"""Coupled fluid-kinetic stepping with layer-mediated boundary fluxes.

Each fluid-subdomain edge (physical wall or fluid-kinetic interface) owes the
Roe marcher a boundary flux.  The flux is assembled by linearizing about a
local Maxwellian extrapolated from the adjacent fluid cell's recent history,
solving a spectral half-space layer problem whose inflow is the fluctuation
of whatever arrives at the edge (wall data or the kinetic subdomain's
outflow), pinning the outgoing null amplitudes to the fluid state's own
fluctuation, and adding the far-field null content's flux on top of the
Maxwellian flux.  At an interface the same layer also hands the kinetic
subdomain its incoming ghost profile.  Edges on the right side of the fluid
subdomain run in the velocity-reversed frame and map their results back.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .euler import EulerSolver
from .halfspace import (
    GreensFunctionCache,
    GridInflow,
    fluctuation_from_distribution,
)
from .kinetic import KineticSolver
from .linearization import (
    ReferenceState,
    fluctuation_flux_projection,
    null_mode_flux,
    sqrt_maxwellian,
)
from .phase import (
    CellMesh,
    VelocityGrid,
    conservative_from_primitive,
    physical_flux,
    primitive_from_conservative,
)

__all__ = [
    "BoundaryHistory",
    "CoupledSystem",
    "FluidEdge",
    "extrapolated_reference",
]


@dataclass
class BoundaryHistory:
    """Primitive states of a fluid boundary cell at the last two steps."""

    current: np.ndarray
    previous: np.ndarray | None = None

    def push(self, primitives: np.ndarray) -> None:
        self.previous = self.current
        self.current = np.asarray(primitives, dtype=float)


def extrapolated_reference(history: BoundaryHistory):
    """Reference state ``U_* = U^n + (U^n - U^{n-1})/2`` in primitives.

    The first step (no previous state) uses the current state.  Non-physical
    extrapolations are clamped to half the current value; the returned flag
    reports whether any clamp fired.
    """
    cur = np.asarray(history.current, dtype=float)
    if history.previous is None:
        prim = cur.copy()
    else:
        prim = 1.5 * cur - 0.5 * np.asarray(history.previous, dtype=float)
    clamped = False
    if prim[0] <= 0.0:
        prim[0] = 0.5 * cur[0]
        clamped = True
    if prim[2] <= 0.0:
        prim[2] = 0.5 * cur[2]
        clamped = True
    return ReferenceState(rho=prim[0], u=prim[1], T=prim[2]), clamped


class FluidEdge:
    """One layer-closed edge of the fluid subdomain.

    ``side`` names the edge's position on the fluid subdomain: the ``"left"``
    edge faces incoming flow in the physical frame; the ``"right"`` edge runs
    its layer in the velocity-reversed frame.
    """

    def __init__(self, side: str, cache: GreensFunctionCache,
                 grid: VelocityGrid, initial_primitives: np.ndarray) -> None:
        if side not in ("left", "right"):
            raise ConfigError(f"unknown edge side {side!r}")
        self.side = side
        self.cache = cache
        self.grid = grid
        self.history = BoundaryHistory(
            current=np.asarray(initial_primitives, dtype=float))
        self.clamp_count = 0

    def fluxes(self, incoming_values: np.ndarray, want_ghost: bool = False):
        """Boundary flux (and optional kinetic ghost) for this step.

        ``incoming_values`` is the full-width velocity profile arriving at
        the edge from outside the fluid subdomain — prescribed wall data or
        the adjacent kinetic cell.  Returns ``(flux, ghost)`` where ``ghost``
        is the reconstructed distribution the layer sends back outward
        (``None`` unless requested).
        """
        ref_phys, clamped = extrapolated_reference(self.history)
        if clamped:
            self.clamp_count += 1
        frame = ref_phys.flipped() if self.side == "right" else ref_phys
        bench = self.cache.workbench(frame.rho, frame.u, frame.T)

        values = np.asarray(incoming_values, dtype=float)
        frame_values = values[::-1] if self.side == "right" else values
        phi = fluctuation_from_distribution(frame_values, frame, self.grid)
        inflow = GridInflow(self.grid, phi)

        fluc = self.history.current - np.array(
            [ref_phys.rho, ref_phys.u, ref_phys.T])
        u_fluc = -fluc[1] if self.side == "right" else fluc[1]
        projections = fluctuation_flux_projection(
            frame, fluc[0], u_fluc, fluc[2])
        pinned = {
            j: projections[j] / frame.mode_speeds[j]
            for j in frame.outgoing_modes
        }
        sol = bench.solve(inflow, pinned)

        base = physical_flux(
            conservative_from_primitive(frame.rho, frame.u, frame.T))
        flux = base + sol.end_coeffs @ null_mode_flux(frame)
        if self.side == "right":
            flux = np.array([-flux[0], flux[1], -flux[2]])

        ghost = None
        if want_ghost:
            trace = sol.trace(self.grid.nodes)
            if self.side == "right":
                trace = trace[::-1]
            nodes = self.grid.nodes
            ghost = ref_phys.maxwellian(nodes) + sqrt_maxwellian(
                ref_phys, nodes) * trace
        return flux, ghost


class CoupledSystem:
    """Lock-step marcher for a fluid subdomain with optional kinetic partner.

    ``kinetic_side`` is ``None`` (fluid spans the whole domain; both edges
    are walls fed by ``wall_left``/``wall_right`` profiles), ``"left"``
    (kinetic subdomain left of the fluid) or ``"right"``.  Wall profiles are
    callables ``t -> full-width velocity profile``.  Each step follows the
    same ordering: prepare all boundary fluxes and the interface ghost from
    the states at ``t_n``, then update the fluid, then the kinetic subdomain.
    """

    def __init__(self, *, grid: VelocityGrid, fluid_mesh: CellMesh,
                 fluid_state: np.ndarray, wall_left=None, wall_right=None,
                 kinetic_side: str | None = None,
                 kinetic_mesh: CellMesh | None = None,
                 kinetic_state: np.ndarray | None = None,
                 eps: float | np.ndarray = 1.0, order: int = 30,
                 alpha: float = 1.0,
                 cache: GreensFunctionCache | None = None) -> None:
        if kinetic_side not in (None, "left", "right"):
            raise ConfigError(f"unknown kinetic side {kinetic_side!r}")
        if kinetic_side is not None and (kinetic_mesh is None
                                         or kinetic_state is None):
            raise ConfigError("kinetic subdomain needs a mesh and a state")
        self.grid = grid
        self.kinetic_side = kinetic_side
        self.euler = EulerSolver(fluid_mesh)
        self.U = np.asarray(fluid_state, dtype=float)
        self.wall_left = wall_left
        self.wall_right = wall_right
        self.cache = cache if cache is not None else GreensFunctionCache(
            order=order, alpha=alpha)
        left_prim = np.array(primitive_from_conservative(self.U[:, 0]))
        right_prim = np.array(primitive_from_conservative(self.U[:, -1]))
        self.left_edge = FluidEdge("left", self.cache, grid, left_prim)
        self.right_edge = FluidEdge("right", self.cache, grid, right_prim)
        if kinetic_side is not None:
            self.kinetic = KineticSolver(kinetic_mesh, grid, eps,
                                         mode="nonlinear")
            self.F = np.asarray(kinetic_state, dtype=float)
        else:
            self.kinetic = None
            self.F = None
        self.t = 0.0

    # ------------------------------------------------------------------
    def step(self, dt: float) -> None:
        t = self.t
        # Step I: boundary fluxes for the fluid, ghost for the kinetic side.
        if self.kinetic_side == "left":
            left_flux, interface_ghost = self.left_edge.fluxes(
                self.F[-1], want_ghost=True)
            right_flux, _ = self.right_edge.fluxes(self.wall_right(t))
        elif self.kinetic_side == "right":
            left_flux, _ = self.left_edge.fluxes(self.wall_left(t))
            right_flux, interface_ghost = self.right_edge.fluxes(
                self.F[0], want_ghost=True)
        else:
            left_flux, _ = self.left_edge.fluxes(self.wall_left(t))
            right_flux, _ = self.right_edge.fluxes(self.wall_right(t))

        # Step II: fluid update.
        self.U = self.euler.step(self.U, dt, left_flux, right_flux)

        # Step III: kinetic update with ghosts at the old time level.
        if self.kinetic_side == "left":
            self.F = self.kinetic.step(self.F, dt, self.wall_left(t),
                                       interface_ghost)
        elif self.kinetic_side == "right":
            self.F = self.kinetic.step(self.F, dt, interface_ghost,
                                       self.wall_right(t))

        self.left_edge.history.push(
            np.array(primitive_from_conservative(self.U[:, 0])))
        self.right_edge.history.push(
            np.array(primitive_from_conservative(self.U[:, -1])))
        self.t = t + dt

    def run(self, dt: float, n_steps: int) -> None:
        for _ in range(n_steps):
            self.step(dt)

    # ------------------------------------------------------------------
    @property
    def clamp_count(self) -> int:
        return self.left_edge.clamp_count + self.right_edge.clamp_count

    def fluid_fields(self):
        """Primitive profiles ``(rho, u, T)`` of the fluid subdomain."""
        return primitive_from_conservative(self.U)

    def kinetic_fields(self):
        """Moment profiles of the kinetic subdomain, or ``None``."""
        if self.kinetic is None:
            return None
        return self.kinetic.macro_fields(self.F)
