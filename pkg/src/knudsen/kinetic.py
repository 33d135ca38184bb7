"""Phase-space solvers for the BGK equation and its linearization.

Both solvers march with the same split step on a cell mesh times a uniform
velocity grid: first-order upwind transport with ghost values taken from the
inflow profiles at the old time level, followed by the exact exponential
relaxation of the collision subproblem.  The nonlinear solver relaxes each
cell toward the Maxwellian of its own moments; the linearized solver evolves
a fluctuation about a fixed reference Maxwellian and relaxes toward its
null-space projection.  Both forms leave the collision invariants of the
relaxed quantity unchanged, so the relaxation conserves (rho, rho u, E)
exactly up to velocity-quadrature error.
"""

from __future__ import annotations

import numpy as np

from .errors import CFLViolation, ConfigError, NonPhysicalState
from .linearization import ReferenceState, null_modes, tilde_moments
from .phase import CellMesh, VelocityGrid, maxwellian, moments

__all__ = ["KineticSolver"]


class KineticSolver:
    """Split-step BGK marcher on ``mesh x grid``.

    ``eps`` may be a scalar Knudsen number or a per-cell array (piecewise
    Knudsen regimes across a fixed interface).  States are arrays of shape
    ``(n_cells, n_velocity_nodes)``; ghost values for the upwind stencil are
    full-width velocity profiles, of which only the inward-moving half is
    read at each wall.
    """

    def __init__(self, mesh: CellMesh, grid: VelocityGrid,
                 eps: float | np.ndarray, mode: str = "nonlinear",
                 ref: ReferenceState | None = None,
                 cfl_limit: float = 1.0) -> None:
        if mode not in ("nonlinear", "linearized"):
            raise ConfigError(f"unknown kinetic mode {mode!r}")
        if mode == "linearized" and ref is None:
            raise ConfigError("linearized mode needs a reference state")
        self.mesh = mesh
        self.grid = grid
        self.mode = mode
        self.ref = ref
        self.cfl_limit = float(cfl_limit)
        eps_arr = np.broadcast_to(
            np.asarray(eps, dtype=float), (mesh.n_cells,)).copy()
        if np.any(eps_arr <= 0.0):
            raise ConfigError("Knudsen number must be positive")
        self.eps = eps_arr.reshape(-1, 1)
        v = grid.nodes
        self._v_plus = np.maximum(v, 0.0)
        self._v_minus = np.minimum(v, 0.0)
        if mode == "linearized":
            self._chi = null_modes(ref, v)
        else:
            self._chi = None
        self.mass_defect = 0.0

    # ------------------------------------------------------------------
    def transport_step(self, state: np.ndarray, dt: float,
                       left_values: np.ndarray,
                       right_values: np.ndarray) -> np.ndarray:
        """One upwind transport step with prescribed wall profiles.

        ``left_values`` feeds the ghost cell below the first cell (read on
        ``v > 0``); ``right_values`` the ghost above the last (read on
        ``v < 0``).
        """
        state = np.asarray(state, dtype=float)
        h = self.mesh.h
        cfl = self.grid.v_max * dt / h
        if cfl > self.cfl_limit:
            raise CFLViolation(
                f"kinetic CFL number {cfl:.3f} exceeds limit {self.cfl_limit}")
        left = np.asarray(left_values, dtype=float).reshape(1, -1)
        right = np.asarray(right_values, dtype=float).reshape(1, -1)
        shift_down = np.concatenate([left, state[:-1]], axis=0)
        shift_up = np.concatenate([state[1:], right], axis=0)
        new = state - (dt / h) * (
            self._v_plus * (state - shift_down)
            + self._v_minus * (shift_up - state)
        )

        flux_in = self._v_plus * left[0] + self._v_minus * state[0]
        flux_out = self._v_plus * state[-1] + self._v_minus * right[0]
        dv = self.grid.dv
        gained = h * dv * float(new.sum() - state.sum())
        budget = dt * dv * float(flux_in.sum() - flux_out.sum())
        self.mass_defect += gained - budget
        return new

    # ------------------------------------------------------------------
    def relaxation_target(self, state: np.ndarray) -> np.ndarray:
        """Local equilibrium the collision term relaxes toward."""
        if self.mode == "nonlinear":
            rho, u, T = moments(state, self.grid)
            if np.any(rho <= 0.0) or np.any(T <= 0.0):
                raise NonPhysicalState(
                    "relaxation needs positive density and temperature")
            return maxwellian(self.grid.nodes, rho[:, None], u[:, None],
                              T[:, None])
        brackets = self.grid.dv * (state @ self._chi.T)
        return brackets @ self._chi

    def relaxation_step(self, state: np.ndarray, dt: float) -> np.ndarray:
        """Exact integration of ``dF/dt = (target - F) / eps`` over ``dt``."""
        state = np.asarray(state, dtype=float)
        target = self.relaxation_target(state)
        decay = np.exp(-dt / self.eps)
        return target + decay * (state - target)

    # ------------------------------------------------------------------
    def step(self, state: np.ndarray, dt: float, left_values: np.ndarray,
             right_values: np.ndarray) -> np.ndarray:
        """Transport then relaxation: one full time step."""
        half = self.transport_step(state, dt, left_values, right_values)
        return self.relaxation_step(half, dt)

    def run(self, state: np.ndarray, dt: float, n_steps: int,
            left_inflow, right_inflow, t0: float = 0.0) -> np.ndarray:
        """March ``n_steps`` steps; inflow callables are sampled at ``t_n``."""
        for n in range(n_steps):
            t = t0 + n * dt
            state = self.step(state, dt, left_inflow(t), right_inflow(t))
        return state

    # ------------------------------------------------------------------
    def macro_fields(self, state: np.ndarray):
        """Per-cell macroscopic profiles.

        Nonlinear mode returns ``(rho, u, T)``; linearized mode returns the
        fluctuation fields ``(rho~, u~, T~)`` carried by the state.
        """
        if self.mode == "nonlinear":
            return moments(state, self.grid)
        return tilde_moments(state, self.grid, self.ref)
