"""Characteristic marcher for the linearized fluid limit with layer closures.

The fluctuation fields ``(rho~, u~, T~)`` about a fixed reference Maxwellian
diagonalize into three characteristic amplitudes ``eta_j`` advected at the
mode speeds ``(u_*, u_* + c_*, u_* - c_*)``.  Each step upwinds the interior
amplitudes, then fills the inflow-side boundary slots by solving a spectral
half-space layer problem at each wall: the wall's kinetic inflow profile,
minus the null content already supplied by the outgoing amplitudes, drives
the layer, and the layer's far-field coefficients give the incoming
amplitudes.  The right wall reuses the same machinery in the
velocity-reversed frame.

Boundary slots per wall follow the sign classification of the mode speeds;
zero-speed modes are stationary and need no boundary data.
"""

from __future__ import annotations

import numpy as np

from .errors import CFLViolation
from .halfspace import LayerWorkbench
from .linearization import (
    SPEED_TOL,
    ReferenceState,
    eta_from_primitive,
    flip_null_coefficients,
    primitive_from_eta,
    xi_eta_factors,
)
from .phase import PointGrid

__all__ = ["AcousticSolver"]


class AcousticSolver:
    """Upwind advection of the characteristic amplitudes with wall closures.

    State arrays have shape ``(3, n_points)`` (one row per amplitude) on a
    point grid that includes both walls.  ``inflow_left(t)`` must return an
    inflow object for the left-wall layer (physical frame); ``inflow_right(t)``
    one for the right-wall layer (velocity-reversed frame).  Either may be
    ``None`` when that wall closes no amplitude.
    """

    def __init__(self, state: ReferenceState, mesh: PointGrid,
                 order: int = 30, alpha: float = 1.0,
                 cfl_limit: float = 1.0) -> None:
        self.state = state
        self.mesh = mesh
        self.speeds = state.mode_speeds
        self.factors = xi_eta_factors(state)
        self.cfl_limit = float(cfl_limit)
        self.left_closed = tuple(
            j for j in range(3) if self.speeds[j] > SPEED_TOL)
        self.right_closed = tuple(
            j for j in range(3) if self.speeds[j] < -SPEED_TOL)
        self.left_workbench = (
            LayerWorkbench(state, order=order, alpha=alpha)
            if self.left_closed else None)
        self.right_workbench = (
            LayerWorkbench(state.flipped(), order=order, alpha=alpha)
            if self.right_closed else None)

    # ------------------------------------------------------------------
    def initial_amplitudes(self, tilde_fields: np.ndarray) -> np.ndarray:
        """Characteristic amplitudes of pointwise ``(rho~, u~, T~)`` data."""
        return eta_from_primitive(self.state, np.asarray(tilde_fields, float))

    def tilde_fields(self, eta: np.ndarray) -> np.ndarray:
        """Fluctuation fields ``(rho~, u~, T~)`` carried by the amplitudes."""
        return primitive_from_eta(self.state, np.asarray(eta, float))

    # ------------------------------------------------------------------
    def advect(self, eta: np.ndarray, dt: float) -> np.ndarray:
        """Interior upwind update; boundary slots keep their old values."""
        eta = np.asarray(eta, dtype=float)
        h = self.mesh.h
        cfl = np.max(np.abs(self.speeds)) * dt / h
        if cfl > self.cfl_limit:
            raise CFLViolation(
                f"acoustic CFL number {cfl:.3f} exceeds limit {self.cfl_limit}")
        new = eta.copy()
        for j, d in enumerate(self.speeds):
            c = d * dt / h
            if d > SPEED_TOL:
                new[j, 1:] = eta[j, 1:] - c * (eta[j, 1:] - eta[j, :-1])
            elif d < -SPEED_TOL:
                new[j, :-1] = eta[j, :-1] - c * (eta[j, 1:] - eta[j, :-1])
        return new

    # ------------------------------------------------------------------
    def close_left(self, eta: np.ndarray, inflow) -> None:
        """Fill the left-wall slots of freshly advected amplitudes in place.

        The outgoing amplitudes at the wall pin the far-field null content;
        the layer converts the wall inflow into the incoming amplitudes.
        """
        if self.left_workbench is None:
            return
        wb = self.left_workbench
        pinned = {
            j: self.factors[j] * eta[j, 0]
            for j in self.state.outgoing_modes
        }
        sol = wb.solve(inflow, pinned)
        for j in self.left_closed:
            eta[j, 0] = sol.end_coeffs[j] / self.factors[j]

    def close_right(self, eta: np.ndarray, inflow) -> None:
        """Right-wall analogue, computed in the velocity-reversed frame."""
        if self.right_workbench is None:
            return
        wb = self.right_workbench
        physical = self.factors * eta[:, -1]
        flipped = flip_null_coefficients(physical)
        pinned = {j: flipped[j] for j in wb.state.outgoing_modes}
        sol = wb.solve(inflow, pinned)
        end_physical = flip_null_coefficients(sol.end_coeffs)
        for j in self.right_closed:
            eta[j, -1] = end_physical[j] / self.factors[j]

    # ------------------------------------------------------------------
    def step(self, eta: np.ndarray, dt: float, t_next: float,
             inflow_left=None, inflow_right=None) -> np.ndarray:
        """Advance one step; wall data is evaluated at the new time level."""
        new = self.advect(eta, dt)
        if self.left_workbench is not None:
            self.close_left(new, inflow_left(t_next))
        if self.right_workbench is not None:
            self.close_right(new, inflow_right(t_next))
        return new

    def run(self, eta: np.ndarray, dt: float, n_steps: int,
            inflow_left=None, inflow_right=None,
            t0: float = 0.0) -> np.ndarray:
        for n in range(n_steps):
            eta = self.step(eta, dt, t0 + (n + 1) * dt, inflow_left,
                            inflow_right)
        return eta
