"""Finite-volume solver for the 1-D compressible Euler equations (gamma = 3).

The monatomic closure of the kinetic moments gives pressure ``p = rho T``
and total energy ``E = rho u^2 / 2 + rho T / 2``, i.e. a gamma-law gas with
``gamma = 3`` in one dimension.  Interfaces use the Roe approximate Riemann
solver without an entropy fix; domain boundary fluxes are supplied by the
caller (wall/interface layer closures live elsewhere).

Conservative arrays carry the component on the leading axis: ``U[0] = rho``,
``U[1] = rho u``, ``U[2] = E``, with cells on the trailing axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CFLViolation, NonPhysicalState
from .phase import CellMesh, physical_flux, primitive_from_conservative

__all__ = ["EulerSolver", "max_wave_speed", "roe_flux", "roe_matrix"]

GAMMA = 3.0


def _roe_averages(UL: np.ndarray, UR: np.ndarray):
    """Roe-averaged velocity, total enthalpy and sound speed per interface."""
    rhoL, rhoR = UL[0], UR[0]
    if np.any(rhoL <= 0.0) or np.any(rhoR <= 0.0):
        raise NonPhysicalState("Roe average needs positive densities")
    sL, sR = np.sqrt(rhoL), np.sqrt(rhoR)
    uL, uR = UL[1] / rhoL, UR[1] / rhoR
    pL = (GAMMA - 1.0) * (UL[2] - 0.5 * rhoL * uL ** 2)
    pR = (GAMMA - 1.0) * (UR[2] - 0.5 * rhoR * uR ** 2)
    HL = (UL[2] + pL) / rhoL
    HR = (UR[2] + pR) / rhoR
    u_hat = (sL * uL + sR * uR) / (sL + sR)
    H_hat = (sL * HL + sR * HR) / (sL + sR)
    c_sq = (GAMMA - 1.0) * (H_hat - 0.5 * u_hat ** 2)
    if np.any(c_sq <= 0.0):
        raise NonPhysicalState("Roe average has non-positive sound speed")
    return u_hat, H_hat, np.sqrt(c_sq)


def _wave_basis(u_hat: np.ndarray, H_hat: np.ndarray, c_hat: np.ndarray):
    """Wave speeds and right eigenvectors of the Roe matrix.

    Returns ``lam`` of shape ``(3, ...)`` and ``R`` of shape ``(3, 3, ...)``
    indexed ``R[component, wave]``; wave order (minus, zero, plus).
    """
    ones = np.ones_like(u_hat)
    lam = np.stack([u_hat - c_hat, u_hat, u_hat + c_hat])
    R = np.stack([
        np.stack([ones, ones, ones]),
        np.stack([u_hat - c_hat, u_hat, u_hat + c_hat]),
        np.stack([H_hat - u_hat * c_hat, 0.5 * u_hat ** 2, H_hat + u_hat * c_hat]),
    ])
    return lam, R


def _wave_strengths(dU: np.ndarray, u_hat, c_hat, H_hat):
    """Projection of a conservative jump onto the Roe wave basis."""
    d_rho, d_m, d_E = dU[0], dU[1], dU[2]
    gm1 = GAMMA - 1.0
    a_zero = gm1 / c_hat ** 2 * (
        (H_hat - u_hat ** 2) * d_rho + u_hat * d_m - d_E)
    a_plus = (d_m + (c_hat - u_hat) * d_rho - c_hat * a_zero) / (2.0 * c_hat)
    a_minus = d_rho - a_zero - a_plus
    return np.stack([a_minus, a_zero, a_plus])


def roe_flux(UL: np.ndarray, UR: np.ndarray) -> np.ndarray:
    """Roe numerical flux for left/right conservative states, shape ``(3, ...)``."""
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    u_hat, H_hat, c_hat = _roe_averages(UL, UR)
    lam, R = _wave_basis(u_hat, H_hat, c_hat)
    strengths = _wave_strengths(UR - UL, u_hat, c_hat, H_hat)
    dissipation = np.einsum("cw...,w...->c...", R, np.abs(lam) * strengths)
    return 0.5 * (physical_flux(UL) + physical_flux(UR)) - 0.5 * dissipation


def roe_matrix(UL: np.ndarray, UR: np.ndarray) -> np.ndarray:
    """The Roe linearization ``A_hat`` with ``A_hat (UR - UL) = F(UR) - F(UL)``."""
    u, H, _ = _roe_averages(np.asarray(UL, float), np.asarray(UR, float))
    return np.array([
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 2.0],
        [u ** 3 - u * H, H - 2.0 * u ** 2, 3.0 * u],
    ])


def max_wave_speed(U: np.ndarray) -> float:
    """Largest characteristic speed ``|u| + c`` over the states."""
    rho, u, T = primitive_from_conservative(np.asarray(U, dtype=float))
    return float(np.max(np.abs(u) + np.sqrt(GAMMA * T)))


@dataclass
class EulerSolver:
    """Explicit Roe finite-volume marcher on a cell mesh.

    Boundary fluxes come from the caller each step.  The solver maintains a
    running conservation ledger: the change of the cell totals must equal
    the net boundary inflow exactly; the accumulated defect is exposed for
    diagnostics.
    """

    mesh: CellMesh
    cfl_limit: float = 0.9
    conservation_defect: np.ndarray = field(
        default_factory=lambda: np.zeros(3), repr=False)

    def step(self, U: np.ndarray, dt: float, left_flux: np.ndarray,
             right_flux: np.ndarray) -> np.ndarray:
        """Advance one explicit step with prescribed boundary fluxes."""
        U = np.asarray(U, dtype=float)
        h = self.mesh.h
        speed = max_wave_speed(U)
        cfl = speed * dt / h
        if cfl > self.cfl_limit:
            raise CFLViolation(
                f"CFL number {cfl:.3f} exceeds limit {self.cfl_limit} "
                f"(wave speed {speed:.3f}, dt={dt}, h={h})"
            )
        interior = roe_flux(U[:, :-1], U[:, 1:])
        flux = np.concatenate([
            np.asarray(left_flux, dtype=float).reshape(3, 1),
            interior,
            np.asarray(right_flux, dtype=float).reshape(3, 1),
        ], axis=1)
        U_new = U - dt / h * (flux[:, 1:] - flux[:, :-1])

        rho = U_new[0]
        with np.errstate(invalid="ignore", divide="ignore"):
            T = (GAMMA - 1.0) * (U_new[2] / rho - 0.5 * (U_new[1] / rho) ** 2)
        if np.any(rho <= 0.0) or np.any(T <= 0.0) or not np.all(np.isfinite(U_new)):
            raise NonPhysicalState("Euler step produced a non-physical state")

        defect = h * (U_new - U).sum(axis=1) - dt * (
            np.asarray(left_flux, float) - np.asarray(right_flux, float))
        self.conservation_defect = self.conservation_defect + defect
        return U_new
