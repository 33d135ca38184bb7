"""Phase-space discretization: velocity grids, spatial meshes, Maxwellians, moments.

The kinetic solvers discretize the one-dimensional velocity axis with an
evenly spaced grid on ``[-v_max, v_max]`` and use plain midpoint weights; for
Gaussian-shaped integrands this is effectively spectrally accurate because
both the grid spacing and the domain truncation errors are far below double
precision for the default settings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NonPhysicalState

__all__ = [
    "VelocityGrid",
    "CellMesh",
    "PointGrid",
    "maxwellian",
    "moments",
    "conservative_from_primitive",
    "primitive_from_conservative",
    "physical_flux",
]


@dataclass(frozen=True)
class VelocityGrid:
    """Uniform velocity grid ``v_j = -v_max + j * dv``, ``j = 0 .. 2*half_points``.

    ``half_points`` counts nodes per half axis; the full grid has
    ``2 * half_points + 1`` nodes and always contains ``v = 0`` exactly.
    Quadrature uses weight ``dv`` for every node.
    """

    v_max: float = 16.0
    half_points: int = 1600

    def __post_init__(self) -> None:
        if self.v_max <= 0 or self.half_points < 1:
            raise ValueError("velocity grid needs v_max > 0 and half_points >= 1")

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.v_max, self.v_max, 2 * self.half_points + 1)

    @property
    def dv(self) -> float:
        return self.v_max / self.half_points

    @property
    def size(self) -> int:
        return 2 * self.half_points + 1

    @cached_property
    def positive(self) -> np.ndarray:
        """Boolean mask of nodes with ``v > 0``."""
        return self.nodes > 0.0

    @cached_property
    def negative(self) -> np.ndarray:
        """Boolean mask of nodes with ``v < 0``."""
        return self.nodes < 0.0

    def integrate(self, values: np.ndarray, axis: int = -1) -> np.ndarray:
        """Midpoint quadrature of ``values`` sampled on the grid."""
        return self.dv * np.sum(values, axis=axis)


@dataclass(frozen=True)
class CellMesh:
    """Uniform finite-volume mesh of ``[x_left, x_right]`` with cell averages."""

    x_left: float
    x_right: float
    n_cells: int

    def __post_init__(self) -> None:
        if self.x_right <= self.x_left or self.n_cells < 1:
            raise ValueError("mesh needs x_right > x_left and n_cells >= 1")

    @property
    def h(self) -> float:
        return (self.x_right - self.x_left) / self.n_cells

    @cached_property
    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.h

    @cached_property
    def edges(self) -> np.ndarray:
        return self.x_left + np.arange(self.n_cells + 1) * self.h


@dataclass(frozen=True)
class PointGrid:
    """Uniform point grid ``x_j = x_left + j*h`` including both endpoints."""

    x_left: float
    x_right: float
    n_intervals: int

    def __post_init__(self) -> None:
        if self.x_right <= self.x_left or self.n_intervals < 1:
            raise ValueError("grid needs x_right > x_left and n_intervals >= 1")

    @property
    def h(self) -> float:
        return (self.x_right - self.x_left) / self.n_intervals

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_left, self.x_right, self.n_intervals + 1)


def maxwellian(v: np.ndarray, rho: float | np.ndarray, u: float | np.ndarray,
               T: float | np.ndarray) -> np.ndarray:
    """Maxwellian ``rho / sqrt(2 pi T) * exp(-(v - u)^2 / (2 T))``.

    ``rho``, ``u``, ``T`` may be scalars or arrays broadcastable against an
    extra leading axis of ``v`` (for per-cell states pass shape ``(nx, 1)``
    against ``v`` of shape ``(nv,)``).
    """
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(rho <= 0) or np.any(T <= 0):
        raise NonPhysicalState("Maxwellian needs rho > 0 and T > 0")
    return rho / np.sqrt(2.0 * np.pi * T) * np.exp(-((v - u) ** 2) / (2.0 * T))


def moments(F: np.ndarray, grid: VelocityGrid) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Density, bulk velocity, temperature of distributions sampled on ``grid``.

    ``F`` has velocity on the last axis.  Returns ``(rho, u, T)`` where
    ``rho = <F>``, ``rho u = <v F>`` and ``rho T = <(v - u)^2 F>``.
    """
    v = grid.nodes
    rho = grid.integrate(F)
    momentum = grid.integrate(F * v)
    u = momentum / rho
    energy2 = grid.integrate(F * v * v)
    T = (energy2 - rho * u * u) / rho
    return rho, u, T


def conservative_from_primitive(rho: np.ndarray, u: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Stack ``(rho, rho u, E)`` with ``E = rho u^2 / 2 + rho T / 2``."""
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    T = np.asarray(T, dtype=float)
    return np.stack([rho, rho * u, 0.5 * rho * u * u + 0.5 * rho * T])

def primitive_from_conservative(U: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Invert :func:`conservative_from_primitive`; raises on rho or T <= 0."""
    rho, momentum, E = U[0], U[1], U[2]
    if np.any(rho <= 0):
        raise NonPhysicalState("non-positive density in conservative state")
    u = momentum / rho
    T = (2.0 * E - rho * u * u) / rho
    if np.any(T <= 0):
        raise NonPhysicalState("non-positive temperature in conservative state")
    return rho, u, T


def physical_flux(U: np.ndarray) -> np.ndarray:
    """Flux ``(rho u, rho u^2 + rho T, (E + rho T) u)`` of the conservative state."""
    rho, u, T = primitive_from_conservative(U)
    E = U[2]
    return np.stack([rho * u, rho * u * u + rho * T, (E + rho * T) * u])
