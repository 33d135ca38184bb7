"""The six built-in experiments: data, boundary feeds, and initial states.

Experiments 1-3 exercise the acoustic limit of the linearized kinetic
equation: sinusoidal initial fluctuations with null-mode boundary ramps,
each compared against a fine linearized kinetic reference at several
Knudsen numbers.  Experiments 4-6 exercise the compressible Euler limit
through the coupled marcher: Maxwellian wall data (vacuum, ramped, or
mismatched two-state data with a kinetic subdomain) compared against a
fine nonlinear kinetic reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .halfspace import NullModeInflow
from .linearization import (
    ReferenceState,
    infinitesimal_maxwellian,
    null_modes,
)
from .phase import CellMesh, VelocityGrid, maxwellian

__all__ = [
    "CoupledCase",
    "LinearizedCase",
    "get_case",
]


@dataclass(frozen=True)
class LinearizedCase:
    """Acoustic-limit experiment: linearized kinetic vs acoustic solver."""

    number: int
    title: str
    rho: float
    u: float
    T: float
    amplitude: float
    ramp_base: float
    ramp_rate: float

    @property
    def regime(self) -> str:
        return "linearized"

    @property
    def reference_state(self) -> ReferenceState:
        return ReferenceState(rho=self.rho, u=self.u, T=self.T)

    def tilde_profile(self, x: np.ndarray) -> np.ndarray:
        """Initial fluctuation fields (rho, u, T), all the same sine."""
        s = self.amplitude * np.sin(2.0 * np.pi * np.asarray(x, dtype=float))
        return np.stack([s, s, s])

    def left_inflow(self, t: float) -> NullModeInflow:
        c = self.ramp_base + self.ramp_rate * t
        return NullModeInflow({0: c, 1: c, 2: c})

    def right_inflow(self, t: float) -> NullModeInflow:
        return NullModeInflow({})

    def kinetic_ghosts(self, grid: VelocityGrid):
        """Ghost-profile callables ``t -> values`` for the kinetic reference."""
        chi_sum = null_modes(self.reference_state, grid.nodes).sum(axis=0)
        zeros = np.zeros(grid.size)

        def left(t: float) -> np.ndarray:
            return (self.ramp_base + self.ramp_rate * t) * chi_sum

        def right(t: float) -> np.ndarray:
            return zeros

        return left, right

    def initial_fluctuation(self, mesh: CellMesh,
                            grid: VelocityGrid) -> np.ndarray:
        rho_t, u_t, T_t = self.tilde_profile(mesh.centers)
        return infinitesimal_maxwellian(self.reference_state, grid.nodes,
                                        rho_t[:, None], u_t[:, None],
                                        T_t[:, None])


def _wall_profile(grid: VelocityGrid, primitives, rate: float):
    """Wall distribution ``t -> (1 + rate*t) * Maxwellian`` (or vacuum)."""
    if primitives is None:
        zeros = np.zeros(grid.size)
        return lambda t: zeros
    base = maxwellian(grid.nodes, *primitives)
    if rate == 0.0:
        return lambda t: base
    return lambda t: (1.0 + rate * t) * base


@dataclass(frozen=True)
class CoupledCase:
    """Euler-limit experiment: coupled marcher vs nonlinear kinetic."""

    number: int
    title: str
    left_primitives: tuple | None
    right_primitives: tuple | None
    left_rate: float = 0.0
    variant: str | None = None
    kinetic_side: str | None = None
    interface: float = 0.5

    @property
    def regime(self) -> str:
        return "nonlinear"

    def wall_left(self, grid: VelocityGrid):
        return _wall_profile(grid, self.left_primitives, self.left_rate)

    def wall_right(self, grid: VelocityGrid):
        return _wall_profile(grid, self.right_primitives, 0.0)

    def _piecewise_primitives(self, x: np.ndarray) -> np.ndarray:
        """Initial primitives on the full domain (piecewise for a jump)."""
        x = np.asarray(x, dtype=float)
        if self.kinetic_side is None:
            prim = self.initial_primitives
            return np.stack([np.full_like(x, p) for p in prim])
        left = np.asarray(self.left_primitives, dtype=float)
        right = np.asarray(self.right_primitives, dtype=float)
        choose = x[None, :] <= self.interface
        return np.where(choose, left[:, None], right[:, None])

    @property
    def initial_primitives(self) -> tuple:
        """Uniform initial state for the single-subdomain experiments."""
        return self.right_primitives

    def initial_distribution(self, mesh: CellMesh,
                             grid: VelocityGrid) -> np.ndarray:
        """Initial Maxwellian profile for the full-domain kinetic reference."""
        rho, u, T = self._piecewise_primitives(mesh.centers)
        return maxwellian(grid.nodes, rho[:, None], u[:, None], T[:, None])

    def initial_fluid_primitives(self, x: np.ndarray) -> np.ndarray:
        """Initial primitives on the fluid subdomain of the coupled run."""
        return self._piecewise_primitives(x)

    def eps_profile(self, mesh: CellMesh, eps: float) -> np.ndarray:
        """Relaxation scale per cell for the kinetic reference run."""
        if self.kinetic_side is None:
            return np.full(mesh.n_cells, float(eps))
        if self.kinetic_side == "left":
            return np.where(mesh.centers <= self.interface, 1.0, float(eps))
        return np.where(mesh.centers >= self.interface, 1.0, float(eps))


_CASES = {
    1: LinearizedCase(
        number=1, title="subsonic acoustic limit, layers at both walls",
        rho=1.0, u=1.0, T=1.0, amplitude=1.5, ramp_base=0.0, ramp_rate=0.0),
    2: LinearizedCase(
        number=2, title="supersonic acoustic limit, compatible ramp",
        rho=1.0, u=2.0, T=0.5, amplitude=1.25, ramp_base=0.0, ramp_rate=1.0),
    3: LinearizedCase(
        number=3, title="supersonic acoustic limit, incompatible ramp",
        rho=1.0, u=2.0, T=0.5, amplitude=1.25, ramp_base=1.0, ramp_rate=1.0),
    4: CoupledCase(
        number=4, title="fluid limit with a vacuum wall",
        left_primitives=None, right_primitives=(1.0, 0.1, 1.0)),
    6: CoupledCase(
        number=6, title="kinetic-fluid interface with a state jump",
        left_primitives=(1.0, 0.1, 1.0), right_primitives=(2.0, 0.2, 2.0),
        kinetic_side="left"),
}

_RAMP_RATES = {"small": 5.0, "large": 50.0}


def get_case(number: int, variant: str | None = None):
    """Look up an experiment definition by number (variant for ramps)."""
    if number == 5:
        if variant is None:
            variant = "small"
        if variant not in _RAMP_RATES:
            raise ConfigError(
                f"experiment 5 variant must be 'small' or 'large', "
                f"got {variant!r}")
        return CoupledCase(
            number=5, title=f"fluid limit with a {variant} boundary ramp",
            left_primitives=(1.0, 0.1, 1.0),
            right_primitives=(1.0, 0.1, 1.0),
            left_rate=_RAMP_RATES[variant], variant=variant)
    if variant is not None:
        raise ConfigError(f"experiment {number} takes no variant")
    if number not in _CASES:
        raise ConfigError(f"unknown experiment number {number}")
    return _CASES[number]
