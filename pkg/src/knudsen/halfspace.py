"""Spectrally accurate half-space solver for kinetic boundary layers.

Solves the stationary linearized problem

    w d_z f(z, w) = L f(z, w),   z > 0,

with prescribed inflow ``f(0, w) = phi(w)`` on ``w > 0`` and prescribed
far-field amplitudes on the null modes that transport toward the boundary
(``<w chi_j, .>`` with negative speed).  ``L = Pi - I`` is the linearized
relaxation operator about a reference Maxwellian.

Method: Galerkin discretization in a parity-extended half-range polynomial
basis of a *damped* variant of the equation whose solutions all decay in
``z``.  The damped generalized eigenproblem supplies exactly ``order``
decaying modes (enforced; violations raise :class:`ModeCountError`).  The
boundary inflow determines their combination through the incoming trace; the
null-mode content removed by the damping is recovered afterwards by a small
linear system that restores the original (undamped) equation exactly for the
null-space part and to spectral accuracy for the remainder.

The recovered object is the end state ``f(z -> inf) = sum_j c_j chi_j``
together with the full boundary trace ``f(0, .)``; both are what the
fluid/kinetic coupling consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
import scipy.linalg

from .errors import ConfigError, ModeCountError, SingularRecoveryMatrix
from .halfbasis import ExtendedBasis, evaluate_ortho
from .linearization import (
    SPEED_TOL,
    ReferenceState,
    null_mode_polynomials,
    null_modes,
    sqrt_maxwellian,
)
from .phase import VelocityGrid

__all__ = [
    "CallableInflow",
    "GridInflow",
    "GreensFunctionCache",
    "LayerSolution",
    "LayerWorkbench",
    "NullModeInflow",
    "fluctuation_from_distribution",
]

# Relative cutoff on |beta| below which a QZ pair is an infinite eigenvalue
# (the transport matrix is structurally singular, so these always appear).
_BETA_CUT = 1e-10
# Absolute cutoff separating the structural zero eigenvalue from genuine
# decay rates; the slowest physical decay rates sit orders of magnitude above.
_ZERO_CUT = 1e-6


def fluctuation_from_distribution(values: np.ndarray, ref: ReferenceState,
                                  grid: VelocityGrid) -> np.ndarray:
    """Fluctuation ``(F - M_*) / sqrt(M_*)`` on the grid, guarded in the tails.

    Where the Maxwellian underflows (exponent beyond ~300) both ``F`` and
    ``M_*`` carry no usable information and the quotient is set to zero
    instead of overflowing.
    """
    v = grid.nodes
    exponent = (v - ref.u) ** 2 / (4.0 * ref.T)
    safe = exponent < 300.0
    out = np.zeros_like(np.asarray(values, dtype=float))
    root = sqrt_maxwellian(ref, v[safe])
    out[..., safe] = (values[..., safe] - ref.maxwellian(v[safe])) / root
    return out


@dataclass(frozen=True)
class NullModeInflow:
    """Inflow equal to a combination of null modes, given per-mode weights."""

    coefficients: Mapping[int, float]

    def boundary_data(self, workbench: "LayerWorkbench") -> np.ndarray:
        data = np.zeros(workbench.order)
        for j, c in self.coefficients.items():
            if j not in (0, 1, 2):
                raise ConfigError(f"unknown null mode index {j}")
            data += float(c) * workbench.null_trace_data[:, j]
        return data


@dataclass(frozen=True)
class CallableInflow:
    """Inflow given as a function of velocity on the incoming half line.

    The function must include its own decay; it is integrated against the
    basis functions with composite Gauss-Legendre panels.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    n_panels: int = 80
    n_gauss: int = 24

    def boundary_data(self, workbench: "LayerWorkbench") -> np.ndarray:
        T = workbench.state.T
        order = workbench.order
        cap = np.sqrt(T) * (1.2 * np.sqrt(4.0 * order + 2.0) + 8.0)
        cap = max(cap, abs(workbench.state.u) + 6.0 * np.sqrt(T))
        gl_nodes, gl_weights = np.polynomial.legendre.leggauss(self.n_gauss)
        edges = np.linspace(0.0, cap, self.n_panels + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        nodes = (mids[:, None] + half[:, None] * gl_nodes[None, :]).ravel()
        weights = (half[:, None] * gl_weights[None, :]).ravel()
        B = evaluate_ortho(workbench.basis.center_table, nodes, order - 1)
        integrand = weights * np.asarray(self.fn(nodes), dtype=float) * np.exp(
            -(nodes ** 2) / (4.0 * T)
        )
        return B.T @ integrand


@dataclass(frozen=True)
class GridInflow:
    """Inflow sampled on the non-negative nodes of a velocity grid.

    ``values`` holds the fluctuation on the full grid; only ``v >= 0`` is
    read, with trapezoid end weights at ``v = 0`` and the last node.
    """

    grid: VelocityGrid
    values: np.ndarray

    def boundary_data(self, workbench: "LayerWorkbench") -> np.ndarray:
        v = self.grid.nodes
        mask = v >= 0.0
        nodes = v[mask]
        vals = np.asarray(self.values, dtype=float)[mask]
        weights = np.full(nodes.size, self.grid.dv)
        weights[0] *= 0.5
        weights[-1] *= 0.5
        B = evaluate_ortho(workbench.basis.center_table, nodes, workbench.order - 1)
        damped = vals * np.exp(-(nodes ** 2) / (4.0 * workbench.state.T))
        return B.T @ (weights * damped)


@dataclass(frozen=True)
class LayerSolution:
    """Solved half-space layer: end state, boundary trace, diagnostics."""

    workbench: "LayerWorkbench"
    remainder_coeffs: np.ndarray  # basis coefficients of f(0,.) minus null part
    end_coeffs: np.ndarray        # per-mode null amplitudes at z -> infinity
    solved_coeffs: np.ndarray     # subset of end_coeffs determined by the solve
    conservation_residual: float

    def trace(self, v: np.ndarray) -> np.ndarray:
        """Boundary distribution ``f(0, v)`` (fluctuation, layer frame)."""
        basis_vals = self.workbench.basis.evaluate(np.asarray(v, dtype=float))
        chi_vals = null_modes(self.workbench.state, v)
        return self.remainder_coeffs @ basis_vals + self.end_coeffs @ chi_vals

    def flux_brackets(self) -> np.ndarray:
        """``<w chi_j, f(0) - end state>`` for all three modes.

        Exact zeros (to solver precision) for solved modes; spectrally small
        values for pinned and zero-speed modes measure how well the undamped
        equation is honored.
        """
        return self.workbench.flux_vectors.T @ self.remainder_coeffs


class LayerWorkbench:
    """Precomputed spectral machinery for one reference state.

    Building a workbench performs the mode census and factorizations; each
    subsequent :meth:`solve` costs a few small triangular solves.
    """

    def __init__(self, state: ReferenceState, order: int = 30,
                 alpha: float = 1.0) -> None:
        if order < 4:
            raise ConfigError("layer solver needs order >= 4")
        if alpha <= 0:
            raise ConfigError("damping strength must be positive")
        self.state = state
        self.order = int(order)
        self.alpha = float(alpha)
        self.basis = ExtendedBasis(u=state.u, T=state.T, order=self.order)
        self.solved_modes = list(state.incoming_modes)
        self.pinned_modes = list(state.outgoing_modes)
        self._assemble()

    # -- assembly -----------------------------------------------------------

    def _assemble(self) -> None:
        state, basis, alpha = self.state, self.basis, self.alpha
        u = state.u
        polys = null_mode_polynomials(state)
        size = basis.size

        def pair_columns(prefactor: Callable[[np.ndarray], np.ndarray]):
            cols = []
            for q in polys:
                cols.append(basis.project_pair_weighted(
                    poly_plus=lambda w, q=q: prefactor(w) * q(w - u),
                    poly_minus=lambda s, q=q: prefactor(-s) * q(-s - u),
                ))
            return np.column_stack(cols)

        # <P_k, chi_j>, <w P_k, chi_j>, <w^2 P_k, chi_j>
        self.null_overlaps = pair_columns(lambda w: np.ones_like(w))
        self.flux_vectors = pair_columns(lambda w: w)
        needs_quad = [j for j in (0, 1, 2) if abs(state.mode_speeds[j]) <= SPEED_TOL]
        quad_vectors = pair_columns(lambda w: w * w) if needs_quad else None

        transport = basis.transport_matrix()
        damped = self.null_overlaps @ self.null_overlaps.T - np.eye(size)
        for j in range(3):
            dj = self.flux_vectors[:, j]
            damped -= alpha * np.outer(dj, dj)
        for j in needs_quad:
            ej = quad_vectors[:, j]
            damped -= alpha * np.outer(ej, ej)

        self._census(damped, transport)

        # Boundary trace rows and the inflow solve.
        trace_rows = basis.boundary_rows(self.order)
        trace_system = trace_rows @ self.decaying_vectors
        try:
            self._trace_lu = scipy.linalg.lu_factor(trace_system)
        except scipy.linalg.LinAlgError as exc:  # pragma: no cover - defensive
            raise SingularRecoveryMatrix("boundary trace system is singular") from exc
        if not np.all(np.isfinite(self._trace_lu[0])):
            raise SingularRecoveryMatrix("boundary trace system is singular")

        # Incoming-half trace data of each null mode.
        cols = []
        for q in polys:
            cols.append(basis.project_halfline_weighted(
                lambda w, q=q: q(w - u))[: self.order])
        self.null_trace_data = np.column_stack(cols)

        # Unit solves: damped response to each solved mode's boundary trace.
        self._unit_boundary = np.zeros((size, len(self.solved_modes)))
        for col, j in enumerate(self.solved_modes):
            b = scipy.linalg.lu_solve(self._trace_lu, self.null_trace_data[:, j])
            self._unit_boundary[:, col] = self.decaying_vectors @ b

        # Recovery rows: flux brackets for moving modes, quadratic brackets
        # for zero-speed modes (whose flux bracket carries no damping).
        rows = []
        for j in self.solved_modes:
            if abs(state.mode_speeds[j]) <= SPEED_TOL:
                rows.append(quad_vectors[:, j])
            else:
                rows.append(self.flux_vectors[:, j])
        self._recovery_rows = np.array(rows).reshape(len(rows), size)
        recovery = self._recovery_rows @ self._unit_boundary
        n = len(self.solved_modes)
        if n:
            if not np.all(np.isfinite(recovery)):
                raise SingularRecoveryMatrix("recovery system has non-finite entries")
            cond = np.linalg.cond(recovery)
            if not np.isfinite(cond) or cond > 1e12:
                raise SingularRecoveryMatrix(
                    f"recovery system is numerically singular (cond={cond:.3e})"
                )
            self._recovery_lu = scipy.linalg.lu_factor(recovery)
        else:
            self._recovery_lu = None

    def _census(self, damped: np.ndarray, transport: np.ndarray) -> None:
        w, vectors = scipy.linalg.eig(damped, transport, homogeneous_eigvals=True)
        num, den = w[0], w[1]
        finite = np.abs(den) > _BETA_CUT * np.max(np.abs(den))
        lam = num[finite] / den[finite]
        vecs = vectors[:, finite]

        n_inf = int(np.count_nonzero(~finite))
        re, im = lam.real, lam.imag
        magnitude = np.abs(lam)
        zero = magnitude <= _ZERO_CUT
        neg = (~zero) & (re < 0.0)
        pos = (~zero) & (re >= 0.0)
        census = (int(neg.sum()), int(zero.sum()), int(pos.sum()) + n_inf)
        if census[0] != self.order:
            raise ModeCountError(
                f"expected {self.order} decaying modes, census "
                f"(decaying, zero, growing-or-infinite) = {census} "
                f"at state {self.state}"
            )
        bad_imag = np.abs(im[neg]) > 1e-6 * np.maximum(1.0, np.abs(re[neg]))
        if np.any(bad_imag):
            raise ModeCountError(
                "decaying spectrum contains a complex pair; "
                f"worst Im/Re = {np.max(np.abs(im[neg] / re[neg])):.3e}"
            )
        order_idx = np.argsort(re[neg])
        decaying = vecs[:, neg][:, order_idx]
        imag_scale = np.max(np.abs(decaying.imag))
        real_scale = np.max(np.abs(decaying.real))
        if imag_scale > 1e-8 * real_scale:
            raise ModeCountError(
                f"decaying eigenvectors are not real (|Im|/|Re| = "
                f"{imag_scale / real_scale:.3e})"
            )
        self.decay_rates = re[neg][order_idx]
        self.decaying_vectors = decaying.real
        self.census = census

    # -- solving ------------------------------------------------------------

    def solve(self, inflow, pinned: Mapping[int, float] | None = None) -> LayerSolution:
        """Solve the layer for one inflow and pinned far-field amplitudes.

        ``pinned`` must give an amplitude for every mode transporting toward
        the boundary (negative speed) and nothing else.
        """
        pinned = dict(pinned or {})
        if set(pinned) != set(self.pinned_modes):
            raise ConfigError(
                f"pinned modes {sorted(pinned)} do not match the modes with "
                f"negative speed {self.pinned_modes}"
            )
        data = np.asarray(inflow.boundary_data(self), dtype=float)
        if data.shape != (self.order,):
            raise ConfigError("inflow data has wrong length")
        for j, amp in pinned.items():
            data = data - float(amp) * self.null_trace_data[:, j]

        b = scipy.linalg.lu_solve(self._trace_lu, data)
        boundary = self.decaying_vectors @ b

        n = len(self.solved_modes)
        if n:
            rhs = self._recovery_rows @ boundary
            xi = scipy.linalg.lu_solve(self._recovery_lu, rhs)
        else:
            xi = np.zeros(0)
        remainder = boundary - self._unit_boundary @ xi

        end_coeffs = np.zeros(3)
        for col, j in enumerate(self.solved_modes):
            end_coeffs[j] = xi[col]
        for j, amp in pinned.items():
            end_coeffs[j] = float(amp)

        check_modes = set(self.pinned_modes) | {
            j for j in self.solved_modes
            if abs(self.state.mode_speeds[j]) <= SPEED_TOL
        }
        if check_modes:
            residual = max(
                abs(float(self.flux_vectors[:, j] @ remainder)) for j in check_modes
            )
        else:
            residual = 0.0

        return LayerSolution(
            workbench=self,
            remainder_coeffs=remainder,
            end_coeffs=end_coeffs,
            solved_coeffs=xi,
            conservation_residual=residual,
        )


@dataclass
class GreensFunctionCache:
    """Cache of layer workbenches keyed by rounded reference states."""

    order: int = 30
    alpha: float = 1.0
    _store: dict = field(default_factory=dict, repr=False)

    def workbench(self, rho: float, u: float, T: float) -> LayerWorkbench:
        key = tuple(float(f"{x:.12g}") for x in (rho, u, T))
        bench = self._store.get(key)
        if bench is None:
            bench = LayerWorkbench(
                ReferenceState(rho=key[0], u=key[1], T=key[2]),
                order=self.order,
                alpha=self.alpha,
            )
            self._store[key] = bench
        return bench
