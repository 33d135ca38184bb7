"""Linearization of the kinetic dynamics about a global Maxwellian.

Distributions are written ``F = M_* + sqrt(M_*) f`` where ``M_*`` is the
Maxwellian of a fixed reference state ``(rho_*, u_*, T_*)``.  The fluctuation
``f`` relaxes toward its infinitesimal-Maxwellian projection, and the
projection operator has a three-dimensional range spanned by an orthonormal
null basis ``chi_0, chi_+, chi_-`` whose flux speeds are ``u_*`` and
``u_* +- sqrt(3 T_*)``.  The same three speeds diagonalize the linearized
fluid system for the macroscopic fluctuations, and this module owns every
conversion between the three coordinate systems in play:

* tilde moments ``(rho~, u~, T~)`` of a fluctuation,
* characteristic amplitudes ``eta = V^{-1} (rho~, u~, T~)``,
* null-mode coefficients ``a_j = <chi_j, f>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .phase import VelocityGrid

__all__ = [
    "MODE_ZERO",
    "MODE_PLUS",
    "MODE_MINUS",
    "MODE_NAMES",
    "FLIP_MODE_PERMUTATION",
    "FLIP_MODE_SIGNS",
    "SPEED_TOL",
    "ReferenceState",
    "sqrt_maxwellian",
    "null_modes",
    "tilde_moments",
    "infinitesimal_maxwellian",
    "collision_apply",
    "acoustic_matrix",
    "acoustic_eigenvectors",
    "acoustic_eigenvectors_inverse",
    "eta_from_primitive",
    "primitive_from_eta",
    "xi_eta_factors",
    "null_coefficients_from_primitive",
    "primitive_from_null_coefficients",
    "null_mode_flux",
    "fluctuation_flux_projection",
    "flip_null_coefficients",
]

# Mode ordering used everywhere: index 0 rides at speed u_*, index 1 at
# u_* + sqrt(3 T_*), index 2 at u_* - sqrt(3 T_*).
MODE_ZERO = 0
MODE_PLUS = 1
MODE_MINUS = 2
MODE_NAMES = ("zero", "plus", "minus")

# Reversing the velocity axis maps the mode functions onto each other:
# chi~_0(w) = chi_0(-w), chi~_+(w) = -chi_-(-w), chi~_-(w) = -chi_+(-w).
# Coefficients transform with the same permutation and signs, and the map is
# an involution.
FLIP_MODE_PERMUTATION = (0, 2, 1)
FLIP_MODE_SIGNS = (1.0, -1.0, -1.0)

#: Speeds closer to zero than this are treated as degenerate (sonic) modes.
SPEED_TOL = 1e-12


@dataclass(frozen=True)
class ReferenceState:
    """Reference Maxwellian state ``(rho, u, T)`` with derived mode data."""

    rho: float
    u: float
    T: float

    def __post_init__(self) -> None:
        if self.rho <= 0 or self.T <= 0:
            raise ValueError("reference state needs rho > 0 and T > 0")

    @property
    def sound_speed(self) -> float:
        return float(np.sqrt(3.0 * self.T))

    @cached_property
    def mode_speeds(self) -> np.ndarray:
        """Transport speeds of the three null modes, in mode order."""
        c = self.sound_speed
        return np.array([self.u, self.u + c, self.u - c])

    @cached_property
    def incoming_modes(self) -> tuple[int, ...]:
        """Modes with positive speed plus degenerate (zero-speed) modes.

        These are the modes whose end-state amplitude is determined by the
        incoming data of a half-space problem posed on ``z > 0``.
        """
        return tuple(
            j for j in range(3)
            if self.mode_speeds[j] > SPEED_TOL or abs(self.mode_speeds[j]) <= SPEED_TOL
        )

    @cached_property
    def outgoing_modes(self) -> tuple[int, ...]:
        """Modes with negative speed; their end-state amplitude is free data."""
        return tuple(j for j in range(3) if self.mode_speeds[j] < -SPEED_TOL)

    @cached_property
    def zero_modes(self) -> tuple[int, ...]:
        return tuple(j for j in range(3) if abs(self.mode_speeds[j]) <= SPEED_TOL)

    def flipped(self) -> "ReferenceState":
        """Reference state seen through the velocity reversal ``v -> -v``."""
        return ReferenceState(self.rho, -self.u, self.T)

    def maxwellian(self, v: np.ndarray) -> np.ndarray:
        return self.rho / np.sqrt(2.0 * np.pi * self.T) * np.exp(
            -((v - self.u) ** 2) / (2.0 * self.T)
        )


def sqrt_maxwellian(ref: ReferenceState, v: np.ndarray) -> np.ndarray:
    """``sqrt(M_*)`` evaluated at ``v``."""
    return np.sqrt(ref.rho) * (2.0 * np.pi * ref.T) ** (-0.25) * np.exp(
        -((v - ref.u) ** 2) / (4.0 * ref.T)
    )


def null_mode_polynomials(ref: ReferenceState) -> tuple:
    """Polynomial factors of the null modes as callables of ``s = v - u``.

    ``chi_j(v) = q_j(v - u) exp(-(v - u)^2 / 4T)`` with the normalization
    prefactor folded into ``q_j``; shared by grid evaluation and the weighted
    projections of the layer solver so the convention lives in one place.
    """
    T = ref.T
    pref = (2.0 * np.pi * T) ** (-0.25) / np.sqrt(6.0)
    root = np.sqrt(3.0 / T)

    def q_zero(s):
        return pref * (s * s / T - 3.0)

    def q_plus(s):
        return pref * (root * s + s * s / T)

    def q_minus(s):
        return pref * (root * s - s * s / T)

    return (q_zero, q_plus, q_minus)


def null_modes(ref: ReferenceState, v: np.ndarray) -> np.ndarray:
    """Orthonormal null basis evaluated at ``v``; shape ``(3, len(v))``.

    The basis is independent of ``rho``:

    ``chi_j = (1/sqrt(6)) (2 pi T)^{-1/4} Q_j(w) exp(-w^2 / 4T)``,  ``w = v - u``,

    with ``Q_0 = w^2/T - 3`` and ``Q_+- = sqrt(3/T) w +- w^2/T``.  They are
    orthonormal in plain L^2 and satisfy ``<v chi_i, chi_j> = speeds[i] delta_ij``.
    """
    w = np.asarray(v, dtype=float) - ref.u
    gauss = np.exp(-(w ** 2) / (4.0 * ref.T))
    polys = null_mode_polynomials(ref)
    return np.stack([q(w) * gauss for q in polys])


def tilde_moments(f: np.ndarray, grid: VelocityGrid,
                  ref: ReferenceState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Macroscopic fluctuations ``(rho~, u~, T~)`` carried by ``f``.

    They are defined through the raw moments of ``f sqrt(M_*)``:
    ``<f sqrt(M_*)> = rho~``, ``<v f sqrt(M_*)> = rho~ u_* + rho_* u~`` and
    ``<v^2 f sqrt(M_*)> = rho~ (u_*^2 + T_*) + 2 rho_* u_* u~ + rho_* T~``,
    inverted triangularly.  Velocity rides on the last axis of ``f``.
    """
    v = grid.nodes
    weighted = f * sqrt_maxwellian(ref, v)
    m0 = grid.integrate(weighted)
    m1 = grid.integrate(weighted * v)
    m2 = grid.integrate(weighted * v * v)
    rho_t = m0
    u_t = (m1 - rho_t * ref.u) / ref.rho
    T_t = (m2 - rho_t * (ref.u ** 2 + ref.T) - 2.0 * ref.rho * ref.u * u_t) / ref.rho
    return rho_t, u_t, T_t


def infinitesimal_maxwellian(ref: ReferenceState, v: np.ndarray,
                             rho_t: float | np.ndarray, u_t: float | np.ndarray,
                             T_t: float | np.ndarray) -> np.ndarray:
    """Infinitesimal Maxwellian fluctuation with tilde moments ``(rho~, u~, T~)``.

    ``m = [rho~/rho_* + u~ w / T_* + (T~ / 2 T_*)(w^2/T_* - 1)] sqrt(M_*)``.

    Scalar tilde moments give a 1-d profile over ``v``; array moments of shape
    ``(nx, 1)`` broadcast to ``(nx, nv)``.
    """
    w = np.asarray(v, dtype=float) - ref.u
    bracket = (
        np.asarray(rho_t) / ref.rho
        + np.asarray(u_t) * w / ref.T
        + np.asarray(T_t) / (2.0 * ref.T) * (w ** 2 / ref.T - 1.0)
    )
    return bracket * sqrt_maxwellian(ref, v)


def collision_apply(f: np.ndarray, chi_vals: np.ndarray, dv: float) -> np.ndarray:
    """Linearized collision operator ``L f = Pi f - f`` on a velocity grid.

    ``Pi`` projects onto the span of the rows of ``chi_vals`` (the null basis
    evaluated on the grid) using midpoint quadrature.  ``f`` has velocity on
    the last axis.
    """
    brackets = dv * (f @ chi_vals.T)
    return brackets @ chi_vals - f


def acoustic_matrix(ref: ReferenceState) -> np.ndarray:
    """Advection matrix of the linearized fluid system in ``(rho~, u~, T~)``."""
    return np.array([
        [ref.u, ref.rho, 0.0],
        [ref.T / ref.rho, ref.u, 1.0],
        [0.0, 2.0 * ref.T, ref.u],
    ])


def acoustic_eigenvectors(ref: ReferenceState) -> np.ndarray:
    """Columns are right eigenvectors of :func:`acoustic_matrix` in mode order."""
    rho, T = ref.rho, ref.T
    c = ref.sound_speed
    return np.array([
        [2.0 * rho / (3.0 * T), rho / 6.0, rho / 6.0],
        [0.0, c / 6.0, -c / 6.0],
        [-2.0 / 3.0, T / 3.0, T / 3.0],
    ])


def acoustic_eigenvectors_inverse(ref: ReferenceState) -> np.ndarray:
    """Inverse of :func:`acoustic_eigenvectors`; rows extract ``eta`` amplitudes."""
    rho, T = ref.rho, ref.T
    s = np.sqrt(3.0 / T)
    return np.array([
        [T / rho, 0.0, -0.5],
        [1.0 / rho, s, 1.0 / T],
        [1.0 / rho, -s, 1.0 / T],
    ])


def eta_from_primitive(ref: ReferenceState, tilde: np.ndarray) -> np.ndarray:
    """Characteristic amplitudes ``eta`` of tilde fields stacked on axis 0."""
    return acoustic_eigenvectors_inverse(ref) @ tilde


def primitive_from_eta(ref: ReferenceState, eta: np.ndarray) -> np.ndarray:
    """Tilde fields ``(rho~, u~, T~)`` from characteristic amplitudes."""
    return acoustic_eigenvectors(ref) @ eta


def xi_eta_factors(ref: ReferenceState) -> np.ndarray:
    """Per-mode factors linking null coefficients to amplitudes: ``a_j = k_j eta_j``.

    An infinitesimal Maxwellian with amplitudes ``eta`` has null-basis
    coefficients ``a_j = <chi_j, m>`` given by ``a_j = k_j eta_j`` with
    ``k = (-2 sqrt(rho)/(sqrt(6) T), sqrt(rho)/sqrt(6), -sqrt(rho)/sqrt(6))``.
    """
    r = np.sqrt(ref.rho) / np.sqrt(6.0)
    return np.array([-2.0 * r / ref.T, r, -r])


def _per_mode(factors: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Broadcast per-mode factors over trailing axes of mode-stacked values."""
    return factors.reshape((3,) + (1,) * (values.ndim - 1)) * values


def null_coefficients_from_primitive(ref: ReferenceState, tilde: np.ndarray) -> np.ndarray:
    """Null-basis coefficients of the infinitesimal Maxwellian with given tilde fields."""
    eta = eta_from_primitive(ref, np.asarray(tilde, dtype=float))
    return _per_mode(xi_eta_factors(ref), eta)


def primitive_from_null_coefficients(ref: ReferenceState, coeffs: np.ndarray) -> np.ndarray:
    """Tilde fields carried by a null-space element with coefficients ``a_j``."""
    coeffs = np.asarray(coeffs, dtype=float)
    eta = _per_mode(1.0 / xi_eta_factors(ref), coeffs)
    return primitive_from_eta(ref, eta)


def null_mode_flux(ref: ReferenceState) -> np.ndarray:
    """Conservative fluxes carried by the null modes; shape ``(3 modes, 3 components)``.

    Row ``j`` is ``integral of v (1, v, v^2/2) chi_j sqrt(M_*) dv`` in closed
    form, so a layer end state ``sum_j c_j chi_j`` adds ``sum_j c_j row_j`` to
    the Maxwellian flux of the reference state.
    """
    u = ref.u
    s = np.sqrt(ref.T)
    r = np.sqrt(ref.rho / 6.0)
    sq3 = np.sqrt(3.0)
    row_zero = r * np.array([-2.0 * u, -2.0 * u * u, -u ** 3])
    row_plus = r * np.array([
        u + sq3 * s,
        u * u + 2.0 * sq3 * u * s + 3.0 * s * s,
        (u ** 3 + 3.0 * sq3 * u * u * s + 9.0 * u * s * s + 3.0 * sq3 * s ** 3) / 2.0,
    ])
    row_minus = r * np.array([
        -u + sq3 * s,
        -u * u + 2.0 * sq3 * u * s - 3.0 * s * s,
        (-u ** 3 + 3.0 * sq3 * u * u * s - 9.0 * u * s * s + 3.0 * sq3 * s ** 3) / 2.0,
    ])
    return np.stack([row_zero, row_plus, row_minus])


def fluctuation_flux_projection(ref: ReferenceState, rho_t: float, u_t: float,
                                T_t: float) -> np.ndarray:
    """Flux pairings ``<v m chi_j>`` of an infinitesimal Maxwellian, closed form.

    With ``a = rho~/rho_*``, ``b = u~``, ``c = T~`` and ``w = v - u_*``:

    * ``<v m chi_0> = sqrt(rho/6) u (c/T - 2a)``
    * ``<v m chi_+-> = sqrt(rho/6) [u (sqrt(3/T) b +- (a + c/T)) + sqrt(3/T)(a T + c) +- 3b]``

    Dividing entry ``j`` by the mode speed gives the flux-weighted projection
    used to pin outgoing-mode amplitudes consistently with the fluid state.
    """
    u, T = ref.u, ref.T
    a = rho_t / ref.rho
    b = u_t
    c = T_t
    r = np.sqrt(ref.rho / 6.0)
    s = np.sqrt(3.0 / T)
    p_zero = u * (c / T - 2.0 * a)
    p_plus = u * (s * b + (a + c / T)) + s * (a * T + c) + 3.0 * b
    p_minus = u * (s * b - (a + c / T)) + s * (a * T + c) - 3.0 * b
    return r * np.array([p_zero, p_plus, p_minus])


def flip_null_coefficients(coeffs: np.ndarray) -> np.ndarray:
    """Map null coefficients across the velocity reversal ``v -> -v``.

    Self-inverse: ``(a_0, a_+, a_-) -> (a_0, -a_-, -a_+)``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    permuted = coeffs[list(FLIP_MODE_PERMUTATION)]
    return _per_mode(np.asarray(FLIP_MODE_SIGNS), permuted)
