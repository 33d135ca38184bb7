"""Tests for the gamma = 3 Roe finite-volume solver."""

import numpy as np
import pytest

from knudsen.errors import CFLViolation, NonPhysicalState
from knudsen.euler import EulerSolver, max_wave_speed, roe_flux, roe_matrix
from knudsen.phase import (
    CellMesh,
    conservative_from_primitive,
    physical_flux,
)


def random_states(rng, n):
    """Random physical conservative states, component-first shape (3, n)."""
    rho = rng.uniform(0.1, 3.0, n)
    u = rng.uniform(-2.0, 2.0, n)
    T = rng.uniform(0.1, 3.0, n)
    return conservative_from_primitive(rho, u, T)


def test_roe_flux_consistency_with_physical_flux():
    rng = np.random.default_rng(7)
    U = random_states(rng, 40)
    np.testing.assert_allclose(roe_flux(U, U), physical_flux(U),
                               rtol=0.0, atol=1e-12)


def test_roe_matrix_property_on_random_pairs():
    """A_hat (UR - UL) must reproduce the exact flux difference."""
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        UL = random_states(rng, 1)[:, 0]
        UR = random_states(rng, 1)[:, 0]
        A = roe_matrix(UL, UR)
        resid = A @ (UR - UL) - (physical_flux(UR) - physical_flux(UL))
        worst = max(worst, float(np.max(np.abs(resid))))
    assert worst < 1e-8


def test_wave_decomposition_reconstructs_jumps():
    from knudsen.euler import _roe_averages, _wave_basis, _wave_strengths

    rng = np.random.default_rng(5)
    UL = random_states(rng, 64)
    UR = random_states(rng, 64)
    u_hat, H_hat, c_hat = _roe_averages(UL, UR)
    lam, R = _wave_basis(u_hat, H_hat, c_hat)
    alpha = _wave_strengths(UR - UL, u_hat, c_hat, H_hat)
    dU = np.einsum("cw...,w...->c...", R, alpha)
    np.testing.assert_allclose(dU, UR - UL, atol=1e-11)
    dF = np.einsum("cw...,w...->c...", R, lam * alpha)
    np.testing.assert_allclose(dF, physical_flux(UR) - physical_flux(UL),
                               atol=1e-10)


def test_uniform_state_is_fixed_point():
    mesh = CellMesh(0.0, 1.0, 64)
    solver = EulerSolver(mesh)
    U0 = conservative_from_primitive(1.3, 0.4, 0.9)
    U = np.tile(U0.reshape(3, 1), (1, 64))
    flux = physical_flux(U0)
    U_next = solver.step(U, 1e-3, flux, flux)
    np.testing.assert_allclose(U_next, U, rtol=0.0, atol=1e-14)


def test_conservation_ledger_stays_tiny():
    """Cell totals must track boundary fluxes to near machine precision."""
    mesh = CellMesh(0.0, 1.0, 100)
    solver = EulerSolver(mesh)
    x = mesh.centers
    rho = 1.0 + 0.2 * np.sin(2.0 * np.pi * x)
    u = 0.1 * np.sin(4.0 * np.pi * x)
    T = 1.0 + 0.1 * np.cos(2.0 * np.pi * x)
    U = conservative_from_primitive(rho, u, T)
    dt = 1e-3
    for _ in range(100):
        left = physical_flux(U[:, 0])
        right = physical_flux(U[:, -1])
        U = solver.step(U, dt, left, right)
    assert np.max(np.abs(solver.conservation_defect)) < 1e-12


def test_shock_tube_stays_physical_and_moves():
    mesh = CellMesh(0.0, 1.0, 200)
    solver = EulerSolver(mesh)
    x = mesh.centers
    rho = np.where(x < 0.5, 1.0, 0.125)
    T = np.where(x < 0.5, 1.0, 0.8)
    U = conservative_from_primitive(rho, np.zeros_like(x), T)
    dt = 1e-3
    for _ in range(60):
        left = physical_flux(U[:, 0])
        right = physical_flux(U[:, -1])
        U = solver.step(U, dt, left, right)
    rho, u, T = U[0], U[1] / U[0], None
    assert np.all(rho > 0.0)
    assert np.all(np.isfinite(U))
    # Gas must have started flowing toward the low-pressure side.
    assert np.mean(u) > 1e-3


def test_cfl_guard_raises():
    mesh = CellMesh(0.0, 1.0, 10)
    solver = EulerSolver(mesh)
    U = np.tile(conservative_from_primitive(1.0, 0.0, 1.0).reshape(3, 1),
                (1, 10))
    flux = physical_flux(U[:, 0])
    with pytest.raises(CFLViolation):
        solver.step(U, 0.2, flux, flux)


def test_draining_boundary_flags_non_physical_state():
    mesh = CellMesh(0.0, 1.0, 10)
    solver = EulerSolver(mesh)
    U = np.tile(conservative_from_primitive(1.0, 0.0, 1.0).reshape(3, 1),
                (1, 10))
    right = physical_flux(U[:, 0])
    with pytest.raises(NonPhysicalState):
        U_cur = U
        for _ in range(200):
            U_cur = solver.step(U_cur, 1e-2, np.array([-200.0, 0.0, 0.0]),
                                right)
