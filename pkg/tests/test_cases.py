"""The built-in experiment definitions: data, ghosts, and initial states."""

import numpy as np
import pytest

from knudsen.cases import CoupledCase, LinearizedCase, get_case
from knudsen.errors import ConfigError
from knudsen.halfspace import NullModeInflow
from knudsen.linearization import (
    primitive_from_eta,
    tilde_moments,
    xi_eta_factors,
)
from knudsen.phase import CellMesh, VelocityGrid, maxwellian, moments

GRID = VelocityGrid(10.0, 400)
MESH = CellMesh(0.0, 1.0, 40)


def test_registry_contents():
    one = get_case(1)
    assert isinstance(one, LinearizedCase)
    assert (one.rho, one.u, one.T) == (1.0, 1.0, 1.0)
    assert one.amplitude == 1.5
    assert one.ramp_base == 0.0 and one.ramp_rate == 0.0

    two = get_case(2)
    assert (two.rho, two.u, two.T) == (1.0, 2.0, 0.5)
    assert two.amplitude == 1.25
    assert (two.ramp_base, two.ramp_rate) == (0.0, 1.0)

    three = get_case(3)
    assert (three.rho, three.u, three.T) == (1.0, 2.0, 0.5)
    assert (three.ramp_base, three.ramp_rate) == (1.0, 1.0)

    four = get_case(4)
    assert isinstance(four, CoupledCase)
    assert four.left_primitives is None
    assert four.right_primitives == (1.0, 0.1, 1.0)

    six = get_case(6)
    assert six.kinetic_side == "left"
    assert six.left_primitives == (1.0, 0.1, 1.0)
    assert six.right_primitives == (2.0, 0.2, 2.0)


def test_variant_handling():
    small = get_case(5)
    assert small.variant == "small" and small.left_rate == 5.0
    large = get_case(5, "large")
    assert large.variant == "large" and large.left_rate == 50.0
    with pytest.raises(ConfigError, match="variant"):
        get_case(5, "huge")
    with pytest.raises(ConfigError, match="no variant"):
        get_case(1, "small")
    with pytest.raises(ConfigError, match="unknown experiment"):
        get_case(9)


def test_tilde_profile_is_shared_sine():
    case = get_case(2)
    x = np.linspace(0.0, 1.0, 11)
    prof = case.tilde_profile(x)
    expected = 1.25 * np.sin(2.0 * np.pi * x)
    assert prof.shape == (3, 11)
    for row in prof:
        np.testing.assert_allclose(row, expected, atol=1e-15)


def test_initial_fluctuation_moments_match_profile():
    """The kinetic initial state carries exactly the announced fluctuations."""
    case = get_case(1)
    state = case.initial_fluctuation(MESH, GRID)
    got = np.stack(tilde_moments(state, GRID, case.reference_state))
    want = case.tilde_profile(MESH.centers)
    np.testing.assert_allclose(got, want, atol=1e-9)


def test_linear_ramp_inflows():
    case = get_case(3)
    inflow = case.left_inflow(0.25)
    assert isinstance(inflow, NullModeInflow)
    assert inflow.coefficients == {0: 1.25, 1: 1.25, 2: 1.25}
    assert case.right_inflow(5.0).coefficients == {}

    left, right = case.kinetic_ghosts(GRID)
    np.testing.assert_allclose(right(0.3), 0.0)
    np.testing.assert_allclose(left(0.5), 1.5 * left(0.0) / 1.0, atol=1e-12)
    # Ghost values and acoustic inflow carry the same fluctuation content:
    # the shared coefficient is a weight on the orthonormal null modes, so
    # the amplitude of mode j is coefficient / k_j.
    g = left(0.5)[None, :]
    rho_t, u_t, T_t = tilde_moments(g, GRID, case.reference_state)
    inflow_val = case.left_inflow(0.5)
    xi = np.array([inflow_val.coefficients[j] for j in range(3)])
    eta = xi / xi_eta_factors(case.reference_state)
    prim = primitive_from_eta(case.reference_state, eta)
    np.testing.assert_allclose(
        [rho_t[0], u_t[0], T_t[0]], prim, atol=1e-8)


def test_wall_profiles():
    case = get_case(5, "large")
    wall = case.wall_left(GRID)
    base = maxwellian(GRID.nodes, 1.0, 0.1, 1.0)
    np.testing.assert_allclose(wall(0.0), base, atol=1e-15)
    np.testing.assert_allclose(wall(0.1), 6.0 * base, atol=1e-12)

    vacuum = get_case(4).wall_left(GRID)
    np.testing.assert_allclose(vacuum(3.0), 0.0)

    steady = get_case(4).wall_right(GRID)
    got = moments(steady(9.9)[None, :], GRID)
    np.testing.assert_allclose(got[0][0], 1.0, atol=1e-8)


def test_piecewise_initial_distribution():
    case = get_case(6)
    state = case.initial_distribution(MESH, GRID)
    rho, u, T = moments(state, GRID)
    left = MESH.centers <= 0.5
    np.testing.assert_allclose(rho[left], 1.0, atol=1e-8)
    np.testing.assert_allclose(rho[~left], 2.0, atol=1e-7)
    np.testing.assert_allclose(u[left], 0.1, atol=1e-8)
    np.testing.assert_allclose(T[~left], 2.0, atol=1e-7)


def test_uniform_initial_distribution():
    case = get_case(5)
    state = case.initial_distribution(MESH, GRID)
    rho, u, _ = moments(state, GRID)
    np.testing.assert_allclose(rho, 1.0, atol=1e-8)
    np.testing.assert_allclose(u, 0.1, atol=1e-8)


def test_eps_profile_per_subdomain():
    mesh = CellMesh(0.0, 1.0, 10)
    six = get_case(6)
    prof = six.eps_profile(mesh, 0.25)
    np.testing.assert_allclose(prof[:5], 1.0)
    np.testing.assert_allclose(prof[5:], 0.25)

    five = get_case(5)
    np.testing.assert_allclose(five.eps_profile(mesh, 0.125), 0.125)

    mirrored = CoupledCase(number=0, title="", kinetic_side="right",
                           left_primitives=(1.0, 0.0, 1.0),
                           right_primitives=(1.0, 0.0, 1.0))
    prof = mirrored.eps_profile(mesh, 0.5)
    np.testing.assert_allclose(prof[:5], 0.5)
    np.testing.assert_allclose(prof[5:], 1.0)


def test_fluid_initial_primitives_follow_side():
    case = get_case(6)
    x = np.array([0.6, 0.8, 1.0])
    prim = case.initial_fluid_primitives(x)
    np.testing.assert_allclose(prim[0], 2.0)
    np.testing.assert_allclose(prim[1], 0.2)
    np.testing.assert_allclose(prim[2], 2.0)
