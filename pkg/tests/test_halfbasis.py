"""Tests for half-line orthonormal polynomials and their parity extensions.

The recurrence coefficients are validated against an independent oracle: a
Stieltjes/Hankel construction from raw moments carried out entirely in
high-precision arithmetic, sidestepping the forward recursion being tested.
"""

from __future__ import annotations

import mpmath as mp
import numpy as np
import pytest

from knudsen.errors import RecurrenceBreakdown
from knudsen.halfbasis import (
    ExtendedBasis,
    christoffel_darboux_residual,
    evaluate_ortho,
    gauss_rule,
    gram_error,
    half_range_seed_moments,
    half_range_seed_moments_quadrature,
    half_range_table,
)


def two_sided_gl_rule(cap: float, n_panels: int = 40, n_gl: int = 24):
    """Composite Gauss-Legendre nodes/weights on [-cap, cap] split at 0.

    The extended basis functions jump (odd extensions) or kink (even
    extensions) at the origin, so any comparison quadrature must treat the
    two half-lines separately; all Gauss-Legendre nodes here are interior to
    their panel and never land on 0.
    """
    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(n_gl)
    edges = np.linspace(0.0, cap, n_panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    pos = (mids[:, None] + half[:, None] * gl_nodes[None, :]).ravel()
    wts = (half[:, None] * gl_weights[None, :]).ravel()
    nodes = np.concatenate([-pos[::-1], pos])
    weights = np.concatenate([wts[::-1], wts])
    return nodes, weights


def stieltjes_oracle(mu: float, T: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Recurrence coefficients from raw moments via high-precision Cholesky.

    Raw moments satisfy ``m_{k+1} = mu m_k + T k m_{k-1}`` for ``k >= 1`` with
    ``m_1 = mu m_0 + T exp(-mu^2 / 2T)``; the Hankel-Cholesky route is
    numerically hopeless in doubles but exact at sufficient precision.
    """
    with mp.workdps(40 + 12 * order):
        mu_mp, T_mp = mp.mpf(mu), mp.mpf(T)
        m = [mp.sqrt(mp.pi * T_mp / 2) * mp.erfc(-mu_mp / mp.sqrt(2 * T_mp))]
        m.append(mu_mp * m[0] + T_mp * mp.e ** (-(mu_mp ** 2) / (2 * T_mp)))
        for k in range(1, 2 * order + 3):
            m.append(mu_mp * m[k] + T_mp * k * m[k - 1])
        n = order + 2
        H = mp.matrix(n, n)
        Hs = mp.matrix(n, n)
        for i in range(n):
            for j in range(n):
                H[i, j] = m[i + j]
                Hs[i, j] = m[i + j + 1]
        R = mp.cholesky(H)  # lower-triangular, H = R R^T
        # Orthonormal polynomial coefficient matrix is inv(R); the Jacobi
        # matrix is J = inv(R) Hs inv(R)^T, tridiagonal with alpha on the
        # diagonal and sqrt(beta) off it.
        Rinv = R ** -1
        J = Rinv * Hs * Rinv.T
        alpha = np.array([float(J[i, i]) for i in range(order)])
        beta = np.array([float(J[i, i - 1]) ** 2 for i in range(1, order + 1)])
        return alpha, beta


CASES = [(0.0, 1.0), (1.0, 1.0), (0.5, 0.5), (-1.0, 2.0), (2.0, 0.5)]


@pytest.mark.parametrize("mu,T", CASES)
def test_recurrence_matches_stieltjes_oracle(mu, T):
    order = 12
    table = half_range_table(mu, T, order)
    alpha_o, beta_o = stieltjes_oracle(mu, T, order)
    np.testing.assert_allclose(table.alpha[:order], alpha_o, rtol=1e-11)
    np.testing.assert_allclose(table.beta[1 : order + 1], beta_o, rtol=1e-11)


def test_seed_moments_match_adaptive_quadrature():
    # the closed forms feeding the table builder, validated against an
    # integration route that assumes nothing about them
    for mu, T in CASES:
        table = half_range_table(mu, T, 4)
        m0, m1 = half_range_seed_moments(mu, T)
        q0, q1 = half_range_seed_moments_quadrature(mu, T, dps=40)
        assert m0 == pytest.approx(float(q0), rel=1e-14)
        assert m1 == pytest.approx(float(q1), rel=1e-14)
        assert table.m0 == pytest.approx(m0, rel=1e-13)
        assert table.alpha[0] == pytest.approx(m1 / m0, rel=1e-13)


def test_hand_checked_values_at_standard_weight():
    # for mu=0, T=1: alpha_0 = sqrt(2/pi), beta_1 = 1 - 2/pi
    table = half_range_table(0.0, 1.0, 4)
    assert table.alpha[0] == pytest.approx(np.sqrt(2.0 / np.pi), rel=1e-14)
    assert table.beta[1] == pytest.approx(1.0 - 2.0 / np.pi, rel=1e-14)


def test_table_is_stable_to_high_order():
    # the solver default needs ~order 40; betas must stay positive and finite
    table = half_range_table(1.0, 1.0, 45)
    assert np.all(table.beta[1:] > 0)
    assert np.all(np.isfinite(table.alpha))


def test_breakdown_raises_cleanly(monkeypatch):
    # sanity: guard exists (force it by corrupting the recursion via T <= 0
    # is rejected upstream, so call with an absurd order at low precision)
    with pytest.raises((RecurrenceBreakdown, ValueError)):
        half_range_table(0.0, 1.0, 0)


@pytest.mark.parametrize("mu,T", CASES)
def test_gauss_rule_integrates_polynomials_exactly(mu, T):
    order = 16
    table = half_range_table(mu, T, order)
    nodes, weights = gauss_rule(table, order)
    # exactness on monomials up to degree 2*order - 1 against mpmath quadrature
    for deg in (0, 1, 7, 2 * order - 1):
        approx = float(np.sum(weights * nodes ** deg))
        with mp.workdps(40):
            exact = float(
                mp.quad(
                    lambda w: w ** deg * mp.e ** (-((w - mu) ** 2) / (2 * T)),
                    [0, abs(mu) + mp.sqrt(T), mp.inf],
                )
            )
        assert approx == pytest.approx(exact, rel=1e-12, abs=1e-13)
    assert np.all(nodes > 0)
    assert np.all(weights > 0)


@pytest.mark.parametrize("mu,T", [(0.0, 1.0), (0.0, 0.5), (1.0, 1.0), (2.0, 0.5), (2.0, 1.0)])
def test_gram_identity_to_order_30(mu, T):
    assert gram_error(mu, T, 30) < 1e-8


@pytest.mark.parametrize("mu,T", [(0.0, 1.0), (1.0, 0.5), (2.0, 1.0)])
def test_christoffel_darboux_identity(mu, T):
    for n in (3, 7, 10):
        assert christoffel_darboux_residual(mu, T, n) < 1e-7


def test_evaluate_ortho_recovers_orthonormality_via_own_rule():
    table = half_range_table(0.7, 1.3, 30)
    nodes, weights = gauss_rule(table, 30)
    B = evaluate_ortho(table, nodes, 14)
    gram = B.T @ (weights[:, None] * B)
    np.testing.assert_allclose(gram, np.eye(15), atol=1e-12)


class TestExtendedBasis:
    def setup_method(self):
        self.basis = ExtendedBasis(u=1.0, T=1.0, order=12)

    def test_shape_and_indexing(self):
        b = self.basis
        assert b.size == 25
        assert list(b.kappa[:5]) == [0, 0, 1, 1, 2]
        # odd extensions (even k) flip sign under reflection
        assert b.parity_sign[0] == -1.0 and b.parity_sign[1] == 1.0

    def test_extended_functions_orthonormal_on_full_line(self):
        b = self.basis
        w, wt = two_sided_gl_rule(16.0)
        vals = b.evaluate(w)
        gram = (vals * wt) @ vals.T
        np.testing.assert_allclose(gram, np.eye(b.size), atol=1e-11)

    def test_odd_extensions_vanish_at_origin(self):
        vals = self.basis.evaluate(np.array([0.0]))
        np.testing.assert_allclose(vals[::2, 0], 0.0, atol=1e-300)

    def test_transport_matrix_matches_grid_quadrature(self):
        b = self.basis
        w, wt = two_sided_gl_rule(18.0)
        vals = b.evaluate(w)
        A_grid = (vals * (w * wt)) @ vals.T
        np.testing.assert_allclose(b.transport_matrix(), A_grid, atol=1e-11)

    def test_transport_matrix_is_singular_with_known_null_vector(self):
        # x[k] = B_kappa(0) on odd extensions only is annihilated: the odd
        # blocks couple through J whose rows against B_m(0) telescope to w=0
        b = self.basis
        A = b.transport_matrix()
        B0 = evaluate_ortho(b.center_table, np.array([0.0]), b.order)[0]
        null = np.zeros(b.size)
        null[::2] = B0
        resid = A @ null
        assert np.max(np.abs(resid)) < 1e-10 * np.max(np.abs(B0))

    def test_pair_projection_matches_grid_quadrature(self):
        # project chi-like factor Q(w - u) exp(-(w-u)^2/4T) onto every P_k
        b = self.basis
        q = lambda s: 1.0 + 0.5 * s - 0.25 * s ** 2

        got = b.project_pair_weighted(
            poly_plus=lambda w: q(w - b.u),
            poly_minus=lambda w: q(-w - b.u),
        )
        w, wt = two_sided_gl_rule(18.0)
        g = q(w - b.u) * np.exp(-((w - b.u) ** 2) / (4.0 * b.T))
        expected = b.evaluate(w) @ (wt * g)
        np.testing.assert_allclose(got, expected, atol=1e-11)

    def test_halfline_projection_matches_panel_quadrature(self):
        b = self.basis
        poly = lambda w: w ** 2 - 0.3 * w
        got = b.project_halfline_weighted(poly)
        # independent: dense trapezoid on (0, 18)
        w = np.linspace(1e-9, 18.0, 360001)
        from knudsen.halfbasis import evaluate_ortho as ev

        B = ev(b.center_table, w, b.order)
        g = poly(w) * np.exp(-((w - b.u) ** 2) / (4.0 * b.T)) * np.exp(
            -(w ** 2) / (4.0 * b.T)
        )
        expected = np.trapezoid(B * g[:, None], w, axis=0)
        np.testing.assert_allclose(got, expected, atol=1e-9)

    def test_boundary_rows_extract_positive_trace_coefficients(self):
        b = self.basis
        rows = b.boundary_rows(b.order)
        a = np.random.default_rng(5).normal(size=b.size)
        # trace on w>0 equals sum_m c_m B_m(w) e^{-w^2/4T} with
        # c_m = (a_{2m} + a_{2m+1}) / sqrt(2)
        w = np.linspace(0.01, 10.0, 500)
        trace = a @ b.evaluate(w)
        from knudsen.halfbasis import evaluate_ortho as ev

        B = ev(b.center_table, w, b.order)
        coeff = rows @ a
        recon = (B[:, : b.order] @ coeff) * np.exp(-(w ** 2) / (4.0 * b.T))
        # difference is only the unconstrained top polynomial a_{2N} B_N
        top = a[-1] / np.sqrt(2.0) * B[:, b.order] * np.exp(-(w ** 2) / (4.0 * b.T))
        np.testing.assert_allclose(trace, recon + top, atol=1e-10)
