"""Orthonormal half-line Gaussian polynomial bases and their parity extensions.

The half-space boundary-layer solver expands fluctuations in functions

``P_{2m}(w)   = sign(w) B_m(|w|) / sqrt(2) * exp(-w^2 / 4T)``  (odd extension)
``P_{2m+1}(w) = B_m(|w|) / sqrt(2) * exp(-w^2 / 4T)``          (even extension)

where ``B_m`` are orthonormal polynomials on ``(0, inf)`` with weight
``exp(-w^2 / 2T)``.  Indices here are zero-based over the ``2N + 1`` retained
functions (odd extensions of ``B_0 .. B_N`` interleaved with even extensions
of ``B_0 .. B_{N-1}``), which makes the extended family exactly orthonormal
in plain L^2 on the real line.

Recurrence coefficients for weights ``exp(-(w - mu)^2 / 2T)`` on ``(0, inf)``
are generated with a forward recursion evaluated in high-precision arithmetic
(the recursion is exact but numerically ill-conditioned in double precision),
then rounded to float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import RecurrenceBreakdown

__all__ = [
    "RecurrenceTable",
    "half_range_table",
    "half_range_seed_moments",
    "gauss_rule",
    "evaluate_ortho",
    "evaluate_ortho_derivative",
    "ExtendedBasis",
    "gram_error",
    "christoffel_darboux_residual",
]


@dataclass(frozen=True)
class RecurrenceTable:
    """Three-term recurrence data for orthonormal polynomials.

    ``alpha`` has length ``n`` and ``beta`` length ``n + 1`` with ``beta[0]``
    fixed at 0 (it never enters the recurrence); ``m0`` is the total weight
    mass.  Supports evaluating ``B_0 .. B_n`` and building Gauss rules with up
    to ``n`` points.
    """

    mu: float
    T: float
    m0: float
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def order(self) -> int:
        return len(self.alpha)


def half_range_seed_moments(mu: float, T: float) -> tuple[float, float]:
    """Closed-form first two moments of ``exp(-(w-mu)^2/2T)`` on ``(0, inf)``.

    ``m0 = sqrt(pi T / 2) erfc(-mu / sqrt(2T))`` and
    ``m1 = T exp(-mu^2 / 2T) + mu m0``.  The test suite cross-checks these
    against adaptive quadrature over the working parameter range.
    """
    m0 = float(np.sqrt(np.pi * T / 2.0) * mp.erfc(-mu / np.sqrt(2.0 * T)))
    m1 = float(T * np.exp(-mu * mu / (2.0 * T)) + mu * m0)
    return m0, m1


def half_range_seed_moments_quadrature(mu: float, T: float,
                                       dps: int = 40) -> tuple:
    """Seed moments by adaptive quadrature at ``dps`` digits (oracle path).

    Slow; exists so tests can validate the closed forms without assuming
    them.  Returns mpmath values at the requested precision.
    """
    with mp.workdps(dps):
        mu_mp, T_mp = mp.mpf(mu), mp.mpf(T)

        def weight(w):
            return mp.e ** (-((w - mu_mp) ** 2) / (2 * T_mp))

        split = [0, abs(mu_mp) + mp.sqrt(T_mp), mp.inf]
        m0 = mp.quad(weight, split)
        m1 = mp.quad(lambda w: w * weight(w), split)
        return m0, m1


@lru_cache(maxsize=256)
def half_range_table(mu: float, T: float, order: int) -> RecurrenceTable:
    """Recurrence table for weight ``exp(-(w - mu)^2 / 2T)`` on ``(0, inf)``.

    Seeds ``m0, m1`` are the closed-form Gaussian moments (validated against
    adaptive quadrature by the test suite); subsequent coefficients follow
    the forward recursion

    ``beta_{n+1} = 2 T n + T - beta_n + mu alpha_n - alpha_n^2``
    ``alpha_{n+1} = (T / beta_{n+1}) sum_{k<=n} alpha_k - alpha_n + mu``

    evaluated in precision that grows with ``order`` so the float64 results
    are fully accurate despite the recursion's forward instability.
    """
    if order < 1:
        raise ValueError("table order must be >= 1")
    dps = 30 + 3 * order
    with mp.workdps(dps):
        mu_mp = mp.mpf(mu)
        T_mp = mp.mpf(T)
        m0 = mp.sqrt(mp.pi * T_mp / 2) * mp.erfc(-mu_mp / mp.sqrt(2 * T_mp))
        m1 = T_mp * mp.e ** (-(mu_mp ** 2) / (2 * T_mp)) + mu_mp * m0

        alphas = [m1 / m0]
        betas = [mp.mpf(0)]
        alpha_sum = alphas[0]
        for n in range(order):
            beta_next = 2 * T_mp * n + T_mp - betas[n] + mu_mp * alphas[n] - alphas[n] ** 2
            if beta_next <= 0:
                raise RecurrenceBreakdown(
                    f"beta_{n + 1} <= 0 for weight (mu={mu}, T={T}) at precision {dps}"
                )
            alpha_next = (T_mp / beta_next) * alpha_sum - alphas[n] + mu_mp
            betas.append(beta_next)
            alphas.append(alpha_next)
            alpha_sum += alpha_next

        return RecurrenceTable(
            mu=float(mu),
            T=float(T),
            m0=float(m0),
            alpha=np.array([float(a) for a in alphas[:order]]),
            beta=np.array([float(b) for b in betas[: order + 1]]),
        )


def gauss_rule(table: RecurrenceTable, n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss quadrature nodes/weights for the table's weight function."""
    if n_points < 1 or n_points > table.order:
        raise ValueError("n_points must be within the table order")
    if n_points == 1:
        return table.alpha[:1].copy(), np.array([table.m0])
    nodes, vectors = eigh_tridiagonal(
        table.alpha[:n_points], np.sqrt(table.beta[1:n_points])
    )
    weights = table.m0 * vectors[0, :] ** 2
    return nodes, weights


def evaluate_ortho(table: RecurrenceTable, x: np.ndarray, n_max: int) -> np.ndarray:
    """Evaluate ``B_0 .. B_{n_max}`` at points ``x``; shape ``(len(x), n_max+1)``.

    The forward evaluation recurrence amplifies rounding by roughly a digit
    every few orders for half-range Gaussian weights, so it runs in extended
    precision and is rounded to float64 only at the end.
    """
    if n_max + 1 > table.order + 1 or n_max < 0:
        raise ValueError("n_max beyond table order")
    x = np.asarray(x, dtype=np.longdouble)
    alpha = table.alpha.astype(np.longdouble)
    sqrt_beta = np.sqrt(table.beta.astype(np.longdouble))
    out = np.empty((x.size, n_max + 1), dtype=np.longdouble)
    out[:, 0] = 1.0 / np.sqrt(np.longdouble(table.m0))
    if n_max >= 1:
        out[:, 1] = (x - alpha[0]) * out[:, 0] / sqrt_beta[1]
    for n in range(1, n_max):
        out[:, n + 1] = (
            (x - alpha[n]) * out[:, n] - sqrt_beta[n] * out[:, n - 1]
        ) / sqrt_beta[n + 1]
    return out.astype(float)


def evaluate_ortho_derivative(table: RecurrenceTable, x: np.ndarray, n_max: int) -> np.ndarray:
    """Evaluate derivatives ``B'_0 .. B'_{n_max}`` at ``x``."""
    if n_max + 1 > table.order + 1 or n_max < 0:
        raise ValueError("n_max beyond table order")
    x = np.asarray(x, dtype=np.longdouble)
    alpha = table.alpha.astype(np.longdouble)
    sqrt_beta = np.sqrt(table.beta.astype(np.longdouble))
    B = np.empty((x.size, n_max + 1), dtype=np.longdouble)
    B[:, 0] = 1.0 / np.sqrt(np.longdouble(table.m0))
    out = np.zeros_like(B)
    if n_max >= 1:
        B[:, 1] = (x - alpha[0]) * B[:, 0] / sqrt_beta[1]
        out[:, 1] = B[:, 0] / sqrt_beta[1]
    for n in range(1, n_max):
        B[:, n + 1] = ((x - alpha[n]) * B[:, n] - sqrt_beta[n] * B[:, n - 1]) / sqrt_beta[n + 1]
        out[:, n + 1] = (
            B[:, n] + (x - alpha[n]) * out[:, n] - sqrt_beta[n] * out[:, n - 1]
        ) / sqrt_beta[n + 1]
    return out.astype(float)


class ExtendedBasis:
    """Parity-extended orthonormal family for a reference state ``(u, T)``.

    Provides the structural matrices of the Galerkin half-space solver:

    * ``kappa[k]``: underlying polynomial degree of extended function ``k``;
      even ``k`` are odd extensions (vanish nowhere but flip sign), odd ``k``
      are even extensions,
    * ``transport_matrix``: ``<w P_i, P_j>``,
    * half-line projections of products with Gaussian-profile factors, using
      Gauss rules for the shifted weights ``exp(-(w -+ u/2)^2 / 2T)`` so all
      polynomial integrands are integrated exactly.
    """

    def __init__(self, u: float, T: float, order: int, n_quad: int | None = None):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.u = float(u)
        self.T = float(T)
        self.order = int(order)
        self.size = 2 * order + 1
        self.n_quad = int(n_quad) if n_quad is not None else max(order + 8, 24)

        table_len = max(self.n_quad, order + 2)
        self.center_table = half_range_table(0.0, self.T, table_len)
        self.plus_table = half_range_table(+self.u / 2.0, self.T, table_len)
        self.minus_table = half_range_table(-self.u / 2.0, self.T, table_len)

        self.plus_nodes, self.plus_weights = gauss_rule(self.plus_table, self.n_quad)
        self.minus_nodes, self.minus_weights = gauss_rule(self.minus_table, self.n_quad)
        # B_m(node) for all polynomials that appear in projections
        self._B_plus = evaluate_ortho(self.center_table, self.plus_nodes, order)
        self._B_minus = evaluate_ortho(self.center_table, self.minus_nodes, order)

        self.kappa = np.arange(self.size) // 2
        # +1 for even extensions (odd k), -1 for odd extensions (even k)
        self.parity_sign = np.where(np.arange(self.size) % 2 == 0, -1.0, 1.0)

    def transport_matrix(self) -> np.ndarray:
        """``A[i, j] = <w P_i, P_j>``: Jacobi entries between opposite parities."""
        n = self.size
        A = np.zeros((n, n))
        alpha = self.center_table.alpha
        beta = self.center_table.beta
        for i in range(n):
            for j in range(n):
                if (i + j) % 2 == 0:
                    continue  # same parity: integrand is odd
                a, b = self.kappa[i], self.kappa[j]
                if a == b:
                    A[i, j] = alpha[a]
                elif abs(a - b) == 1:
                    A[i, j] = np.sqrt(beta[max(a, b)])
        return A

    def project_pair_weighted(self, poly_plus, poly_minus) -> np.ndarray:
        """Full-line pairing of each ``P_k`` with ``g(w) exp(-(w-u)^2 / 4T)``.

        ``poly_plus(w)`` must return the polynomial factor of the integrand for
        ``w > 0`` and ``poly_minus(w)`` the factor of the reflected integrand
        ``g(-w)`` for ``w > 0``; the Gaussian parts are handled exactly by the
        shifted Gauss rules.
        """
        damp = np.exp(-self.u ** 2 / (8.0 * self.T))
        plus_vals = self.plus_weights * poly_plus(self.plus_nodes)
        minus_vals = self.minus_weights * poly_minus(self.minus_nodes)
        plus_part = self._B_plus.T @ plus_vals
        minus_part = self._B_minus.T @ minus_vals
        out = (plus_part[self.kappa] + self.parity_sign * minus_part[self.kappa])
        return damp / np.sqrt(2.0) * out

    def project_halfline_weighted(self, poly_plus) -> np.ndarray:
        """``int_0^inf g(w) B_m(w) exp(-w^2/4T) dw`` for ``m = 0 .. order``.

        ``poly_plus(w)`` is the polynomial factor of
        ``g(w) = poly_plus(w) exp(-(w-u)^2 / 4T)``.
        """
        damp = np.exp(-self.u ** 2 / (8.0 * self.T))
        vals = self.plus_weights * poly_plus(self.plus_nodes)
        return damp * (self._B_plus.T @ vals)

    def boundary_rows(self, n_rows: int) -> np.ndarray:
        """Trace matrix: row ``m`` extracts the ``B_m`` coefficient of the
        ``w > 0`` trace, ``(a_{2m} + a_{2m+1}) / sqrt(2)``."""
        rows = np.zeros((n_rows, self.size))
        for m in range(n_rows):
            rows[m, 2 * m] = 1.0 / np.sqrt(2.0)
            if 2 * m + 1 < self.size:
                rows[m, 2 * m + 1] = 1.0 / np.sqrt(2.0)
        return rows

    def evaluate(self, w: np.ndarray) -> np.ndarray:
        """Evaluate all extended functions at ``w``; shape ``(size, len(w))``."""
        w = np.asarray(w, dtype=float)
        B = evaluate_ortho(self.center_table, np.abs(w), self.order)
        gauss = np.exp(-(w ** 2) / (4.0 * self.T)) / np.sqrt(2.0)
        sign = np.sign(w)
        out = np.empty((self.size, w.size))
        for k in range(self.size):
            vals = B[:, self.kappa[k]] * gauss
            if k % 2 == 0:  # odd extension
                vals = vals * sign
            out[k] = vals
        return out


def gram_error(mu: float, T: float, order: int, n_quad_panels: int = 60) -> float:
    """Max deviation of a half-range polynomial Gram matrix from identity.

    Uses composite Gauss-Legendre panels (independent of the Gauss rules built
    from the same table) to integrate ``B_a B_b exp(-(w - mu)^2 / 2T)`` over a
    truncated half line, checking the orthonormality delivered by the
    recurrence coefficients and the evaluation routine together.
    """
    table = half_range_table(mu, T, order + 2)
    # The integrand B_n^2 w extends to roughly sqrt(2 T (2n+1)); pad well past
    # that so the truncated half line carries the full mass to double precision.
    cap = abs(mu) + np.sqrt(T) * (np.sqrt(2.0 * (2.0 * order + 1.0)) + 8.0) + 1.0
    edges = np.linspace(0.0, cap, max(n_quad_panels, 3 * order) + 1)
    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(24)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + half[:, None] * gl_nodes[None, :]).ravel()
    weights = (half[:, None] * gl_weights[None, :]).ravel()
    B = evaluate_ortho(table, nodes, order)
    wts = weights * np.exp(-((nodes - mu) ** 2) / (2.0 * T))
    gram = B.T @ (wts[:, None] * B)
    return float(np.max(np.abs(gram - np.eye(order + 1))))


def christoffel_darboux_residual(mu: float, T: float, n: int,
                                 x: np.ndarray | None = None) -> float:
    """Residual of the confluent Christoffel-Darboux identity at order ``n``.

    ``sum_{k<=n} B_k(x)^2 = sqrt(beta_{n+1}) [B'_{n+1} B_n - B'_n B_{n+1}](x)``
    holds exactly for orthonormal polynomials; the residual measures the
    consistency of the recurrence coefficients and both evaluation routines.
    """
    table = half_range_table(mu, T, n + 2)
    if x is None:
        x = np.linspace(0.0, 3.0 * np.sqrt(T) + abs(mu), 25)
    B = evaluate_ortho(table, x, n + 1)
    dB = evaluate_ortho_derivative(table, x, n + 1)
    lhs = np.sum(B[:, : n + 1] ** 2, axis=1)
    rhs = np.sqrt(table.beta[n + 1]) * (dB[:, n + 1] * B[:, n] - dB[:, n] * B[:, n + 1])
    scale = np.maximum(1.0, np.abs(lhs))
    return float(np.max(np.abs(lhs - rhs) / scale))
