"""Windowed error metrics and convergence-rate estimation.

Field comparisons use a weighted L2 norm over the interior window
``[0.1, 0.9]``, which keeps boundary and interface layers out of the
measured error.  Point-valued fields get trapezoid weights (half weight on
window boundaries that lie on the grid); cell-averaged fields get their
cell width for every center inside the window.  Reference fields living on
a finer cell mesh are compared by nearest-cell sampling at the coarse
evaluation points.
"""

from __future__ import annotations

import numpy as np

from .phase import CellMesh, PointGrid

__all__ = [
    "WINDOW",
    "cell_window_weights",
    "combined_distance",
    "convergence_slope",
    "point_window_weights",
    "sample_nearest",
    "weighted_l2",
]

WINDOW = (0.1, 0.9)

_ALIGN_TOL = 1e-9


def point_window_weights(grid: PointGrid, window=WINDOW) -> np.ndarray:
    """Trapezoid quadrature weights restricted to the window.

    Points strictly inside get weight ``h``; points sitting on a window
    boundary get ``h / 2``; points outside get zero.  When both boundaries
    lie on the grid the weights cover the window measure exactly.
    """
    lo, hi = window
    x = grid.points
    h = grid.h
    weights = np.zeros_like(x)
    on_edge = (np.abs(x - lo) <= _ALIGN_TOL) | (np.abs(x - hi) <= _ALIGN_TOL)
    interior = (x > lo + _ALIGN_TOL) & (x < hi - _ALIGN_TOL)
    weights[interior] = h
    weights[on_edge] = 0.5 * h
    return weights


def cell_window_weights(mesh: CellMesh, window=WINDOW) -> np.ndarray:
    """Cell-width weights for every cell center inside the window."""
    lo, hi = window
    centers = mesh.centers
    weights = np.zeros_like(centers)
    inside = (centers > lo) & (centers < hi)
    weights[inside] = mesh.h
    return weights


def weighted_l2(values: np.ndarray, weights: np.ndarray) -> float:
    """Weighted L2 norm ``sqrt(sum w * values^2)``."""
    values = np.asarray(values, dtype=float)
    return float(np.sqrt(np.sum(weights * values * values)))


def sample_nearest(x_eval: np.ndarray, mesh: CellMesh,
                   values: np.ndarray) -> np.ndarray:
    """Sample a cell-centered field at arbitrary points.

    Each point takes the value of the cell containing it (ties at cell
    edges go to the right-hand cell); points outside the mesh clamp to the
    first or last cell.
    """
    x_eval = np.asarray(x_eval, dtype=float)
    idx = np.floor((x_eval - mesh.x_left) / mesh.h).astype(int)
    idx = np.clip(idx, 0, mesh.n_cells - 1)
    return np.asarray(values, dtype=float)[idx]


def combined_distance(*parts: float) -> float:
    """Root-sum-square of subdomain distances."""
    return float(np.sqrt(sum(float(p) ** 2 for p in parts)))


def convergence_slope(eps_values, distances) -> float:
    """Least-squares slope of ``log(distance)`` against ``log(eps)``."""
    eps_values = np.asarray(eps_values, dtype=float)
    distances = np.asarray(distances, dtype=float)
    if eps_values.size < 2:
        raise ValueError("need at least two points for a slope")
    if np.any(distances <= 0.0) or np.any(eps_values <= 0.0):
        raise ValueError("slopes need positive distances and eps values")
    return float(np.polyfit(np.log(eps_values), np.log(distances), 1)[0])
