"""Kinetic-fluid solvers with spectrally accurate Knudsen-layer boundary handling.

The package couples one-dimensional BGK dynamics to its small-Knudsen-number
fluid limits (linear acoustics and compressible Euler flow) by solving
half-space kinetic layer problems at walls and at kinetic/fluid interfaces.
"""

from __future__ import annotations

__version__ = "0.1.0"

__all__ = ["__version__"]
