"""Exception types shared across the solver library."""

from __future__ import annotations

__all__ = [
    "KnudsenError",
    "CFLViolation",
    "ConfigError",
    "RecurrenceBreakdown",
    "ModeCountError",
    "SingularRecoveryMatrix",
    "NonPhysicalState",
]


class KnudsenError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(KnudsenError):
    """Raised when a run configuration is malformed or inconsistent."""


class RecurrenceBreakdown(KnudsenError):
    """Raised when an orthogonal-polynomial recurrence loses positivity.

    The three-term recurrence for half-line Gaussian weights is run in
    extended precision; a non-positive computed beta coefficient means the
    requested order is beyond what the arithmetic can support.
    """


class ModeCountError(KnudsenError):
    """Raised when the half-space eigenvalue census is not the expected one.

    A Galerkin discretization with ``2N + 1`` basis functions must produce
    exactly ``N`` decaying modes after damping; any other count indicates a
    broken discretization and invalidates the boundary solve.
    """


class SingularRecoveryMatrix(KnudsenError):
    """Raised when the end-state recovery system cannot be solved."""


class NonPhysicalState(KnudsenError):
    """Raised when a macroscopic state has non-positive density or temperature."""


class CFLViolation(KnudsenError):
    """Raised when an explicit step would exceed its stability limit."""
