"""Exception and warning types raised by qdeform."""

from __future__ import annotations


class QDeformError(Exception):
    """Base class for all library errors."""


class DomainError(QDeformError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConvergenceError(QDeformError, ArithmeticError):
    """A series or product failed to meet its tail bound."""


class TruncationError(ConvergenceError):
    """A truncated state vector cannot be certified (tail bound too large)."""


class RestrictionError(QDeformError, ValueError):
    """A closed form was requested off its validity restriction."""


class UnknownPreset(QDeformError, KeyError):
    """No deformation preset with the given name."""


class ConvergenceWarning(UserWarning):
    """A truncated lattice sum may not have reached its tolerance."""
