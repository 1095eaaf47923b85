"""
Error hierarchy shared by the library, the management commands and the API.
Commands map these to exit codes, views map them to HTTP statuses.
"""


class SubGaussianError(Exception):
    """Base class for every error raised by this project."""


class DomainError(SubGaussianError, ValueError):
    """Parameters outside the domain of a formula (NaN, empty interval, ...)."""


class NotSubGaussianError(DomainError):
    """The distribution has no finite variance proxy."""


class EvaluationError(SubGaussianError, ArithmeticError):
    """A numerical evaluation produced a non-finite value or did not converge."""

    def __init__(self, message, theta=None):
        super().__init__(message)
        self.theta = theta


class BracketError(SubGaussianError):
    """Bisection seeds do not bracket the optimal proxy."""


class UsageError(SubGaussianError, ValueError):
    """Unparseable value or unknown name supplied by the caller."""
