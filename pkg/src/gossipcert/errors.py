"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes (structural/config -> 4, capacity -> 3)
and the HTTP service maps them onto status codes.
"""


class GossipcertError(Exception):
    """Base class for all package errors."""


class StructuralError(GossipcertError):
    """Malformed input: dimension mismatch, invalid weights, bad model spec."""


class PreconditionError(GossipcertError):
    """An operation was called on inputs violating its stated precondition."""


class CapacityError(GossipcertError):
    """The exact-enumeration support exceeds the allowed budget."""

    def __init__(self, message: str, support_size: int | None = None):
        super().__init__(message)
        self.support_size = support_size


class NumericError(GossipcertError):
    """Numerical failure: non-finite input, eigensolver non-convergence."""


class ConfigError(GossipcertError):
    """Invalid experiment or CLI configuration."""
