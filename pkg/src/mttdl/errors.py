"""Exception hierarchy for the mttdl package.

Every domain-specific error derives from :class:`MttdlError` so callers can
catch the whole family with one handler. Plain ``ValueError`` is reserved for
invariant violations raised while constructing the frozen parameter types,
and built-in ``IndexError`` for out-of-range state or index arguments.
"""

from __future__ import annotations

__all__ = [
    "MttdlError",
    "SingularMatrixError",
    "NonzeroErrorRateError",
    "UnknownCorrectionTermError",
    "DimensionMismatchError",
    "InvalidDistributionError",
    "DomainError",
    "MalformedProfileError",
    "ErrorRateAlreadySetError",
    "RateVectorMismatchError",
    "PolicyMismatchError",
]


class MttdlError(Exception):
    """Base class for all mttdl domain errors."""


class SingularMatrixError(MttdlError):
    """The transient-state generator block could not be solved reliably."""


class NonzeroErrorRateError(MttdlError):
    """An operation that requires all direct data-loss (error) rates to be
    zero was invoked on a model with a positive error rate."""


class UnknownCorrectionTermError(MttdlError):
    """The determinant recursion needs a correction term that has no known
    closed form and was not supplied by the caller."""


class DimensionMismatchError(MttdlError):
    """Two models that must describe compatible disk groups do not."""


class InvalidDistributionError(MttdlError):
    """An initial state distribution does not match the model's state count
    or is not a probability vector."""


class DomainError(MttdlError):
    """A numeric argument lies outside the mathematical domain of the
    requested operation (for example a logarithm base of one or less)."""


class MalformedProfileError(MttdlError):
    """An erasure-code profile is missing fields or violates its invariants."""


class ErrorRateAlreadySetError(MttdlError):
    """A hard-error transformation was applied to a model that already has a
    positive direct data-loss rate."""


class RateVectorMismatchError(MttdlError):
    """A per-node rate vector does not have one entry per disk."""


class PolicyMismatchError(MttdlError):
    """An allocation computation was invoked on a scenario whose placement
    policy does not match."""
