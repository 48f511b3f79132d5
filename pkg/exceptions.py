"""
Exception types for the qubit channel roof toolkit.
Every error raised by the library derives from ChannelRoofError.
"""
from typing import Optional, Sequence


class ChannelRoofError(ValueError):
    """Base class for all library errors."""


class DomainError(ChannelRoofError):
    """A scalar argument lies outside the domain of a function."""


class InvariantViolation(ChannelRoofError):
    """A value failed one of its type invariants."""

    def __init__(self, invariant: str, message: str, value: Optional[float] = None):
        self.invariant = invariant
        self.value = value
        super().__init__(f"{invariant}: {message}")


class NormalizationError(InvariantViolation):
    """Kraus coefficients do not satisfy the trace-preserving normalization."""


class PreconditionError(ChannelRoofError):
    """An operation was called outside its precondition."""


class SpanTooLarge(ChannelRoofError):
    """The Kraus span has dimension larger than two, so no anti-linear θ exists."""

    def __init__(self, span_dim: int, singular_values: Sequence[float] = ()):
        self.span_dim = span_dim
        self.singular_values = tuple(float(s) for s in singular_values)
        super().__init__(
            f"Kraus span has dimension {span_dim} > 2; "
            f"no Hermitian anti-linear operator represents det T(pi)"
        )


class ConfigError(ChannelRoofError):
    """Configuration validation failed."""


class UsageError(ChannelRoofError):
    """Command-line usage error."""


class NumericalInvariantError(ChannelRoofError):
    """A numerical cross-check failed, e.g. an oracle beat a closed form."""


class ChannelValidationError(ChannelRoofError):
    """A channel failed its CPTP check."""

    def __init__(self, deviation: float, tol: float):
        self.deviation = deviation
        self.tol = tol
        super().__init__(f"channel is not trace preserving (deviation {deviation:.3e} > {tol:.1e})")
