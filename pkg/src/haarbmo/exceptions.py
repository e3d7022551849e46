"""
Exception hierarchy for the haarbmo package.
"""
from typing import Optional


class HaarBMOError(Exception):
    """Base class for all errors raised by haarbmo."""
    pass


class IntervalError(HaarBMOError, ValueError):
    """
    Used to indicate an invalid dyadic interval, or an interval that does not
    fit the universe it is used in.
    """
    pass


class RearrangementError(HaarBMOError, ValueError):
    """Used to indicate a candidate map that is not a valid rearrangement."""
    pass


class DomainError(RearrangementError):
    """Used when an interval is outside the domain of a rearrangement."""
    pass


class ParameterError(HaarBMOError, ValueError):
    """Used to indicate a wrong parameter value, for example A < 1."""
    pass


class RationalizationError(ParameterError):
    """A squared coefficient does not lie on the 1/K grid."""

    def __init__(self, message: str, interval: Optional[object] = None):
        super().__init__(message)
        self.interval = interval


class OracleLimitError(ParameterError):
    """An exhaustive oracle was asked to enumerate a domain beyond its cap."""
    pass


class HypothesisError(HaarBMOError):
    """
    A hypothesis of the union bound does not hold.

    Carries the generation index and the interval at which the check failed.
    """

    def __init__(self, message: str, generation: int, interval: Optional[object] = None):
        super().__init__(message)
        self.generation = generation
        self.interval = interval


class DecompositionError(HaarBMOError):
    """A postcondition that the construction guarantees did not hold."""
    pass


class FormatError(HaarBMOError, ValueError):
    """Malformed input document."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
