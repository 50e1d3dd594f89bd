"""
Exceptions raised by the package.

All of them derive from `BsdictError`, which itself is a `ValueError`,
so that callers handling invalid numerical input the usual way keep working.
"""

__all__ = (
    "BsdictError",
    "InvalidOrderError",
    "DegenerateKnotError",
    "IncompatibleSpacingError",
    "InvalidShiftError",
    "IncompatibleRefinementError",
    "SingularPivotError",
    "RankDeficiencyError",
    "StagnationError",
    "GridMismatchError",
    "SignalError",
    "ConfigError",
)


class BsdictError(ValueError):
    """
    Base class of all errors raised by bsdict.
    """


class InvalidOrderError(BsdictError):
    """
    The spline order is not a positive integer.
    """


class DegenerateKnotError(BsdictError):
    """
    A knot window collapses to a single point, or is not non-decreasing.
    """


class IncompatibleSpacingError(BsdictError):
    """
    An interval length is not an integer multiple of the requested spacing.
    """


class InvalidShiftError(BsdictError):
    """
    A shift is outside the range allowed by the operation.
    """


class IncompatibleRefinementError(BsdictError):
    """
    The coarse spacing is not an integer multiple of the fine spacing.
    """


class SingularPivotError(BsdictError):
    """
    A diagonal scaling coefficient vanished, so the elimination cannot proceed.
    """


class RankDeficiencyError(BsdictError):
    """
    A set of atoms spans a space of smaller dimension than expected.
    """


class GridMismatchError(BsdictError):
    """
    Two sampled objects do not live on the same working grid.
    """


class SignalError(BsdictError):
    """
    A test signal cannot be generated or loaded with the given parameters.
    """


class ConfigError(BsdictError):
    """
    A run configuration violates the preconditions of the requested command.
    """


class StagnationError(BsdictError):
    """
    Pursuit found no admissible atom before reaching the target error.

    Parameters
    ----------
    msg : str
        Error message.
    state : pursuit.PursuitState
        The state reached before stagnation; it is a valid, if incomplete, approximation.
    """

    def __init__(self, msg: str, state=None):
        super().__init__(msg)
        self.state = state
