"""
Helper functions used in other modules.
"""

# Standard library
from typing import Tuple, Union, Sequence, Type
from pathlib import Path

# 3rd-party
import numpy as np

# Self
from .data.defaults import tolerances
from .errors import IncompatibleSpacingError, InvalidOrderError


def integer_ratio(
    numerator: float,
    denominator: float,
    what: str = "ratio",
    error_type: Type[Exception] = IncompatibleSpacingError,
    rtol: float = tolerances["ratio"],
) -> int:
    """
    Return `numerator / denominator` as an integer, if it is one
    within a relative tolerance; otherwise raise an error.

    Parameters
    ----------
    numerator : float
    denominator : float
        Must be positive.
    what : str
        Description of the ratio, used in the error message.
    error_type : Exception (optional; default: IncompatibleSpacingError)
        Type of error to be raised when the ratio is not an integer.
    rtol : float (optional; default: 1e-12)
        Relative tolerance of the check.

    Returns
    -------
        int

    Examples
    --------
    (4, 0.25) -> 16
    (1, 0.3) -> IncompatibleSpacingError
    """
    if denominator <= 0:
        raise error_type(f"{what}: the denominator must be positive, got {denominator}.")
    ratio = numerator / denominator
    nearest = round(ratio)
    if abs(ratio - nearest) > rtol * max(abs(ratio), 1.0):
        raise error_type(f"{what}: {numerator} / {denominator} = {ratio} is not an integer.")
    return int(nearest)


def raise_for_type(
    obj: object,
    obj_type: Union[Type, Tuple[Type]],
    msg: str,
    error_type: type = TypeError,
) -> None:
    """
    Check an object's type and raise a specific error with a given message
    if the type does not match with the given expected type.

    Parameters
    ----------
    obj : Object
        The object whose type is to be checked.
    obj_type : Type
        The expected type of the object.
    msg : str
        Error message to be shown when the type does not match.
    error_type : Exception (optional; default: TypeError)
        Type of error to be raised.

    Returns
    -------
        None
    """
    if not isinstance(obj, obj_type):
        raise error_type(msg)
    return


def as_order(m: object) -> int:
    """
    Validate a spline order and return it as a Python int.
    """
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise InvalidOrderError(f"Spline order must be an integer, got {m!r}.")
    if m < 1:
        raise InvalidOrderError(f"Spline order must be at least 1, got {m}.")
    return int(m)


def read_only(array: Union[Sequence, np.ndarray], dtype=float) -> np.ndarray:
    """
    Return a read-only copy of an array, so that frozen objects holding it stay immutable.
    """
    copy = np.array(array, dtype=dtype)
    copy.setflags(write=False)
    return copy


def format_number(value: Union[int, float, np.number]) -> str:
    """
    String representation used in all output files:
    integers as they are, floats with 17 significant digits (bit-exact round-trip).
    """
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_table_csv(path: Union[str, Path], header: Sequence[str], columns: np.ndarray) -> Path:
    """
    Write a numeric table as comma-separated values, with a header row,
    17-significant-digit floats and LF line endings.

    Parameters
    ----------
    path : Union[str, pathlib.Path]
        Output file.
    header : Sequence[str]
        Column names.
    columns : numpy.ndarray
        2-dimensional array of shape (rows, len(header)).

    Returns
    -------
        pathlib.Path
    """
    path = Path(path)
    table = np.atleast_2d(np.asarray(columns, dtype=float))
    if table.shape[1] != len(header):
        raise ValueError(f"Got {len(header)} column names for {table.shape[1]} columns.")
    np.savetxt(
        path,
        table,
        fmt="%.17g",
        delimiter=",",
        header=",".join(header),
        comments="",
        newline="\n",
    )
    return path
