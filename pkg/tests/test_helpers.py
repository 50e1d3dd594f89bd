import numpy as np
import pytest

from bsdict.errors import IncompatibleRefinementError, IncompatibleSpacingError, InvalidOrderError
from bsdict.helpers import as_order, format_number, integer_ratio, raise_for_type, write_table_csv


def test_integer_ratio():
    assert integer_ratio(4, 0.25) == 16
    assert integer_ratio(1, 2.0**-8) == 256
    assert integer_ratio(0.3, 0.1) == 3


@pytest.mark.parametrize("numerator, denominator", [(1, 0.3), (1, 0), (1, -0.5)])
def test_integer_ratio_rejects(numerator, denominator):
    with pytest.raises(IncompatibleSpacingError):
        integer_ratio(numerator, denominator)


def test_integer_ratio_error_type():
    with pytest.raises(IncompatibleRefinementError):
        integer_ratio(1, 0.3, "b / b'", IncompatibleRefinementError)


def test_as_order():
    assert as_order(1) == 1
    assert as_order(np.int64(4)) == 4
    assert type(as_order(np.int64(4))) is int


@pytest.mark.parametrize("m", [0, -1, 2.0, True, "3"])
def test_as_order_rejects(m):
    with pytest.raises(InvalidOrderError):
        as_order(m)


def test_format_number():
    assert format_number(3) == "3"
    assert format_number(np.int64(7)) == "7"
    assert format_number(0.1) == "0.10000000000000001"
    assert float(format_number(1 / 3)) == 1 / 3
    assert format_number(True) == "true"
    assert format_number(np.bool_(False)) == "false"


def test_raise_for_type():
    raise_for_type(1.0, float, "not raised")
    with pytest.raises(TypeError, match="wrong"):
        raise_for_type("1", (int, float), "wrong")
    with pytest.raises(ValueError):
        raise_for_type("1", int, "wrong", ValueError)


def test_write_table_csv(tmp_path):
    table = np.column_stack((np.linspace(0, 1, 7), np.random.default_rng(0).standard_normal(7)))
    path = write_table_csv(tmp_path / "table.csv", ["x", "y"], table)
    content = path.read_bytes()
    assert content.startswith(b"x,y\n")
    assert b"\r" not in content
    np.testing.assert_array_equal(np.loadtxt(path, delimiter=",", skiprows=1), table)


def test_write_table_csv_header_mismatch(tmp_path):
    with pytest.raises(ValueError):
        write_table_csv(tmp_path / "table.csv", ["x"], np.zeros((3, 2)))
