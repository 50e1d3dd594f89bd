from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from bsdict.errors import (
    DegenerateKnotError,
    IncompatibleSpacingError,
    InvalidOrderError,
    InvalidShiftError,
)
from bsdict.spline import (
    Atom,
    BasisKind,
    Grid,
    Partition,
    SplineSpace,
    Variant,
    build_basis,
    build_epkb_basis,
    build_esep_basis,
    eval_bspline_knots,
    eval_cardinal_bspline,
    extended_partition,
    make_partition,
    partition_uplus,
    sample_atoms,
)


def exact_cardinal_bspline(m, x):
    """Truncated-power sum in rational arithmetic."""
    x = Fraction(x)
    total = Fraction(0)
    for i in range(m + 1):
        u = x - i
        if m == 1:
            power = Fraction(1) if u >= 0 else Fraction(0)
        else:
            power = u ** (m - 1) if u > 0 else Fraction(0)
        total += (-1) ** i * comb(m, i) * power
    return total / factorial(m - 1)


def space(m, c, d, b):
    return SplineSpace(m, Partition(c, d, b))


@pytest.mark.parametrize(
    "m, x, expected",
    [
        (1, 0.5, 1.0),
        (1, 0.0, 1.0),
        (1, 1.0, 0.0),
        (2, 1.0, 1.0),
        (2, 0.5, 0.5),
        (3, 1.5, 0.75),
        (4, 2.0, 2 / 3),
        (4, -1.0, 0.0),
        (4, 4.0, 0.0),
    ],
)
def test_eval_cardinal_bspline_values(m, x, expected):
    assert eval_cardinal_bspline(m, x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "m, x, expected",
    [
        (1, "1/2", 1),
        (2, "1", 1),
        (3, "3/2", "3/4"),
        (4, "2", "2/3"),
        (4, "1", "1/6"),
        (4, "4", 0),
    ],
)
def test_exact_cardinal_bspline_oracle(m, x, expected):
    assert exact_cardinal_bspline(m, Fraction(x)) == Fraction(expected)


@pytest.mark.parametrize("m", range(1, 9))
def test_eval_cardinal_bspline_against_exact_sum(m):
    x = np.random.default_rng(m).uniform(-1, m + 1, 1000)
    values = eval_cardinal_bspline(m, x)
    exact = np.array([float(exact_cardinal_bspline(m, xi)) for xi in x])
    assert np.max(np.abs(values - exact)) < 1e-12 * m


@pytest.mark.parametrize("m", [9, 12])
def test_eval_cardinal_bspline_high_order(m):
    x = np.linspace(-1, m + 1, 301)
    values = eval_cardinal_bspline(m, x)
    # integer translates sum to one
    total = sum(eval_cardinal_bspline(m, x[150] - k) for k in range(-m, m + 2))
    assert total == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(values, values[::-1], atol=1e-12)
    assert np.all(values >= 0)


@pytest.mark.parametrize("m", [9, 10, 12])
def test_eval_cardinal_bspline_high_order_scalar(m):
    value = eval_cardinal_bspline(m, m / 2)
    assert isinstance(value, float)
    assert eval_cardinal_bspline(m, m) == 0.0
    # compared against the rational truncated-power sum
    exact = float(exact_cardinal_bspline(m, Fraction(m, 2)))
    assert value == pytest.approx(exact, rel=1e-10)


def test_eval_cardinal_bspline_continuous_in_order():
    x = np.linspace(0, 8, 161)
    closed = eval_cardinal_bspline(8, x)
    knots = eval_bspline_knots(np.arange(9.0), x)
    np.testing.assert_allclose(closed, knots, atol=1e-12)


def test_eval_cardinal_bspline_invalid_order():
    with pytest.raises(InvalidOrderError):
        eval_cardinal_bspline(0, 0.5)


def test_eval_bspline_knots_values():
    assert eval_bspline_knots([0, 1, 2], 1.0) == pytest.approx(1.0)
    assert eval_bspline_knots([0, 0.5, 1, 1.5, 2], 1.0) == pytest.approx(4 / 3)


def test_eval_bspline_knots_multiple_knots():
    # order 4 with a quadruple knot at 0: 4 (1 - x)^3 on [0, 1)
    assert eval_bspline_knots([0, 0, 0, 0, 1], 0.0) == pytest.approx(4.0)
    x = np.linspace(0, 1, 11)[:-1]
    np.testing.assert_allclose(eval_bspline_knots([0, 0, 0, 0, 1], x), 4 * (1 - x) ** 3)
    assert eval_bspline_knots([0, 0, 0, 0, 1], 1e-9) == pytest.approx(4.0, rel=1e-8)


@pytest.mark.parametrize("m, b, y", [(1, 0.5, 0.25), (2, 1.0, -1.0), (3, 0.25, 0.5), (4, 0.125, 0.0)])
def test_eval_bspline_knots_rescaling_identity(m, b, y):
    knots = y + b * np.arange(m + 1)
    x = np.linspace(y - b, y + (m + 1) * b, 401)
    expected = eval_cardinal_bspline(m, (x - y) / b) / b
    np.testing.assert_allclose(eval_bspline_knots(knots, x), expected, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("knots", [[1, 1, 1], [0, 2, 1], [3]])
def test_eval_bspline_knots_degenerate(knots):
    with pytest.raises(DegenerateKnotError):
        eval_bspline_knots(knots, 0.5)


@pytest.mark.parametrize(
    "closure, expected",
    [
        ("closed", [0, 1, 2, 3, 4]),
        ("open", [1, 2, 3]),
        ("left-open", [1, 2, 3, 4]),
        ("right-open", [0, 1, 2, 3]),
    ],
)
def test_make_partition(closure, expected):
    partition = make_partition(0, 4, 1, closure)
    np.testing.assert_array_equal(partition.knots, expected)
    assert partition.n_interior == 3


def test_make_partition_incompatible():
    with pytest.raises(IncompatibleSpacingError):
        make_partition(0, 1, 0.3, "closed")


def test_partition_end_points_exact():
    partition = make_partition(0.1, 0.7, 0.1)
    assert partition.knots[0] == 0.1
    assert partition.knots[-1] == 0.7
    assert np.all(np.diff(partition.knots) > 0)


def test_partition_uplus():
    np.testing.assert_allclose(partition_uplus(make_partition(0, 2, 1), 0.5), [0, 0.5, 1.5, 2])
    np.testing.assert_allclose(
        partition_uplus(make_partition(0, 4, 1), 0.25), [0, 0.25, 1.25, 2.25, 3.25, 4]
    )


@pytest.mark.parametrize("r", [0, 1.0, -0.5, 1.5])
def test_partition_uplus_invalid_shift(r):
    with pytest.raises(InvalidShiftError):
        partition_uplus(make_partition(0, 2, 1), r)


def test_spline_space():
    assert space(4, 0, 4, 1).dimension == 7
    assert space(1, 0, 4, 2.0**-8).dimension == 1024
    with pytest.raises(IncompatibleSpacingError):
        space(4, 0, 2, 1)


@pytest.mark.parametrize("m", [1, 2, 4])
def test_extended_partition(m):
    s = space(m, 0, 4, 1)
    esep = extended_partition(s, "esep")
    epkb = extended_partition(s, BasisKind.EPKB)
    assert esep.knots.size == epkb.knots.size == 2 * m + s.n_interior
    np.testing.assert_array_equal(esep.knots, np.arange(-m + 1, 4 + m))
    np.testing.assert_array_equal(epkb.knots[:m], 0)
    np.testing.assert_array_equal(epkb.knots[-m:], 4)
    np.testing.assert_array_equal(esep.knots[m:-m], epkb.knots[m:-m])
    assert len(esep.windows(m)) == s.dimension


def test_esep_basis_order_one():
    atoms = build_esep_basis(space(1, 0, 4, 1))
    assert len(atoms) == 4
    assert all(atom.variant is Variant.INNER for atom in atoms)
    assert [atom.support for atom in atoms] == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert atoms[0](1.0) == 0.0
    assert atoms[1](1.0) == 1.0
    assert atoms[3](4.0) == 1.0


def test_esep_basis_order_four():
    atoms = build_esep_basis(space(4, 0, 4, 1))
    assert len(atoms) == 7
    assert [atom.shift for atom in atoms] == [-3, -2, -1, 0, 1, 2, 3]
    assert [atom.variant for atom in atoms] == [Variant.LEFT] * 3 + [Variant.INNER] + [Variant.RIGHT] * 3


def test_esep_basis_order_two():
    atoms = build_esep_basis(space(2, 0, 2, 1))
    assert [atom.shift for atom in atoms] == [-1, 0, 1]
    # the hat centred at d takes its value 1/b at d
    assert atoms[-1](2.0) == pytest.approx(1.0)
    assert atoms[0](0.0) == pytest.approx(1.0)


def test_epkb_basis_order_one_equals_esep():
    s = space(1, 0, 4, 1)
    grid = Grid.for_spacing(0, 4, 1)
    np.testing.assert_array_equal(
        sample_atoms(build_epkb_basis(s), grid), sample_atoms(build_esep_basis(s), grid)
    )


def test_epkb_basis_order_four():
    atoms = build_epkb_basis(space(4, 0, 4, 1))
    assert len(atoms) == 7
    assert atoms[0].knots == (0, 0, 0, 0, 1)
    assert atoms[0](0.0) > 0
    assert atoms[-1](4.0) > 0
    assert atoms[3].variant is Variant.INNER


def test_epkb_inner_atoms_match_esep():
    s = space(2, 0, 2, 1)
    grid = Grid.for_spacing(0, 2, 1, 64)
    epkb, esep = build_epkb_basis(s), build_esep_basis(s)
    np.testing.assert_allclose(epkb[1](grid.points), esep[1](grid.points), atol=1e-14)
    s = space(4, 0, 8, 1)
    grid = Grid.for_spacing(0, 8, 1, 8)
    epkb, esep = build_epkb_basis(s), build_esep_basis(s)
    for i in range(len(epkb)):
        if epkb[i].variant is Variant.INNER:
            np.testing.assert_allclose(epkb[i](grid.points), esep[i](grid.points), atol=1e-13)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("b", [1.0, 0.5])
def test_partition_of_unity(m, b):
    s = space(m, 0, 6, b)
    grid = Grid.for_spacing(0, 6, b)
    total = b * sample_atoms(build_esep_basis(s), grid).sum(axis=1)
    np.testing.assert_allclose(total, 1.0, atol=1e-10)


@pytest.mark.parametrize("kind", ["esep", "epkb"])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_support_and_positivity(kind, m):
    s = space(m, 0, 5, 1)
    for atom in build_basis(s, kind):
        lower, upper = atom.support
        inside = np.linspace(lower, upper, 23)[1:-1]
        assert np.all(atom(inside) > 0)
        assert atom(lower - 0.5) == 0.0
        assert atom(upper + 0.5) == 0.0
        if upper < 5:
            assert atom(upper) == 0.0


@pytest.mark.parametrize("kind", ["esep", "epkb"])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_dimension_and_full_rank(kind, m):
    s = space(m, 0, 6, 1)
    atoms = build_basis(s, kind)
    grid = Grid.for_spacing(0, 6, 1)
    weighted = grid.sqrt_weights[:, None] * sample_atoms(atoms, grid)
    assert len(atoms) == s.dimension == m + 5
    assert np.linalg.matrix_rank(weighted) == m + 5


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_nesting(m):
    coarse = build_esep_basis(space(m, 0, 4, 0.5))
    fine = build_esep_basis(space(m, 0, 4, 0.25))
    grid = Grid.for_spacing(0, 4, 0.25)
    fine_values = sample_atoms(fine, grid)
    for atom in coarse:
        values = atom(grid.points)
        coefficients = np.linalg.lstsq(fine_values, values, rcond=None)[0]
        residual = values - fine_values @ coefficients
        assert grid.norm(residual) / grid.norm(values) < 1e-8


@pytest.mark.parametrize("m", [2, 3, 4])
def test_smoothness(m):
    atom = build_esep_basis(space(m, 0, 8, 1))[m]

    def jump(q):
        grid = Grid.for_spacing(0, 8, 1, q)
        derivative = np.diff(atom(grid.points), n=m - 2) / grid.h ** (m - 2)
        return np.max(np.abs(np.diff(derivative)))

    ratio = jump(32) / jump(64)
    assert 1.5 < ratio < 2.5


def test_atom_outside_domain():
    atom = Atom(2, -1.0, 1.0, (0.0, 2.0), Variant.LEFT)
    assert atom(-0.5) == 0.0
    assert atom(0.0) == pytest.approx(1.0)
    assert atom.support == (0.0, 1.0)
    assert atom(np.array([[0.0, 0.5]])).shape == (1, 2)


def test_atom_wrong_knot_count():
    with pytest.raises(DegenerateKnotError):
        Atom(2, 0.0, 1.0, (0.0, 2.0), knots=(0.0, 1.0))


def test_grid():
    grid = Grid.for_spacing(0, 4, 1, 16)
    assert grid.h == 1 / 16
    assert grid.n_points == 65
    assert grid.points[-1] == 4.0
    assert grid.weights.sum() == pytest.approx(4.0)
    assert grid.norm(np.ones(65)) == pytest.approx(2.0)
    assert grid.inner(grid.points, np.ones(65)) == pytest.approx(8.0)
    assert grid.is_compatible(0.5)
    assert not grid.is_compatible(0.3)
    with pytest.raises(ValueError):
        grid.points[0] = 1.0
    with pytest.raises(IncompatibleSpacingError):
        Grid(0, 1, 0.3)
