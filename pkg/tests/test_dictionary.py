import numpy as np
import pytest

from bsdict.dictionary import (
    AtomClass,
    build_dictionary,
    certify_span_equality,
    compute_scaling_system,
    eliminate_fine_atom,
    frame_bounds,
    union_decomposition,
)
from bsdict.errors import GridMismatchError, IncompatibleRefinementError, InvalidShiftError
from bsdict.spline import (
    Grid,
    Partition,
    SplineSpace,
    build_esep_basis,
    partition_uplus,
    sample_atoms,
)


def dictionary(m, c, d, b, b_prime, kind="esep"):
    return build_dictionary(m, Partition(c, d, b), b_prime, kind)


FINE_SPACING = 2.0**-4


def refinement_length(r):
    # [0, 1] is not a multiple of b = 3 b'
    return 1.5 if r == 3 else 1.0


# (m, b / b') with b' = 2**-4 on [0, refinement_length(r)]
REFINEMENTS = [(m, r) for m in (1, 2, 3, 4) for r in (1, 2, 3, 4)]


def refinement(m, r, kind="esep"):
    return dictionary(m, 0, refinement_length(r), r * FINE_SPACING, FINE_SPACING, kind)


@pytest.mark.parametrize(
    "m, c, d, b, b_prime, expected",
    [
        (1, 0, 4, 1, 2.0**-8, 1279),
        (1, 0, 4, 1, 1, 4),
        (4, 0, 4, 2.0**-3, 2.0**-5, 143),
        (2, 0, 2, 1, 0.5, 7),
        (3, -1, 2, 0.75, 0.25, 20),
    ],
)
def test_cardinality(m, c, d, b, b_prime, expected):
    assert dictionary(m, c, d, b, b_prime).K == expected
    assert dictionary(m, c, d, b, b_prime, "epkb").K == expected


def test_cardinality_formula():
    rng = np.random.default_rng(7)
    for _ in range(40):
        m, r = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        b_prime = 2.0 ** -int(rng.integers(1, 5))
        b = r * b_prime
        length = b * int(rng.integers(m, m + 4))
        result = dictionary(m, 0, length, b, b_prime)
        assert result.K == round((length + m * b) / b_prime) - 1
        assert np.all(np.diff(result.shifts) > 0)


def test_fine_basis_size():
    assert dictionary(1, 0, 4, 1, 2.0**-8).fine_space.dimension == 1024


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_same_spacing_gives_basis(m):
    result = dictionary(m, 0, 4, 1, 1)
    basis = build_esep_basis(SplineSpace(m, Partition(0, 4, 1)))
    assert result.atoms == basis
    grid = Grid.for_spacing(0, 4, 1)
    assert np.max(np.abs(result.sample(grid) - sample_atoms(basis, grid))) < 1e-14


def test_shifts_and_classes():
    result = dictionary(2, 0, 2, 1, 0.5)
    np.testing.assert_allclose(result.shifts, [-1.5, -1, -0.5, 0, 0.5, 1, 1.5])
    assert result.p == 1
    assert [result.atom_class(j) for j in result.indices] == (
        [AtomClass.LEFT] * 3 + [AtomClass.INNER] + [AtomClass.RIGHT] * 3
    )
    assert result.index_of(0) == 3
    with pytest.raises(InvalidShiftError):
        result.index_of(4)


def test_incompatible_refinement():
    with pytest.raises(IncompatibleRefinementError):
        dictionary(1, 0, 4, 1, 0.3)
    with pytest.raises(IncompatibleRefinementError):
        dictionary(1, 0, 4, 1, 2)


def test_grid_mismatch():
    result = dictionary(1, 0, 4, 1, 0.25)
    with pytest.raises(GridMismatchError):
        result.sample(Grid(0, 4, 0.5))
    with pytest.raises(GridMismatchError):
        result.sample(Grid(0, 2, 0.125))


def test_union_decomposition_example():
    result = dictionary(1, 0, 2, 1, 0.5)
    families = union_decomposition(result)
    assert len(families) == 2
    np.testing.assert_allclose(result.shifts[families[0].positions], [0, 1])
    np.testing.assert_allclose(result.shifts[families[1].positions], [-0.5, 0.5, 1.5])
    np.testing.assert_allclose(families[1].breakpoints, [0, 0.5, 1.5, 2])


def test_union_decomposition_basis():
    families = union_decomposition(dictionary(3, 0, 4, 1, 1))
    assert len(families) == 1
    np.testing.assert_array_equal(families[0].indices, np.arange(-2, 4))


@pytest.mark.parametrize("m, b, b_prime", [(2, 1, 0.5), (1, 1, 0.25), (3, 0.75, 0.25), (4, 0.5, 0.125)])
def test_union_decomposition_partitions_dictionary(m, b, b_prime):
    result = dictionary(m, 0, 3, b, b_prime)
    families = union_decomposition(result)
    positions = np.concatenate([family.positions for family in families])
    assert sum(len(family) for family in families) == result.K
    np.testing.assert_array_equal(np.sort(positions), np.arange(result.K))
    for family in families[1:]:
        np.testing.assert_allclose(family.breakpoints, partition_uplus(Partition(0, 3, b), family.offset))
        # each shifted family is the basis of a space of dimension m + N + 1
        assert len(family) == m + round(3 / b)


@pytest.mark.parametrize("m, r", REFINEMENTS)
def test_scaling_system(m, r):
    result = refinement(m, r)
    scal = compute_scaling_system(result)
    assert scal.max_residual < 1e-8
    for k in result.indices:
        assert abs(scal.pivot(k)) > 1e-10
    inner = [k for k in result.indices if result.atom_class(k) is AtomClass.INNER]
    for k in inner[1:]:
        np.testing.assert_allclose(scal.stencil(k), scal.stencil(inner[0]), atol=1e-10)


@pytest.mark.parametrize(
    "m, stencil",
    [
        (1, [0.5, 0.5]),
        (2, [0.25, 0.5, 0.25]),
        (3, [1 / 8, 3 / 8, 3 / 8, 1 / 8]),
        (4, [1 / 16, 4 / 16, 6 / 16, 4 / 16, 1 / 16]),
    ],
)
def test_scaling_stencil_two_scale(m, stencil):
    result = dictionary(m, 0, 2, 0.25, 0.125)
    scal = compute_scaling_system(result)
    np.testing.assert_allclose(scal.stencil(0), stencil, atol=1e-12)
    np.testing.assert_array_equal(scal.index_set(0), np.arange(0, m + 1))


def test_scaling_stencil_three_scale():
    scal = compute_scaling_system(dictionary(1, 0, 3, 0.75, 0.25))
    np.testing.assert_allclose(scal.stencil(0), [1 / 3, 1 / 3, 1 / 3], atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 4])
def test_scaling_identity_for_basis(m):
    scal = compute_scaling_system(dictionary(m, 0, 4, 1, 1))
    np.testing.assert_allclose(scal.h, np.eye(m + 3), atol=1e-12)


def test_index_sets():
    scal = compute_scaling_system(dictionary(2, 0, 2, 1, 0.5))
    # fine labels -1..3, dictionary labels -3..3
    np.testing.assert_array_equal(scal.index_set(-3), [-1])
    np.testing.assert_array_equal(scal.index_set(-1), [-1, 0, 1])
    np.testing.assert_array_equal(scal.index_set(0), [0, 1, 2])
    np.testing.assert_array_equal(scal.index_set(2), [2, 3])
    assert scal.pivot_label(-1) == 1
    assert scal.pivot_label(2) == 2


def reconstruction_error(result, scal, l, grid):
    fine = build_esep_basis(result.fine_space)[scal.fine_position(l)]
    coefficients = eliminate_fine_atom(scal, l)
    values = fine(grid.points)
    return grid.norm(result.sample(grid) @ coefficients - values) / grid.norm(values)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_elimination_reconstructs_fine_basis(m):
    result = dictionary(m, 0, 1, 2.0**-3, 2.0**-4)
    scal = compute_scaling_system(result)
    grid = result.default_grid()
    for l in scal.fine_indices:
        assert reconstruction_error(result, scal, l, grid) < 1e-8


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_elimination_terminal_case(m):
    result = dictionary(m, 0, 1, 2.0**-3, 2.0**-4)
    scal = compute_scaling_system(result)
    last = result.n_fine - 1
    coefficients = eliminate_fine_atom(scal, last)
    position = result.index_of(last)
    assert np.count_nonzero(coefficients) == 1
    assert abs(coefficients[position] - 1 / scal.coefficient(last, last)) < 1e-12


def test_elimination_alternating_coefficients():
    result = dictionary(1, 0, 1, 2.0**-3, 2.0**-4)
    scal = compute_scaling_system(result)
    coefficients = eliminate_fine_atom(scal, 0)
    positions = [result.index_of(k) for k in range(16)]
    np.testing.assert_allclose(coefficients[positions], 2 * (-1.0) ** np.arange(16), atol=1e-10)
    assert coefficients[result.index_of(-1)] == 0


@pytest.mark.parametrize("m", [1, 3])
def test_elimination_basis_case(m):
    result = dictionary(m, 0, 4, 1, 1)
    scal = compute_scaling_system(result)
    for l in scal.fine_indices:
        expected = np.zeros(result.K)
        expected[result.index_of(l)] = 1
        np.testing.assert_allclose(eliminate_fine_atom(scal, l), expected, atol=1e-12)


def test_elimination_agrees_with_least_squares():
    result = dictionary(3, 0, 1, 0.25, 0.125)
    scal = compute_scaling_system(result)
    grid = result.default_grid()
    atoms = result.sample(grid)
    for l, fine in zip(scal.fine_indices, build_esep_basis(result.fine_space)):
        values = fine(grid.points)
        weighted = grid.sqrt_weights[:, None] * atoms
        generic = np.linalg.lstsq(weighted, grid.sqrt_weights * values, rcond=None)[0]
        recursive = eliminate_fine_atom(scal, l)
        difference = atoms @ recursive - atoms @ generic
        assert grid.norm(difference) / grid.norm(values) < 1e-8


@pytest.mark.parametrize(
    "m, c, d, b, b_prime, rank",
    [(1, 0, 4, 1, 0.5, 8), (2, 0, 4, 1, 1, 5), (4, 0, 1, 0.25, 0.125, 11)],
)
def test_certify_examples(m, c, d, b, b_prime, rank):
    report = certify_span_equality(dictionary(m, c, d, b, b_prime))
    assert report.passed
    assert report.rank == report.expected_dim == rank


@pytest.mark.parametrize("m, r", REFINEMENTS)
def test_certify_refinements(m, r):
    report = certify_span_equality(refinement(m, r))
    assert report.passed
    assert report.epkb_pass
    assert report.max_residual_fine_in_dict < 1e-6
    assert report.max_residual_dict_in_fine < 1e-6
    assert report.rank == m + round(refinement_length(r) / FINE_SPACING) - 1
    assert 0 < report.A <= report.B


@pytest.mark.parametrize("m, r", [(1, 2), (2, 3), (4, 2), (3, 4)])
def test_certify_epkb_dictionary(m, r):
    report = certify_span_equality(refinement(m, r, "epkb"), basis_kind="epkb")
    assert report.passed
    assert report.rank == m + round(refinement_length(r) / FINE_SPACING) - 1


def test_certify_reports_failure():
    result = dictionary(2, 0, 2, 1, 0.5)
    finer = SplineSpace(2, Partition(0, 2, 0.25))
    report = certify_span_equality(result, finer, Grid.for_spacing(0, 2, 0.25))
    assert not report.passed
    assert report.rank == 5 < report.expected_dim == 9


def test_certification_report_text(tmp_path):
    report = certify_span_equality(dictionary(1, 0, 4, 1, 0.5))
    path = report.write(tmp_path / "certification.txt")
    lines = path.read_text().splitlines()
    keys = [line.split(": ")[0] for line in lines]
    assert keys == [
        "m", "b", "b_prime", "K", "rank", "expected_dim", "max_residual_fine_in_dict",
        "max_residual_dict_in_fine", "A", "B", "pass", "epkb_pass",
    ]
    assert "pass: true" in lines
    assert "K: 9" in lines


def test_frame_bounds_basis():
    h = 1 / 16
    bounds = frame_bounds(dictionary(1, 0, 4, 1, 1))
    assert bounds.A == pytest.approx(1 - h / 2, rel=1e-12)
    assert bounds.B == pytest.approx(1 + h / 2, rel=1e-12)
    assert bounds.violations == 0


def test_frame_bounds_against_gram_eigenvalues():
    result = dictionary(1, 0, 2, 1, 0.5)
    bounds = frame_bounds(result)
    grid = result.default_grid()
    weighted = grid.sqrt_weights[:, None] * result.sample(grid)
    eigenvalues = np.linalg.eigvalsh(weighted.T @ weighted)
    nonzero = eigenvalues[eigenvalues > 1e-8 * eigenvalues.max()]
    assert 0 < bounds.A <= bounds.B
    assert bounds.A == pytest.approx(nonzero.min(), rel=1e-8)
    assert bounds.B == pytest.approx(nonzero.max(), rel=1e-10)
    assert bounds.n_checks == 100
    assert bounds.violations == 0


@pytest.mark.parametrize("m, r", [(m, r) for m in (1, 4) for r in (1, 2, 3, 4)])
def test_frame_inequality(m, r):
    bounds = frame_bounds(refinement(m, r), seed=3)
    assert bounds.violations == 0
    assert bounds.condition >= 1
