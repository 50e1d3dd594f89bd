"""
Module containing the wide-support B-spline dictionaries D_m(Δ, b').

A dictionary holds the translates of the prototype (1/b) B(x/b) to every shift of
the fine grid P_b'(c - mb, d), restricted to [c, d]. Its span equals the spline
space with the finer spacing b'; this module computes the scaling equations that
relate dictionary atoms to the fine basis, runs the elimination recursion that
writes each fine basis function in terms of dictionary atoms, certifies the span
numerically, and computes the frame bounds of the dictionary.

Shifts are addressed by integer labels j, the shift being c + j b'.
Dictionary labels run from -m b/b' + 1 to (d - c)/b' - 1, fine basis labels
from -m + 1 to (d - c)/b' - 1.
"""

# Standard library
from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union
import logging

# 3rd-party
import numpy as np
import scipy.linalg

# Self
from .data.defaults import frame as frame_defaults, tolerances
from .errors import (
    GridMismatchError,
    IncompatibleRefinementError,
    InvalidShiftError,
    RankDeficiencyError,
    SingularPivotError,
)
from .helpers import as_order, format_number, integer_ratio, raise_for_type, read_only
from .spline import (
    Atom,
    BasisKind,
    Grid,
    Partition,
    SplineSpace,
    build_basis,
    build_esep_basis,
    cardinal_atoms,
    knot_window_atoms,
    partition_uplus,
    sample_atoms,
)


__all__ = (
    "Dictionary",
    "Family",
    "AtomClass",
    "ScalingSystem",
    "CertificationReport",
    "FrameBounds",
    "build_dictionary",
    "union_decomposition",
    "compute_scaling_system",
    "eliminate_fine_atom",
    "certify_span_equality",
    "frame_bounds",
)

logger = logging.getLogger(__name__)


class AtomClass(str, Enum):
    """
    Class of a dictionary atom in the scaling equations, fixing which fine basis
    functions may appear in its expansion.
    """

    LEFT = "left"
    INNER = "inner"
    RIGHT = "right"


@dataclass(frozen=True, eq=False)
class Dictionary:
    """
    The dictionary D_m(Δ, b') on [c, d].

    Parameters
    ----------
    m : int
        Order.
    b : float
        Coarse spacing; support of every atom is m b.
    b_prime : float
        Fine spacing of the shifts.
    domain : tuple[float, float]
        The interval [c, d].
    atoms : tuple[Atom, ...]
        Atoms ordered by increasing label.
    indices : numpy.ndarray
        Integer label j of every atom, shift c + j b'.
    kind : BasisKind
        ESEP dictionaries consist of truncated translates; EPKB dictionaries are the
        union of the EPKB bases of the spaces with partitions Δ ⊎ i b'.
    """

    m: int
    b: float
    b_prime: float
    domain: Tuple[float, float]
    atoms: Tuple[Atom, ...] = field(repr=False)
    indices: np.ndarray = field(repr=False)
    kind: BasisKind = BasisKind.ESEP

    def __post_init__(self):
        object.__setattr__(self, "indices", read_only(self.indices, dtype=int))
        if len(self.atoms) != self.indices.size:
            raise ValueError("Every atom needs exactly one label.")

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    @property
    def c(self) -> float:
        return self.domain[0]

    @property
    def d(self) -> float:
        return self.domain[1]

    @property
    def ratio(self) -> int:
        """
        The integer b / b'.
        """
        return integer_ratio(self.b, self.b_prime, "b / b'", IncompatibleRefinementError)

    @property
    def p(self) -> int:
        """
        Number of shifted copies b / b' - 1.
        """
        return self.ratio - 1

    @property
    def K(self) -> int:
        return len(self.atoms)

    @property
    def n_fine(self) -> int:
        """
        Number of fine subintervals (d - c) / b'.
        """
        return integer_ratio(self.d - self.c, self.b_prime, "interval length / b'")

    @property
    def shifts(self) -> np.ndarray:
        return read_only(self.c + self.indices * self.b_prime)

    @property
    def coarse_space(self) -> SplineSpace:
        return SplineSpace(self.m, Partition(self.c, self.d, self.b))

    @property
    def fine_space(self) -> SplineSpace:
        """
        The space S_m(Δ') spanned by the dictionary.
        """
        return SplineSpace(self.m, Partition(self.c, self.d, self.b_prime))

    @property
    def expected_dim(self) -> int:
        return self.fine_space.dimension

    def index_of(self, j: int) -> int:
        """
        Position of the atom with label j.
        """
        position = int(j) + self.m * self.ratio - 1
        if not 0 <= position < self.K or self.indices[position] != j:
            raise InvalidShiftError(f"No dictionary atom has label {j}.")
        return position

    def atom_class(self, j: int) -> AtomClass:
        if j < 0:
            return AtomClass.LEFT
        if j > self.n_fine - self.m * self.ratio:
            return AtomClass.RIGHT
        return AtomClass.INNER

    def default_grid(self, q: Optional[int] = None) -> Grid:
        return Grid.for_spacing(self.c, self.d, self.b_prime, q)

    def sample(self, grid: Grid) -> np.ndarray:
        """
        Sample all atoms on a working grid whose step divides b'.

        Returns
        -------
            numpy.ndarray
            Matrix of shape (grid.n_points, K).
        """
        _check_grid(grid, self.domain, self.b_prime)
        return sample_atoms(self.atoms, grid)


def _check_grid(grid: Grid, domain: Tuple[float, float], spacing: float) -> None:
    raise_for_type(grid, Grid, f"Expected a Grid, got {type(grid).__name__}.")
    if grid.domain != tuple(domain):
        raise GridMismatchError(f"Grid on {grid.domain} does not cover {tuple(domain)}.")
    if not grid.is_compatible(spacing):
        raise GridMismatchError(f"Grid step {grid.h} does not divide the spacing {spacing}.")


def _family_breakpoints(coarse: Partition, offset: float) -> np.ndarray:
    if offset == 0:
        return coarse.knots
    return partition_uplus(coarse, offset)


def _family_labels(m: int, ratio: int, n_fine: int, i: int) -> np.ndarray:
    # family 0 is P_b(c - mb, d), family i >= 1 is P_b[c - mb, d) + i b'
    first = 1 if i == 0 else 0
    labels = -m * ratio + i + ratio * np.arange(first, n_fine // ratio + m + 1)
    return labels[labels <= n_fine - 1]


def build_dictionary(
    m: int,
    coarse: Partition,
    b_prime: float,
    kind: Union[str, BasisKind] = BasisKind.ESEP,
) -> Dictionary:
    """
    Build the dictionary D_m(Δ, b') of atoms of support m b, shifted over the fine
    grid P_b'(c - mb, d).

    Parameters
    ----------
    m : int
        Order.
    coarse : Partition
        Equidistant partition of [c, d] with spacing b.
    b_prime : float
        Fine spacing; b / b' and (d - c) / b' must be integers.
    kind : Union[str, BasisKind] (optional; default: "esep")
        "esep" for truncated translates, "epkb" for the union of EPKB bases.

    Returns
    -------
        Dictionary
        K = (d - c + m b) / b' - 1 atoms in increasing shift order; for b' = b
        the ESEP dictionary is the ESEP basis.

    Examples
    --------
    (m=1, [0, 4], b=1, b'=2**-8) -> 1279 atoms
    (m=4, [0, 4], b=2**-3, b'=2**-5) -> 143 atoms
    """
    m = as_order(m)
    kind = BasisKind(kind)
    raise_for_type(coarse, Partition, "The coarse partition must be a Partition.")
    coarse = coarse.closed()
    if not b_prime > 0:
        raise IncompatibleRefinementError(f"b' must be positive, got {b_prime}.")
    ratio = integer_ratio(coarse.b, b_prime, "b / b'", IncompatibleRefinementError)
    if ratio < 1:
        raise IncompatibleRefinementError(f"b' = {b_prime} exceeds b = {coarse.b}.")
    # validates d - c >= m b
    SplineSpace(m, coarse)
    n_fine = integer_ratio(coarse.d - coarse.c, b_prime, "interval length / b'")
    domain = (coarse.c, coarse.d)

    if kind is BasisKind.ESEP:
        indices = np.arange(-m * ratio + 1, n_fine)
        atoms = cardinal_atoms(m, coarse.b, domain, b_prime, indices)
    else:
        labelled = []
        for i in range(ratio):
            family_atoms = knot_window_atoms(m, _family_breakpoints(coarse, i * b_prime), coarse.b)
            labels = _family_labels(m, ratio, n_fine, i)
            labelled.extend(zip(labels.tolist(), family_atoms))
        labelled.sort(key=lambda pair: pair[0])
        indices = np.array([label for label, _ in labelled], dtype=int)
        atoms = tuple(atom for _, atom in labelled)

    dictionary = Dictionary(m, coarse.b, float(b_prime), domain, tuple(atoms), indices, kind)
    logger.info(
        "%s dictionary of order %d on [%g, %g], b=%g, b'=%g: K=%d atoms",
        kind.value.upper(), m, coarse.c, coarse.d, coarse.b, b_prime, dictionary.K,
    )
    return dictionary


@dataclass(frozen=True, eq=False)
class Family:
    """
    One family of the union decomposition: atoms whose shifts form a translate of the coarse grid.

    Parameters
    ----------
    i : int
        The family shifts by i b'.
    offset : float
        i b'.
    indices : numpy.ndarray
        Labels of the family's atoms.
    positions : numpy.ndarray
        Positions of those atoms in the dictionary.
    breakpoints : numpy.ndarray
        The partition Δ ⊎ i b' (Δ itself for i = 0) whose spline space the family spans.
    """

    i: int
    offset: float
    indices: np.ndarray
    positions: np.ndarray
    breakpoints: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indices", read_only(self.indices, dtype=int))
        object.__setattr__(self, "positions", read_only(self.positions, dtype=int))
        object.__setattr__(self, "breakpoints", read_only(self.breakpoints))

    def __len__(self) -> int:
        return self.indices.size


def union_decomposition(dictionary: Dictionary) -> Tuple[Family, ...]:
    """
    Split a dictionary into the base family over P_b(c - mb, d) and the p shifted
    families P_b[c - mb, d) + i b', i = 1, ..., p.

    The families are pairwise disjoint and their union is the whole dictionary.

    Parameters
    ----------
    dictionary : Dictionary

    Returns
    -------
        tuple[Family, ...]
        p + 1 families, ordered by i.

    Examples
    --------
    (m=1, [0, 2], b=1, b'=1/2) -> shifts {0, 1} and {-1/2, 1/2, 3/2}
    """
    coarse = dictionary.coarse_space.partition
    families = []
    for i in range(dictionary.ratio):
        labels = _family_labels(dictionary.m, dictionary.ratio, dictionary.n_fine, i)
        positions = [dictionary.index_of(j) for j in labels]
        families.append(
            Family(
                i,
                i * dictionary.b_prime,
                labels,
                np.array(positions, dtype=int),
                _family_breakpoints(coarse, i * dictionary.b_prime),
            )
        )
    return tuple(families)


@dataclass(frozen=True, eq=False)
class ScalingSystem:
    """
    Coefficients h_{n,k} expressing every dictionary atom φ_k as a combination of
    fine basis functions φ'_n, n in the index set of the atom's class.

    Parameters
    ----------
    dictionary : Dictionary
    fine_indices : numpy.ndarray
        Labels of the fine basis functions, -m + 1, ..., (d - c)/b' - 1.
    h : numpy.ndarray
        Coefficient table of shape (len(fine_indices), K); rows are fine positions,
        columns dictionary positions. Entries outside the index sets are zero.
    classes : tuple[AtomClass, ...]
        Class of every dictionary atom.
    residuals : numpy.ndarray
        Relative reconstruction residual of every atom on the working grid.
    """

    dictionary: Dictionary = field(repr=False)
    fine_indices: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)
    classes: Tuple[AtomClass, ...] = field(repr=False)
    residuals: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "fine_indices", read_only(self.fine_indices, dtype=int))
        object.__setattr__(self, "h", read_only(self.h))
        object.__setattr__(self, "residuals", read_only(self.residuals))

    @property
    def m(self) -> int:
        return self.dictionary.m

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if self.residuals.size else 0.0

    def fine_position(self, n: int) -> int:
        position = int(n) + self.m - 1
        if not 0 <= position < self.fine_indices.size:
            raise InvalidShiftError(f"No fine basis function has label {n}.")
        return position

    def index_set(self, k: int) -> np.ndarray:
        """
        Labels of the fine basis functions allowed in the expansion of the atom with label k:
        J_L = [-m + 1, k + m(r - 1)], J_I = [k, k + m(r - 1)], J_R = [k, (d - c)/b' - 1].
        """
        return _index_set(self.dictionary, k)

    def coefficient(self, n: int, k: int) -> float:
        """
        h_{n,k} for the fine label n and the dictionary label k.
        """
        return float(self.h[self.fine_position(n), self.dictionary.index_of(k)])

    def stencil(self, k: int) -> np.ndarray:
        """
        Coefficients of the atom with label k over its index set.
        """
        rows = [self.fine_position(n) for n in self.index_set(k)]
        return self.h[rows, self.dictionary.index_of(k)].copy()

    def pivot_label(self, k: int) -> int:
        """
        Fine label n of the pivot h_{n,k} used by the elimination: k itself for
        k >= 0, the last index of J_L for left atoms.
        """
        if k >= 0:
            return int(k)
        return int(k) + self.m * (self.dictionary.ratio - 1)

    def pivot(self, k: int) -> float:
        return self.coefficient(self.pivot_label(k), k)


def _index_set(dictionary: Dictionary, k: int) -> np.ndarray:
    m, ratio, n_fine = dictionary.m, dictionary.ratio, dictionary.n_fine
    cls = dictionary.atom_class(k)
    if cls is AtomClass.LEFT:
        return np.arange(-m + 1, k + m * (ratio - 1) + 1)
    if cls is AtomClass.INNER:
        return np.arange(k, k + m * (ratio - 1) + 1)
    return np.arange(k, n_fine)


def compute_scaling_system(
    dictionary: Dictionary,
    fine_basis: Optional[Sequence[Atom]] = None,
    grid: Optional[Grid] = None,
) -> ScalingSystem:
    """
    Compute the scaling equations of every dictionary atom by weighted least squares
    against the fine ESEP basis, restricted to the atom's class index set and to
    the grid points in the atom's support.

    Parameters
    ----------
    dictionary : Dictionary
    fine_basis : Sequence[Atom] (optional; default: ESEP basis of the fine space)
        Fine basis ordered by label.
    grid : Grid (optional; default: h = b' / 16)
        Working grid.

    Returns
    -------
        ScalingSystem

    Raises
    ------
    SingularPivotError
        If a pivot |h| falls below 1e-10.

    Examples
    --------
    (m=1, b=2b') -> every inner atom has the stencil (1/2, 1/2)
    (m=2, b=2b') -> every inner atom has the stencil (1/4, 1/2, 1/4)
    """
    fine_space = dictionary.fine_space
    if fine_basis is None:
        fine_basis = build_esep_basis(fine_space)
    if len(fine_basis) != fine_space.dimension:
        raise RankDeficiencyError(
            f"The fine basis has {len(fine_basis)} functions, expected {fine_space.dimension}."
        )
    grid = dictionary.default_grid() if grid is None else grid
    fine = sample_atoms(fine_basis, grid)
    coarse = dictionary.sample(grid)
    x, sqrt_w = grid.points, grid.sqrt_weights
    fine_indices = np.arange(-dictionary.m + 1, dictionary.n_fine)

    h = np.zeros((fine_indices.size, dictionary.K))
    residuals = np.zeros(dictionary.K)
    classes = []
    for position, (k, atom) in enumerate(zip(dictionary.indices.tolist(), dictionary.atoms)):
        classes.append(dictionary.atom_class(k))
        columns = _index_set(dictionary, k) + dictionary.m - 1
        lower, upper = atom.support
        rows = (x >= lower) & (x <= upper)
        system = sqrt_w[rows, None] * fine[np.ix_(rows, columns)]
        rhs = sqrt_w[rows] * coarse[rows, position]
        coefficients = scipy.linalg.lstsq(system, rhs)[0]
        h[columns, position] = coefficients
        residual = coarse[:, position] - fine[:, columns] @ coefficients
        residuals[position] = grid.norm(residual) / grid.norm(coarse[:, position])

    scal = ScalingSystem(dictionary, fine_indices, h, tuple(classes), residuals)
    for k in dictionary.indices.tolist():
        if abs(scal.pivot(k)) < tolerances["pivot"]:
            raise SingularPivotError(
                f"Pivot h[{scal.pivot_label(k)}, {k}] = {scal.pivot(k):.3e} vanishes."
            )
    if scal.max_residual > tolerances["span"]:
        logger.warning(
            "Scaling equations reproduce the atoms only to %.3e relative error", scal.max_residual
        )
    logger.info("Scaling system: %d equations, max residual %.3e", dictionary.K, scal.max_residual)
    return scal


def eliminate_fine_atom(scal: ScalingSystem, l: int) -> np.ndarray:
    """
    Express the fine basis function φ'_l as a combination of dictionary atoms by
    evaluating the scaling equations recursively.

    For l >= 0 the recursion runs to the right, over k = l, l + 1, ..., (d - c)/b' - 1,
    using φ'_k = (φ_k - Σ_{n > k} h_{n,k} φ'_n) / h_{k,k}. For the left boundary
    functions, -m < l < 0, it runs to the left using the left-boundary atoms, whose
    last fine index n = k + m(r - 1) carries the pivot.

    Parameters
    ----------
    scal : ScalingSystem
    l : int
        Fine label.

    Returns
    -------
        numpy.ndarray
        Coefficients over the dictionary positions, length K.

    Examples
    --------
    (l = (d - c)/b' - 1) -> a single entry 1 / h_{l,l}
    (m=1, b=2b', l=0) -> (2, -2, 2, -2, ...)
    """
    dictionary = scal.dictionary
    pending = np.zeros(scal.fine_indices.size)
    pending[scal.fine_position(l)] = 1.0
    coefficients = np.zeros(dictionary.K)

    if l >= 0:
        steps = range(int(l), dictionary.n_fine)
    else:
        steps = range(int(l), -dictionary.m, -1)
    for n in steps:
        alpha = pending[scal.fine_position(n)]
        if alpha == 0.0:
            continue
        k = n if l >= 0 else n - dictionary.m * (dictionary.ratio - 1)
        position = dictionary.index_of(k)
        pivot = scal.h[scal.fine_position(n), position]
        if abs(pivot) < tolerances["pivot"]:
            raise SingularPivotError(f"Pivot h[{n}, {k}] = {pivot:.3e} vanishes.")
        weight = alpha / pivot
        coefficients[position] += weight
        pending -= weight * scal.h[:, position]
        logger.debug("elimination of %d: atom %d, weight %.6g", l, k, weight)
    return coefficients


def _weighted_matrix(atoms_matrix: np.ndarray, grid: Grid) -> np.ndarray:
    # Euclidean geometry of the weighted samples is the trapezoid geometry of the functions
    return grid.sqrt_weights[:, None] * atoms_matrix


def _singular_values(weighted: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    u, s, _ = scipy.linalg.svd(weighted, full_matrices=False)
    rank = int(np.sum(s > tolerances["rank"] * s[0])) if s.size and s[0] > 0 else 0
    return u, s, rank


def _max_relative_residual(basis: np.ndarray, columns: np.ndarray) -> float:
    # basis has orthonormal columns
    if columns.shape[1] == 0:
        return 0.0
    residual = columns - basis @ (basis.T @ columns)
    norms = np.linalg.norm(columns, axis=0)
    return float(np.max(np.linalg.norm(residual, axis=0) / norms))


@dataclass(frozen=True)
class CertificationReport:
    """
    Outcome of the numerical check Span D_m(Δ, b') = S_m(Δ').

    Parameters
    ----------
    m, b, b_prime : int, float, float
        Dictionary parameters.
    K : int
        Number of atoms.
    rank : int
        Numerical rank of the dictionary on the working grid.
    expected_dim : int
        m + N' = dim S_m(Δ').
    max_residual_fine_in_dict : float
        Largest relative residual of a fine basis function projected onto the dictionary span.
    max_residual_dict_in_fine : float
        Largest relative residual of an atom projected onto the fine space.
    A, B : float
        Frame bounds of the discretized frame; 0 if the dictionary is empty.
    passed : bool
        Both residuals below 1e-6 and rank = expected_dim.
    epkb_pass : bool
        The same check against the EPKB basis of S_m(Δ').
    """

    m: int
    b: float
    b_prime: float
    K: int
    rank: int
    expected_dim: int
    max_residual_fine_in_dict: float
    max_residual_dict_in_fine: float
    A: float
    B: float
    passed: bool
    epkb_pass: bool

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "b": self.b,
            "b_prime": self.b_prime,
            "K": self.K,
            "rank": self.rank,
            "expected_dim": self.expected_dim,
            "max_residual_fine_in_dict": self.max_residual_fine_in_dict,
            "max_residual_dict_in_fine": self.max_residual_dict_in_fine,
            "A": self.A,
            "B": self.B,
            "pass": self.passed,
            "epkb_pass": self.epkb_pass,
        }

    def to_text(self) -> str:
        return "".join(f"{key}: {format_number(value)}\n" for key, value in self.as_dict().items())

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        with open(path, "w", newline="\n") as file:
            file.write(self.to_text())
        return path


def _span_check(
    weighted_dict: np.ndarray, u: np.ndarray, rank: int, fine: np.ndarray, grid: Grid
) -> Tuple[float, float, bool, int]:
    weighted_fine = _weighted_matrix(fine, grid)
    fine_in_dict = _max_relative_residual(u[:, :rank], weighted_fine)
    q, _ = scipy.linalg.qr(weighted_fine, mode="economic")
    dict_in_fine = _max_relative_residual(q, weighted_dict)
    expected = fine.shape[1]
    passed = (
        fine_in_dict < tolerances["certification"]
        and dict_in_fine < tolerances["certification"]
        and rank == expected
    )
    return fine_in_dict, dict_in_fine, passed, expected


def certify_span_equality(
    dictionary: Dictionary,
    fine_space: Optional[SplineSpace] = None,
    grid: Optional[Grid] = None,
    basis_kind: Union[str, BasisKind] = BasisKind.ESEP,
) -> CertificationReport:
    """
    Certify numerically that the dictionary spans the fine spline space.

    Each fine basis function is projected onto the dictionary span and each atom onto
    the span of the fine basis, in the trapezoid inner product of the working grid;
    the numerical rank of the dictionary counts singular values above 1e-8 σ_max.
    A failing check is reported, not raised.

    Parameters
    ----------
    dictionary : Dictionary
    fine_space : SplineSpace (optional; default: dictionary.fine_space)
    grid : Grid (optional; default: h = b' / 16)
    basis_kind : Union[str, BasisKind] (optional; default: "esep")
        Fine basis deciding `passed`; `epkb_pass` always uses the EPKB basis.

    Returns
    -------
        CertificationReport
    """
    fine_space = dictionary.fine_space if fine_space is None else fine_space
    grid = dictionary.default_grid() if grid is None else grid
    weighted_dict = _weighted_matrix(dictionary.sample(grid), grid)
    u, s, rank = _singular_values(weighted_dict)

    checks = {}
    for kind in (BasisKind(basis_kind), BasisKind.EPKB):
        if kind not in checks:
            fine = sample_atoms(build_basis(fine_space, kind), grid)
            checks[kind] = _span_check(weighted_dict, u, rank, fine, grid)
    fine_in_dict, dict_in_fine, passed, expected = checks[BasisKind(basis_kind)]

    report = CertificationReport(
        m=dictionary.m,
        b=dictionary.b,
        b_prime=dictionary.b_prime,
        K=dictionary.K,
        rank=rank,
        expected_dim=expected,
        max_residual_fine_in_dict=fine_in_dict,
        max_residual_dict_in_fine=dict_in_fine,
        A=float(s[rank - 1] ** 2) if rank else 0.0,
        B=float(s[0] ** 2) if rank else 0.0,
        passed=bool(passed),
        epkb_pass=bool(checks[BasisKind.EPKB][2]),
    )
    logger.info(
        "Certification m=%d b=%g b'=%g: rank %d/%d, residuals %.2e / %.2e, %s",
        report.m, report.b, report.b_prime, report.rank, report.expected_dim,
        report.max_residual_fine_in_dict, report.max_residual_dict_in_fine,
        "pass" if report.passed else "FAIL",
    )
    return report


@dataclass(frozen=True)
class FrameBounds:
    """
    Frame bounds 0 < A <= B of a dictionary on its span, with the outcome of the
    frame inequality check on random span elements.
    """

    A: float
    B: float
    rank: int
    n_checks: int = 0
    violations: int = 0

    @property
    def condition(self) -> float:
        return self.B / self.A

    def to_text(self, dictionary: Optional[Dictionary] = None) -> str:
        fields = {}
        if dictionary is not None:
            fields.update(m=dictionary.m, b=dictionary.b, b_prime=dictionary.b_prime, K=dictionary.K)
        fields.update(
            rank=self.rank,
            A=self.A,
            B=self.B,
            condition=self.condition,
            n_checks=self.n_checks,
            violations=self.violations,
        )
        return "".join(f"{key}: {format_number(value)}\n" for key, value in fields.items())

    def write(self, path: Union[str, Path], dictionary: Optional[Dictionary] = None) -> Path:
        path = Path(path)
        with open(path, "w", newline="\n") as file:
            file.write(self.to_text(dictionary))
        return path


def frame_bounds(
    dictionary: Dictionary,
    grid: Optional[Grid] = None,
    n_checks: int = frame_defaults["n_checks"],
    seed: int = frame_defaults["seed"],
) -> FrameBounds:
    """
    Frame bounds of the dictionary on its span.

    A and B are the smallest nonzero and the largest eigenvalue of the frame operator
    f -> Σ_k <f, φ_k> φ_k, i.e. the squared extreme nonzero singular values of the
    weighted atom matrix. The frame inequality
    A ||f||^2 <= Σ_k |<f, φ_k>|^2 <= B ||f||^2 is then checked with relative slack
    1e-9 on `n_checks` random combinations of atoms (PCG64 with `seed`).

    Parameters
    ----------
    dictionary : Dictionary
    grid : Grid (optional; default: h = b' / 16)
    n_checks : int (optional; default: 100)
    seed : int (optional; default: 0)

    Returns
    -------
        FrameBounds

    Raises
    ------
    RankDeficiencyError
        If the dictionary spans less than m + N' dimensions.

    Examples
    --------
    (m=1, b=b'=1 on [0, 4], h=1/16) -> A = 1 - h/2, B = 1 + h/2
    """
    grid = dictionary.default_grid() if grid is None else grid
    weighted = _weighted_matrix(dictionary.sample(grid), grid)
    _, s, rank = _singular_values(weighted)
    if rank < dictionary.expected_dim:
        raise RankDeficiencyError(
            f"The dictionary has rank {rank}, but spans a space of dimension "
            f"{dictionary.expected_dim} only if the span certification passes."
        )
    lower, upper = float(s[rank - 1] ** 2), float(s[0] ** 2)

    rng = np.random.Generator(np.random.PCG64(seed))
    samples = weighted @ rng.standard_normal((dictionary.K, n_checks))
    energy = np.sum((weighted.T @ samples) ** 2, axis=0)
    norms = np.sum(samples**2, axis=0)
    slack = tolerances["frame"]
    violations = int(
        np.sum((energy < lower * norms * (1 - slack)) | (energy > upper * norms * (1 + slack)))
    )
    if violations:
        logger.warning("Frame inequality violated by %d of %d samples", violations, n_checks)
    logger.info("Frame bounds A=%.6g B=%.6g (rank %d)", lower, upper, rank)
    return FrameBounds(lower, upper, rank, n_checks, violations)
