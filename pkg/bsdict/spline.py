"""
Module containing cardinal B-splines on a compact interval [c, d].

Contains the equidistant partitions `Partition`, the spline spaces `SplineSpace`,
the extended partitions `ExtendedPartition`, the single B-spline functions `Atom`,
and the uniform working grid `Grid` on which atoms are sampled and integrated.
Two bases of a spline space are provided: the equally spaced extended partition
basis (ESEP), whose boundary functions arise by truncation of translates of one
prototype, and the basis with m-tuple knots on the border (EPKB).
"""

# Standard library
from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from math import comb, factorial
from typing import Optional, Sequence, Tuple, Union
import logging

# 3rd-party
import numpy as np
from scipy.interpolate import BSpline

# Self
from .data.defaults import evaluation, grid as grid_defaults, tolerances
from .errors import DegenerateKnotError, IncompatibleSpacingError, InvalidShiftError
from .helpers import as_order, integer_ratio, read_only


__all__ = (
    "Closure",
    "Variant",
    "BasisKind",
    "Partition",
    "SplineSpace",
    "ExtendedPartition",
    "Atom",
    "Grid",
    "eval_cardinal_bspline",
    "eval_bspline_knots",
    "make_partition",
    "partition_uplus",
    "extended_partition",
    "build_esep_basis",
    "build_epkb_basis",
    "build_basis",
    "cardinal_atoms",
    "knot_window_atoms",
    "sample_atoms",
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


class Closure(str, Enum):
    """
    Which end points of [c, d] an equidistant partition contains.
    """

    CLOSED = "closed"
    OPEN = "open"
    LEFT_OPEN = "left-open"
    RIGHT_OPEN = "right-open"


class Variant(str, Enum):
    """
    Position of an atom relative to the interval: boundary atoms are truncated
    (ESEP) or carry multiple knots (EPKB); inner atoms are plain translates.
    """

    INNER = "inner"
    LEFT = "left-boundary"
    RIGHT = "right-boundary"


class BasisKind(str, Enum):
    """
    Choice of the first and last m knots of an extended partition.
    """

    ESEP = "esep"
    EPKB = "epkb"


def _truncated_power(u: np.ndarray, exponent: int) -> np.ndarray:
    # order-1 convention: (u)_+^0 = 1 for u >= 0, which makes B_1 the indicator of [0, 1)
    if exponent == 0:
        return (u >= 0).astype(float)
    return np.where(u > 0, u, 0.0) ** exponent


def eval_cardinal_bspline(m: int, x: ArrayLike) -> Union[float, np.ndarray]:
    """
    Evaluate the cardinal B-spline B(x) of order m, associated with the
    uniform simple knots 0, 1, ..., m.

    For m up to 8 the truncated-power form
    B(x) = (1/(m-1)!) sum_{i=0}^{m} (-1)^i binom(m, i) (x - i)_+^{m-1}
    is used; for higher orders, where the alternating sum cancels too many digits,
    the B-spline is evaluated by `eval_bspline_knots` instead.

    Parameters
    ----------
    m : int
        Order of the B-spline (degree m - 1).
    x : Union[float, Sequence, numpy.ndarray]
        Evaluation point(s).

    Returns
    -------
        Union[float, numpy.ndarray]
        Values of the same shape as `x`. Zero outside (0, m); for m = 1
        the support is the right-open interval [0, 1).

    Examples
    --------
    (m=2, x=1.0) -> 1.0
    (m=4, x=2.0) -> 2/3
    """
    m = as_order(m)
    x_arr = np.asarray(x, dtype=float)
    if m > evaluation["closed_form_max_order"]:
        values = np.asarray(eval_bspline_knots(np.arange(m + 1, dtype=float), x_arr))
    else:
        # B(x) = B(m - x); the left half sums fewer and smaller terms
        u = np.where(x_arr > m / 2, m - x_arr, x_arr) if m > 1 else x_arr
        values = np.zeros_like(x_arr)
        for i in range(m + 1):
            values = values + (-1) ** i * comb(m, i) * _truncated_power(u - i, m - 1)
        values = values / factorial(m - 1)
        if m > 1:
            # the sum vanishes identically outside (0, m) but not in floating point
            values = np.where((x_arr > 0) & (x_arr < m), values, 0.0)
    return float(values) if values.ndim == 0 else values


def eval_bspline_knots(knots: Sequence[float], x: ArrayLike) -> Union[float, np.ndarray]:
    """
    Evaluate the B-spline of order m = len(knots) - 1 with knots
    y_i <= ... <= y_{i+m}, right-continuous on its knot intervals.

    The value is normalized by m / (y_{i+m} - y_i), so that for equally spaced
    knots with gap b it equals (1/b) B((x - y_i) / b). Repeated knots are allowed.

    Parameters
    ----------
    knots : Sequence[float]
        Non-decreasing sequence of m + 1 knots, not all equal.
    x : Union[float, Sequence, numpy.ndarray]
        Evaluation point(s).

    Returns
    -------
        Union[float, numpy.ndarray]

    Examples
    --------
    (knots=[0, 1, 2], x=1.0) -> 1.0
    (knots=[0, 0.5, 1, 1.5, 2], x=1.0) -> 4/3
    """
    t = np.asarray(knots, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise DegenerateKnotError("A B-spline needs at least two knots.")
    if np.any(np.diff(t) < 0):
        raise DegenerateKnotError(f"Knots must be non-decreasing, got {t.tolist()}.")
    if t[-1] == t[0]:
        raise DegenerateKnotError(f"All knots are equal to {t[0]}.")
    m = t.size - 1
    x_arr = np.asarray(x, dtype=float)

    values = BSpline.basis_element(t, extrapolate=False)(x_arr)
    # NaN outside [y_i, y_{i+m}]; the last knot belongs to no right-open interval
    values = np.where(np.isnan(values) | (x_arr >= t[-1]), 0.0, values)
    values = values * (m / (t[-1] - t[0]))
    return float(values) if values.ndim == 0 else values


@dataclass(frozen=True)
class Partition:
    """
    Equidistant partition of [c, d], (c, d), (c, d] or [c, d) with spacing b,
    where (d - c) / b is an integer.

    Parameters
    ----------
    c : float
        Left end of the interval.
    d : float
        Right end of the interval.
    b : float
        Distance between adjacent points.
    closure : Closure (optional; default: Closure.CLOSED)
        Which end points belong to the partition.
    """

    c: float
    d: float
    b: float
    closure: Closure = Closure.CLOSED

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "closure", Closure(self.closure))
        if not self.d > self.c:
            raise IncompatibleSpacingError(f"Empty interval [{self.c}, {self.d}].")
        if not self.b > 0:
            raise IncompatibleSpacingError(f"Spacing must be positive, got {self.b}.")
        integer_ratio(self.d - self.c, self.b, "interval length / spacing")

    @property
    def n_intervals(self) -> int:
        """
        Number of subintervals (d - c) / b.
        """
        return integer_ratio(self.d - self.c, self.b, "interval length / spacing")

    @property
    def n_interior(self) -> int:
        """
        Number N of interior points x_1, ..., x_N.
        """
        return self.n_intervals - 1

    @property
    def indices(self) -> np.ndarray:
        """
        Integer positions j of the points c + j b contained in the partition.
        """
        n = self.n_intervals
        first = 0 if self.closure in (Closure.CLOSED, Closure.RIGHT_OPEN) else 1
        last = n if self.closure in (Closure.CLOSED, Closure.LEFT_OPEN) else n - 1
        return np.arange(first, last + 1)

    @property
    def knots(self) -> np.ndarray:
        """
        The points of the partition, strictly increasing, with the end points
        reproduced exactly.
        """
        j = self.indices
        points = self.c + j * self.b
        return np.where(j == self.n_intervals, self.d, points)

    def closed(self) -> Partition:
        """
        The closed partition P_b[c, d] with the same interval and spacing.
        """
        return Partition(self.c, self.d, self.b, Closure.CLOSED)


def make_partition(
    c: float, d: float, b: float, closure: Union[str, Closure] = Closure.CLOSED
) -> Partition:
    """
    Construct the equidistant partition P_b of [c, d], (c, d), (c, d] or [c, d).

    Parameters
    ----------
    c, d : float
        Interval end points, d > c.
    b : float
        Spacing; (d - c) / b must be an integer.
    closure : Union[str, Closure]
        One of "closed", "open", "left-open", "right-open".

    Returns
    -------
        Partition

    Examples
    --------
    (0, 4, 1, "closed") -> {0, 1, 2, 3, 4}
    (0, 4, 1, "open") -> {1, 2, 3}
    (0, 1, 0.3, "closed") -> IncompatibleSpacingError
    """
    return Partition(c, d, b, Closure(closure))


def partition_uplus(partition: Partition, r: float) -> np.ndarray:
    """
    Shift every point but the last one by r, and keep both end points:
    {x_0, x_0 + r, x_1 + r, ..., x_N + r, x_{N+1}}.

    Parameters
    ----------
    partition : Partition
        The partition; only its closed form is used.
    r : float
        Shift, with 0 < r < b.

    Returns
    -------
        numpy.ndarray
        Strictly increasing knots, one more than in the closed partition.
    """
    if not 0 < r < partition.b:
        raise InvalidShiftError(
            f"The shift must satisfy 0 < r < {partition.b}, got {r}."
        )
    x = partition.closed().knots
    return np.concatenate(([x[0]], x[:-1] + r, [x[-1]]))


@dataclass(frozen=True)
class SplineSpace:
    """
    The space S_m(Δ) of splines of order m with simple knots at the interior
    points of an equidistant partition Δ of [c, d].

    Parameters
    ----------
    m : int
        Spline order.
    partition : Partition
        Closed equidistant partition of [c, d]; d - c must be at least m b,
        so that the interval holds one complete B-spline.
    """

    m: int
    partition: Partition

    def __post_init__(self):
        object.__setattr__(self, "m", as_order(self.m))
        if self.partition.closure is not Closure.CLOSED:
            object.__setattr__(self, "partition", self.partition.closed())
        if self.partition.n_intervals < self.m:
            raise IncompatibleSpacingError(
                f"The interval [{self.c}, {self.d}] is shorter than the support "
                f"m b = {self.m * self.b} of one B-spline."
            )

    @property
    def b(self) -> float:
        return self.partition.b

    @property
    def c(self) -> float:
        return self.partition.c

    @property
    def d(self) -> float:
        return self.partition.d

    @property
    def domain(self) -> Tuple[float, float]:
        return self.c, self.d

    @property
    def n_interior(self) -> int:
        return self.partition.n_interior

    @property
    def dimension(self) -> int:
        """
        Dimension m + N of the space.
        """
        return self.m + self.n_interior


@dataclass(frozen=True, eq=False)
class ExtendedPartition:
    """
    Extended partition y_1 <= ... <= y_{2m+N} of a spline space, whose middle
    points are the interior knots of the partition.
    """

    knots: np.ndarray
    kind: BasisKind

    def __post_init__(self):
        object.__setattr__(self, "knots", read_only(self.knots))
        object.__setattr__(self, "kind", BasisKind(self.kind))

    def windows(self, m: int) -> Tuple[np.ndarray, ...]:
        """
        The m + N consecutive windows y_i, ..., y_{i+m} defining the B-splines.
        """
        return tuple(self.knots[i : i + m + 1] for i in range(self.knots.size - m))


def extended_partition(space: SplineSpace, kind: Union[str, BasisKind]) -> ExtendedPartition:
    """
    Build the ESEP P_b(c - mb, d + mb) or the EPKB (c and d repeated m times)
    extended partition of a spline space.
    """
    kind = BasisKind(kind)
    m, n = space.m, space.partition.n_intervals
    interior = space.partition.knots[1:-1]
    if kind is BasisKind.ESEP:
        j = np.arange(-m + 1, n + m)
        knots = space.c + j * space.b
        # keep the interior knots bit-identical to the partition
        knots[m : m + interior.size] = interior
    else:
        knots = np.concatenate((np.full(m, space.c), interior, np.full(m, space.d)))
    return ExtendedPartition(knots, kind)


@dataclass(frozen=True)
class Atom:
    """
    One B-spline function on [c, d].

    Cardinal atoms (no `knots`) are the prototype (1/b) B(x/b) translated to
    `shift` and restricted to [c, d]. Atoms with `knots` are evaluated by the
    `eval_bspline_knots` over that knot window, which allows multiple knots.

    At the right end point d every atom takes its limit from the left, so
    that the last subinterval [x_N, d] is closed.

    Parameters
    ----------
    m : int
        Order.
    shift : float
        Left end of the untruncated support.
    b : float
        Knot spacing of the atom's own grid.
    domain : tuple[float, float]
        The interval [c, d].
    variant : Variant
        Inner atom, or left/right boundary atom.
    knots : tuple[float, ...] (optional; default: None)
        Knot window of length m + 1, for non-cardinal atoms.
    """

    m: int
    shift: float
    b: float
    domain: Tuple[float, float]
    variant: Variant = Variant.INNER
    knots: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.knots is not None:
            object.__setattr__(self, "knots", tuple(float(k) for k in self.knots))
            if len(self.knots) != self.m + 1:
                raise DegenerateKnotError(
                    f"An atom of order {self.m} needs {self.m + 1} knots, got {len(self.knots)}."
                )

    @property
    def support(self) -> Tuple[float, float]:
        """
        The closed interval outside of which the atom vanishes.
        """
        c, d = self.domain
        if self.knots is None:
            lower, upper = self.shift, self.shift + self.m * self.b
        else:
            lower, upper = self.knots[0], self.knots[-1]
        return max(lower, c), min(upper, d)

    def _evaluate_right(self, x: np.ndarray) -> np.ndarray:
        if self.knots is None:
            return np.asarray(eval_cardinal_bspline(self.m, (x - self.shift) / self.b)) / self.b
        return np.asarray(eval_bspline_knots(self.knots, x))

    def _evaluate_left(self, x: np.ndarray) -> np.ndarray:
        # Left limits, from the mirror image of the knots: B(t; x-) = B(-t reversed; -x)
        if self.knots is None:
            u = (x - self.shift) / self.b
            return np.asarray(eval_cardinal_bspline(self.m, self.m - u)) / self.b
        mirrored = tuple(-k for k in reversed(self.knots))
        return np.asarray(eval_bspline_knots(mirrored, -x))

    def evaluate(self, x: ArrayLike) -> Union[float, np.ndarray]:
        """
        Evaluate the atom; zero outside [c, d].

        Parameters
        ----------
        x : Union[float, Sequence, numpy.ndarray]

        Returns
        -------
            Union[float, numpy.ndarray]
        """
        c, d = self.domain
        x_arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x_arr)
        values = np.array(self._evaluate_right(flat), dtype=float, copy=True)
        at_end = flat == d
        if np.any(at_end):
            values[at_end] = self._evaluate_left(flat[at_end])
        values[(flat < c) | (flat > d)] = 0.0
        return float(values[0]) if x_arr.ndim == 0 else values.reshape(x_arr.shape)

    __call__ = evaluate


def cardinal_atoms(
    m: int, b: float, domain: Tuple[float, float], step: float, indices: Sequence[int]
) -> Tuple[Atom, ...]:
    """
    Translates of the prototype (1/b) B(x/b) to the shifts c + j step, restricted to [c, d].

    Parameters
    ----------
    m : int
        Order.
    b : float
        Knot spacing of the prototype; must be a multiple of `step`.
    domain : tuple[float, float]
        The interval [c, d]; d - c must be a multiple of `step`.
    step : float
        Spacing of the shift grid.
    indices : Sequence[int]
        Integer positions j of the shifts.

    Returns
    -------
        tuple[Atom, ...]
        Atoms in the order of `indices`. Atoms starting left of c are left-boundary
        atoms, those ending right of d are right-boundary atoms.
    """
    c, d = domain
    n_steps = integer_ratio(d - c, step, "interval length / shift step")
    ratio = integer_ratio(b, step, "spacing / shift step")
    last_inner = n_steps - m * ratio
    atoms = []
    for j in indices:
        if j < 0:
            variant = Variant.LEFT
        elif j > last_inner:
            variant = Variant.RIGHT
        else:
            variant = Variant.INNER
        atoms.append(Atom(m, c + int(j) * step, b, (c, d), variant))
    return tuple(atoms)


def knot_window_atoms(
    m: int, breakpoints: Sequence[float], b: float
) -> Tuple[Atom, ...]:
    """
    The B-spline basis of order m over the given breakpoints x_0 < ... < x_{N+1}
    with m-tuple knots on the border, i.e. the EPKB basis of S_m({x_i}).

    Parameters
    ----------
    m : int
        Order.
    breakpoints : Sequence[float]
        Strictly increasing points, first and last being c and d.
    b : float
        Nominal spacing; windows equally spaced with this gap are inner atoms.

    Returns
    -------
        tuple[Atom, ...]
        m + N atoms, ordered by their first knot.
    """
    x = np.asarray(breakpoints, dtype=float)
    if x.size < 2 or np.any(np.diff(x) <= 0):
        raise DegenerateKnotError("Breakpoints must be strictly increasing.")
    c, d = float(x[0]), float(x[-1])
    knots = np.concatenate((np.full(m, c), x[1:-1], np.full(m, d)))
    atoms = []
    for i in range(knots.size - m):
        window = knots[i : i + m + 1]
        if np.allclose(np.diff(window), b, rtol=tolerances["ratio"], atol=0.0):
            variant = Variant.INNER
        elif window[0] == c:
            variant = Variant.LEFT
        else:
            variant = Variant.RIGHT
        atoms.append(Atom(m, float(window[0]), b, (c, d), variant, tuple(window)))
    return tuple(atoms)


def build_esep_basis(space: SplineSpace) -> Tuple[Atom, ...]:
    """
    The ESEP basis of S_m(Δ): the prototype (1/b) B(x/b) translated to every
    k in P_b(c - mb, d), restricted to [c, d], ordered by increasing k.

    Parameters
    ----------
    space : SplineSpace

    Returns
    -------
        tuple[Atom, ...]
        m + N atoms.
    """
    indices = np.arange(-space.m + 1, space.partition.n_intervals)
    atoms = cardinal_atoms(space.m, space.b, space.domain, space.b, indices)
    logger.debug("ESEP basis of order %d on [%g, %g]: %d atoms", space.m, space.c, space.d, len(atoms))
    return atoms


def build_epkb_basis(space: SplineSpace) -> Tuple[Atom, ...]:
    """
    The EPKB basis of S_m(Δ): B-splines over consecutive windows of the extended
    partition with c and d repeated m times.

    Parameters
    ----------
    space : SplineSpace

    Returns
    -------
        tuple[Atom, ...]
        m + N atoms; those with equally spaced windows coincide with ESEP inner atoms.
    """
    atoms = knot_window_atoms(space.m, space.partition.knots, space.b)
    logger.debug("EPKB basis of order %d on [%g, %g]: %d atoms", space.m, space.c, space.d, len(atoms))
    return atoms


def build_basis(space: SplineSpace, kind: Union[str, BasisKind] = BasisKind.ESEP) -> Tuple[Atom, ...]:
    """
    Build the ESEP or EPKB basis of a spline space.
    """
    if BasisKind(kind) is BasisKind.ESEP:
        return build_esep_basis(space)
    return build_epkb_basis(space)


@dataclass(frozen=True)
class Grid:
    """
    Uniform working grid c, c + h, ..., d with composite-trapezoid weights.

    Parameters
    ----------
    c, d : float
        Interval end points.
    h : float
        Grid step; (d - c) / h must be an integer.
    """

    c: float
    d: float
    h: float

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "h", float(self.h))
        if not self.d > self.c:
            raise IncompatibleSpacingError(f"Empty interval [{self.c}, {self.d}].")
        integer_ratio(self.d - self.c, self.h, "interval length / grid step")

    @classmethod
    def for_spacing(
        cls, c: float, d: float, spacing: float, q: Optional[int] = None
    ) -> Grid:
        """
        Working grid with step h = spacing / q, q samples per knot interval.
        """
        q = grid_defaults["q"] if q is None else int(q)
        if q < 1:
            raise IncompatibleSpacingError(f"The grid factor q must be positive, got {q}.")
        return cls(c, d, spacing / q)

    @property
    def domain(self) -> Tuple[float, float]:
        return self.c, self.d

    @property
    def n_intervals(self) -> int:
        return integer_ratio(self.d - self.c, self.h, "interval length / grid step")

    @property
    def n_points(self) -> int:
        return self.n_intervals + 1

    @cached_property
    def points(self) -> np.ndarray:
        j = np.arange(self.n_points)
        points = self.c + j * self.h
        points[-1] = self.d
        return read_only(points)

    @cached_property
    def weights(self) -> np.ndarray:
        weights = np.full(self.n_points, self.h)
        weights[[0, -1]] = self.h / 2
        return read_only(weights)

    @cached_property
    def sqrt_weights(self) -> np.ndarray:
        return read_only(np.sqrt(self.weights))

    def inner(self, u: np.ndarray, v: np.ndarray) -> Union[float, np.ndarray]:
        """
        Trapezoid inner product; for matrices, columns are the sampled functions.
        """
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        weights = self.weights if v.ndim == 1 else self.weights[:, None]
        return u.T @ (weights * v)

    def norm(self, u: np.ndarray) -> float:
        u = np.asarray(u, dtype=float)
        return float(np.sqrt(np.sum(self.weights * u * u)))

    def is_compatible(self, spacing: float) -> bool:
        """
        Whether the grid step divides a knot spacing.
        """
        try:
            integer_ratio(spacing, self.h, "spacing / grid step")
        except IncompatibleSpacingError:
            return False
        return True


def sample_atoms(atoms: Sequence[Atom], grid: Grid) -> np.ndarray:
    """
    Sample atoms on a grid.

    Returns
    -------
        numpy.ndarray
        Matrix of shape (grid.n_points, len(atoms)); column i holds atom i.
    """
    x = grid.points
    if len(atoms) == 0:
        return np.zeros((x.size, 0))
    return np.column_stack([atom.evaluate(x) for atom in atoms])
