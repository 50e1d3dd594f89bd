"""
Module containing the test signals and the approximation-quality metrics.

Signals are sampled on a uniform working grid c, c + h, ..., d. Two families are
generated: piecewise-constant "blocky" signals whose breakpoints lie on a fixed
grid, and modulated chirps a(t) sin(2π(f0 t + (f1 - f0) t^2 / (2T))).
"""

# Standard library
from __future__ import annotations
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Tuple, Union
import logging

# 3rd-party
import numpy as np

# Self
from .data.defaults import grid as grid_defaults
from .errors import GridMismatchError, IncompatibleSpacingError, SignalError
from .helpers import integer_ratio, read_only, write_table_csv
from .spline import Grid


__all__ = (
    "SampledSignal",
    "ChirpParams",
    "Metrics",
    "gen_blocky",
    "gen_chirp",
    "metrics",
    "write_signal_csv",
    "read_signal_csv",
    "haar_best_term_count",
)

logger = logging.getLogger(__name__)

ENVELOPES = ("raised-cosine", "unit", "zero")


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """
    Samples of a signal on the uniform grid c, c + h, ..., d.

    Parameters
    ----------
    domain : tuple[float, float]
        The interval [c, d].
    h : float
        Grid step; (d - c) / h must be an integer.
    samples : numpy.ndarray
        (d - c) / h + 1 values.
    provenance : str (optional; default: "")
        Generator and seed, or source file.
    """

    domain: Tuple[float, float]
    h: float
    samples: np.ndarray = field(repr=False)
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))
        object.__setattr__(self, "samples", read_only(self.samples))
        try:
            n_points = self.grid.n_points
        except IncompatibleSpacingError as error:
            raise SignalError(str(error)) from error
        if self.samples.shape != (n_points,):
            raise SignalError(
                f"A signal on {self.domain} with step {self.h} needs {n_points} samples, "
                f"got an array of shape {self.samples.shape}."
            )

    @cached_property
    def grid(self) -> Grid:
        return Grid(self.domain[0], self.domain[1], self.h)

    @property
    def points(self) -> np.ndarray:
        return self.grid.points


def gen_blocky(
    seed: int,
    n_blocks: int = 10,
    domain: Tuple[float, float] = (0.0, 4.0),
    step: float = 2.0**-8,
    h: Optional[float] = None,
) -> SampledSignal:
    """
    Random piecewise-constant signal.

    The n_blocks - 1 breakpoints are drawn uniformly without replacement from the
    interior points of the breakpoint grid c + i step, the amplitudes i.i.d. uniform
    on [-1, 1], both from a PCG64 generator seeded with `seed`. Blocks are closed on
    the left, so the signal lies in the order-1 spline space with spacing `step`.

    Parameters
    ----------
    seed : int
    n_blocks : int (optional; default: 10)
    domain : tuple[float, float] (optional; default: (0, 4))
    step : float (optional; default: 2**-8)
        Breakpoint grid spacing.
    h : float (optional; default: step / 16)
        Sampling step; must divide `step`.

    Returns
    -------
        SampledSignal
    """
    c, d = domain
    h = step / grid_defaults["q"] if h is None else h
    n_steps = integer_ratio(d - c, step, "interval length / breakpoint step", SignalError)
    per_step = integer_ratio(step, h, "breakpoint step / sampling step", SignalError)
    if n_blocks < 1:
        raise SignalError(f"A blocky signal needs at least one block, got {n_blocks}.")
    if n_blocks - 1 > n_steps - 1:
        raise SignalError(
            f"{n_blocks} blocks need {n_blocks - 1} breakpoints, but the grid "
            f"has only {n_steps - 1} interior points."
        )

    rng = np.random.Generator(np.random.PCG64(seed))
    breakpoints = np.sort(rng.choice(np.arange(1, n_steps), size=n_blocks - 1, replace=False))
    amplitudes = rng.uniform(-1.0, 1.0, size=n_blocks)

    # integer positions avoid rounding at the breakpoints
    positions = np.arange(n_steps * per_step + 1)
    blocks = np.searchsorted(breakpoints * per_step, positions, side="right")
    provenance = f"blocky(seed={seed}, n_blocks={n_blocks})"
    logger.debug("%s: breakpoints %s", provenance, (c + breakpoints * step).tolist())
    return SampledSignal((c, d), h, amplitudes[blocks], provenance)


@dataclass(frozen=True)
class ChirpParams:
    """
    Parameters of a modulated chirp.

    Parameters
    ----------
    f0 : float (optional; default: 0.25)
        Instantaneous frequency at c.
    f1 : float (optional; default: 2.5)
        Instantaneous frequency at d.
    envelope : str (optional; default: "raised-cosine")
        "raised-cosine" for a(t) = (1 - cos(2π(t - c)/T)) / 2, "unit" or "zero".
    amplitude : float (optional; default: 1.0)
    """

    f0: float = 0.25
    f1: float = 2.5
    envelope: str = "raised-cosine"
    amplitude: float = 1.0

    def __post_init__(self):
        if self.envelope not in ENVELOPES:
            raise SignalError(f"Unknown envelope {self.envelope!r}; expected one of {ENVELOPES}.")
        if self.f0 < 0 or self.f1 < 0:
            raise SignalError(f"Frequencies must be non-negative, got {self.f0}, {self.f1}.")


def gen_chirp(
    params: Optional[ChirpParams] = None,
    domain: Tuple[float, float] = (0.0, 4.0),
    h: float = 2.0**-9,
) -> SampledSignal:
    """
    Samples of a(t) sin(2π(f0 (t - c) + (f1 - f0) (t - c)^2 / (2T))), T = d - c.

    Examples
    --------
    (ChirpParams(envelope="zero")) -> zero signal
    (ChirpParams(f0=2, f1=2, envelope="unit"), (0, 1)) -> sin(4πt)
    """
    params = ChirpParams() if params is None else params
    c, d = domain
    grid = Grid(c, d, h)
    t = grid.points - c
    period = d - c
    phase = 2 * np.pi * (params.f0 * t + (params.f1 - params.f0) / (2 * period) * t**2)
    if params.envelope == "raised-cosine":
        envelope = 0.5 * (1 - np.cos(2 * np.pi * t / period))
    elif params.envelope == "unit":
        envelope = np.ones_like(t)
    else:
        envelope = np.zeros_like(t)
    provenance = f"chirp(f0={params.f0}, f1={params.f1}, envelope={params.envelope})"
    return SampledSignal((c, d), h, params.amplitude * envelope * np.sin(phase), provenance)


@dataclass(frozen=True)
class Metrics:
    l2_relerr: float
    max_abs_err: float


def _check_same_grid(f: SampledSignal, g: SampledSignal) -> None:
    if (
        f.samples.shape != g.samples.shape
        or not np.allclose(f.domain, g.domain, rtol=1e-12, atol=0.0)
        or not np.isclose(f.h, g.h, rtol=1e-12, atol=0.0)
    ):
        raise GridMismatchError(
            f"Signals on different grids: {f.domain} step {f.h} and {g.domain} step {g.h}."
        )


def metrics(f: SampledSignal, g: SampledSignal) -> Metrics:
    """
    Trapezoid-weighted relative L2 error ||f - g|| / ||f|| and sup-norm error of g
    against the reference f.

    Examples
    --------
    (f, f) -> (0, 0)
    (f, 0) -> (1, max |f|)
    """
    _check_same_grid(f, g)
    difference = f.samples - g.samples
    grid = f.grid
    reference = grid.norm(f.samples)
    error = grid.norm(difference)
    if reference == 0:
        relerr = 0.0 if error == 0 else float("inf")
    else:
        relerr = error / reference
    max_abs = float(np.max(np.abs(difference))) if difference.size else 0.0
    return Metrics(float(relerr), max_abs)


def write_signal_csv(signal: SampledSignal, path: Union[str, Path]) -> Path:
    """
    Write a signal as two columns "t,value" with 17 significant digits.
    """
    return write_table_csv(path, ("t", "value"), np.column_stack((signal.points, signal.samples)))


def read_signal_csv(path: Union[str, Path]) -> SampledSignal:
    """
    Read a signal written by `write_signal_csv`, or any "t,value" table with a header
    row and uniformly spaced, increasing t.
    """
    path = Path(path)
    try:
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as error:
        raise SignalError(f"Cannot read a signal from {path}: {error}") from error
    if table.shape[1] != 2 or table.shape[0] < 2:
        raise SignalError(f"{path} must hold two columns t,value and at least two rows.")
    t, values = table[:, 0], table[:, 1]
    h = (t[-1] - t[0]) / (t.size - 1)
    if not h > 0 or not np.allclose(np.diff(t), h, rtol=1e-9, atol=0.0):
        raise SignalError(f"The samples in {path} are not uniformly spaced.")
    return SampledSignal((t[0], t[-1]), h, values, f"file:{path.name}")


def haar_best_term_count(f: SampledSignal, n_cells: int, target_relerr: float) -> int:
    """
    Number of largest orthonormal Haar coefficients needed to represent a
    piecewise-constant signal on n_cells = 2^J equal cells within a relative L2 error.

    The cell values are read at the left end of every cell. Used as the wavelet
    reference in comparisons with dictionary pursuit.
    """
    if n_cells < 1 or n_cells & (n_cells - 1):
        raise SignalError(f"The number of cells must be a power of two, got {n_cells}.")
    per_cell = integer_ratio(f.grid.n_intervals, n_cells, "samples per cell", SignalError)
    approximation = f.samples[:-1:per_cell].astype(float)

    coefficients = []
    while approximation.size > 1:
        even, odd = approximation[0::2], approximation[1::2]
        coefficients.append((even - odd) / np.sqrt(2))
        approximation = (even + odd) / np.sqrt(2)
    coefficients.append(approximation)
    energy = np.sort(np.concatenate(coefficients) ** 2)[::-1]

    total = energy.sum()
    if total == 0:
        return 0
    remaining = np.maximum(total - np.cumsum(energy), 0.0)
    remaining[-1] = 0.0
    allowed = target_relerr**2 * total
    return int(np.flatnonzero(remaining <= allowed)[0]) + 1
