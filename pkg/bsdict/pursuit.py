"""
Module containing greedy sparse approximation over B-spline dictionaries.

`oomp_select` is an optimized orthogonal matching pursuit: at every step it picks
the atom maximizing |<r, φ_k>| / ||P φ_k||, where P projects onto the orthogonal
complement of the atoms already selected, and re-projects the signal onto the
enlarged selection. `backward_prune` then removes atoms whose removal keeps the
error within the target. All inner products are trapezoid sums on the signal's
grid, carried out as Euclidean products of square-root-weighted samples.
"""

# Standard library
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple
import logging

# 3rd-party
import numpy as np
import scipy.linalg

# Self
from .data.defaults import pursuit as pursuit_defaults, tolerances
from .dictionary import Dictionary
from .errors import StagnationError
from .helpers import raise_for_type
from .signals import SampledSignal


__all__ = (
    "StopCriteria",
    "PursuitState",
    "Approximation",
    "project",
    "oomp_select",
    "backward_prune",
    "approximate",
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StopCriteria:
    """
    When pursuit stops.

    Parameters
    ----------
    target_relerr : float (optional; default: 1e-3)
        Stop as soon as ||r|| / ||f|| <= target_relerr.
    max_atoms : int (optional; default: None)
        Upper bound on the number of selected atoms; no bound besides the
        dictionary size if None.
    """

    target_relerr: float = pursuit_defaults["target_relerr"]
    max_atoms: Optional[int] = None

    def __post_init__(self):
        if not self.target_relerr >= 0:
            raise ValueError(f"The target error must be non-negative, got {self.target_relerr}.")
        if self.max_atoms is not None and self.max_atoms < 0:
            raise ValueError(f"max_atoms must be non-negative, got {self.max_atoms}.")


@dataclass(frozen=True, eq=False)
class PursuitState:
    """
    A selection of dictionary atoms together with the orthogonal projection of the
    signal onto their span.

    Parameters
    ----------
    dictionary : Dictionary
    signal : SampledSignal
        The approximated signal f.
    indices : tuple[int, ...]
        Positions of the selected atoms in the dictionary, in selection order.
    coefficients : numpy.ndarray
        Coefficients c_n of f^M = Σ c_n φ_n, aligned with `indices`.
    approximation : numpy.ndarray
        Samples of f^M.
    residual : numpy.ndarray
        Samples of f - f^M.
    residual_norms : tuple[float, ...]
        ||r|| after 0, 1, ... forward selections.
    stop_reason : str
        "target", "max_atoms", "zero-signal", "stagnation" or "pruned".
    """

    dictionary: Dictionary = field(repr=False)
    signal: SampledSignal = field(repr=False)
    indices: Tuple[int, ...]
    coefficients: np.ndarray = field(repr=False)
    approximation: np.ndarray = field(repr=False)
    residual: np.ndarray = field(repr=False)
    residual_norms: Tuple[float, ...] = field(repr=False)
    stop_reason: str = "target"
    weighted_atoms: np.ndarray = field(default=None, repr=False)

    @property
    def M(self) -> int:
        return len(self.indices)

    @property
    def labels(self) -> np.ndarray:
        """
        Shift labels j of the selected atoms.
        """
        return self.dictionary.indices[list(self.indices)]

    @property
    def relerr(self) -> float:
        grid = self.signal.grid
        norm = grid.norm(self.signal.samples)
        if norm == 0:
            return 0.0
        return grid.norm(self.residual) / norm


@dataclass(frozen=True, eq=False)
class Approximation:
    """
    Result of `approximate`.
    """

    approximation: SampledSignal
    M: int
    relerr: float
    indices: Tuple[int, ...]
    state: PursuitState = field(repr=False)


def _weighted_atoms(dictionary: Dictionary, signal: SampledSignal) -> np.ndarray:
    return signal.grid.sqrt_weights[:, None] * dictionary.sample(signal.grid)


def _project(
    weighted: np.ndarray, target: np.ndarray, indices: Sequence[int]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # coefficients, weighted residual and R of the QR factorization of the selection
    columns = weighted[:, list(indices)]
    q, r = scipy.linalg.qr(columns, mode="economic")
    coefficients = scipy.linalg.solve_triangular(r, q.T @ target)
    residual = target - q @ (q.T @ target)
    return coefficients, residual, r


def _state(
    dictionary: Dictionary,
    signal: SampledSignal,
    weighted: np.ndarray,
    indices: Sequence[int],
    coefficients: np.ndarray,
    residual_norms: Sequence[float],
    stop_reason: str,
) -> PursuitState:
    indices = tuple(int(i) for i in indices)
    if indices:
        approximation = (weighted[:, list(indices)] @ coefficients) / signal.grid.sqrt_weights
    else:
        approximation = np.zeros_like(signal.samples)
    residual = signal.samples - approximation
    return PursuitState(
        dictionary,
        signal,
        indices,
        np.asarray(coefficients, dtype=float),
        approximation,
        residual,
        tuple(float(n) for n in residual_norms),
        stop_reason,
        weighted,
    )


def project(dictionary: Dictionary, f: SampledSignal, indices: Sequence[int]) -> PursuitState:
    """
    Orthogonal projection of a signal onto the span of the given dictionary atoms.

    Parameters
    ----------
    dictionary : Dictionary
    f : SampledSignal
    indices : Sequence[int]
        Positions of linearly independent atoms in the dictionary.

    Returns
    -------
        PursuitState
    """
    raise_for_type(f, SampledSignal, "The signal must be a SampledSignal.")
    weighted = _weighted_atoms(dictionary, f)
    target = f.grid.sqrt_weights * f.samples
    if len(indices) == 0:
        norm = float(np.linalg.norm(target))
        return _state(dictionary, f, weighted, (), np.zeros(0), (norm,), "target")
    coefficients, residual, _ = _project(weighted, target, indices)
    return _state(
        dictionary, f, weighted, indices, coefficients, (float(np.linalg.norm(residual)),), "target"
    )


def oomp_select(
    dictionary: Dictionary, f: SampledSignal, stop: Optional[StopCriteria] = None
) -> PursuitState:
    """
    Forward optimized orthogonal matching pursuit.

    At each step the atom maximizing |<r, φ_k>| / ||P φ_k|| is selected, where P
    removes the span of the atoms already selected. Atoms with ||P φ_k|| below
    1e-10 ||φ_k|| are not candidates; scores tied within 1e-12 (relative) go to
    the lowest dictionary position. Selected atoms are orthonormalized by classical
    Gram-Schmidt with one reorthogonalization pass.

    Parameters
    ----------
    dictionary : Dictionary
    f : SampledSignal
        Signal on a grid whose step divides b'.
    stop : StopCriteria (optional; default: StopCriteria())

    Returns
    -------
        PursuitState

    Raises
    ------
    StagnationError
        If no admissible atom is left while the error is above the target; the
        partial state is attached as `error.state`.
    """
    raise_for_type(f, SampledSignal, "The signal must be a SampledSignal.")
    stop = StopCriteria() if stop is None else stop
    weighted = _weighted_atoms(dictionary, f)
    target = f.grid.sqrt_weights * f.samples
    f_norm = float(np.linalg.norm(target))
    if f_norm == 0:
        logger.info("Zero signal: nothing to select")
        return _state(dictionary, f, weighted, (), np.zeros(0), (0.0,), "zero-signal")

    n_points, n_atoms = weighted.shape
    limit = min(n_atoms, n_points)
    if stop.max_atoms is not None:
        limit = min(limit, stop.max_atoms)

    atom_norms = np.linalg.norm(weighted, axis=0)
    projected2 = atom_norms**2
    available = atom_norms > 0
    q = np.zeros((n_points, limit))
    r_factor = np.zeros((limit, limit))
    selected = []
    residual = target.copy()
    norms = [f_norm]
    reason = "max_atoms"

    while True:
        residual_norm = norms[-1]
        if residual_norm <= stop.target_relerr * f_norm:
            reason = "target"
            break
        if len(selected) == limit:
            break

        correlations = weighted.T @ residual
        projected = np.sqrt(np.clip(projected2, 0.0, None))
        candidates = available & (projected > tolerances["candidate"] * atom_norms)
        candidates[selected] = False
        scores = np.full(n_atoms, -np.inf)
        scores[candidates] = np.abs(correlations[candidates]) / projected[candidates]
        best = scores.max() if candidates.any() else -np.inf
        if not best > tolerances["stagnation"] * residual_norm:
            reason = "stagnation"
            break
        k = int(np.flatnonzero(scores >= best * (1 - tolerances["tie"]))[0])

        step = len(selected)
        vector = weighted[:, k].copy()
        for _ in range(2):
            overlap = q[:, :step].T @ vector
            vector -= q[:, :step] @ overlap
            r_factor[:step, step] += overlap
        r_factor[step, step] = np.linalg.norm(vector)
        q[:, step] = vector / r_factor[step, step]

        projected2 -= (weighted.T @ q[:, step]) ** 2
        residual -= (q[:, step] @ residual) * q[:, step]
        selected.append(k)
        norms.append(float(np.linalg.norm(residual)))
        logger.debug(
            "step %d: atom %d (label %d), score %.6g, relerr %.6g",
            step + 1, k, dictionary.indices[k], best, norms[-1] / f_norm,
        )

    size = len(selected)
    coefficients = scipy.linalg.solve_triangular(
        r_factor[:size, :size], q[:, :size].T @ target
    ) if size else np.zeros(0)
    state = _state(dictionary, f, weighted, selected, coefficients, norms, reason)
    logger.info(
        "OOMP stopped (%s) after %d atoms, relerr %.6g", reason, state.M, state.relerr
    )
    if reason == "stagnation":
        raise StagnationError(
            f"No admissible atom left after {state.M} atoms, relative error "
            f"{state.relerr:.3e} above the target {stop.target_relerr:.3e}.",
            state,
        )
    return state


def backward_prune(state: PursuitState, stop: Optional[StopCriteria] = None) -> PursuitState:
    """
    Remove selected atoms while the relative error stays within the target.

    Each pass removes the atom whose removal increases ||r||^2 least, that increase
    being c_j^2 / [(Φ_S^T Φ_S)^{-1}]_jj, and re-projects the signal onto the
    remaining atoms. A removal is accepted while the new relative error does not
    exceed target_relerr + 1e-12.

    Parameters
    ----------
    state : PursuitState
    stop : StopCriteria (optional; default: StopCriteria())

    Returns
    -------
        PursuitState
        With at most as many atoms as `state`; unchanged if no removal is acceptable.
    """
    stop = StopCriteria() if stop is None else stop
    if state.M == 0:
        return state
    dictionary, signal = state.dictionary, state.signal
    weighted = state.weighted_atoms
    if weighted is None:
        weighted = _weighted_atoms(dictionary, signal)
    target = signal.grid.sqrt_weights * signal.samples
    f_norm = float(np.linalg.norm(target))
    allowed = (stop.target_relerr + tolerances["prune_slack"]) * f_norm

    indices = list(state.indices)
    coefficients, residual, r_factor = _project(weighted, target, indices)
    removed = 0
    while indices:
        inverse = scipy.linalg.solve_triangular(r_factor, np.eye(len(indices)))
        increase = coefficients**2 / np.sum(inverse**2, axis=1)
        j = int(np.argmin(increase))
        new_norm = np.sqrt(np.linalg.norm(residual) ** 2 + increase[j])
        if new_norm > allowed:
            break
        logger.debug("pruning atom %d, relerr %.6g", indices[j], new_norm / f_norm)
        del indices[j]
        removed += 1
        if indices:
            coefficients, residual, r_factor = _project(weighted, target, indices)
        else:
            coefficients, residual = np.zeros(0), target.copy()

    if removed == 0:
        return state
    logger.info("Backward pruning removed %d of %d atoms", removed, state.M)
    return _state(
        dictionary,
        signal,
        weighted,
        indices,
        coefficients,
        state.residual_norms,
        "pruned",
    )


def approximate(
    dictionary: Dictionary, f: SampledSignal, stop: Optional[StopCriteria] = None
) -> Approximation:
    """
    Sparse approximation of a signal: forward selection followed by backward pruning.

    Parameters
    ----------
    dictionary : Dictionary
    f : SampledSignal
    stop : StopCriteria (optional; default: StopCriteria())

    Returns
    -------
        Approximation

    Raises
    ------
    StagnationError
        Propagated from the forward selection.
    """
    stop = StopCriteria() if stop is None else stop
    state = backward_prune(oomp_select(dictionary, f, stop), stop)
    approximation = SampledSignal(
        f.domain, f.h, state.approximation, f"approximation of {f.provenance}"
    )
    return Approximation(approximation, state.M, state.relerr, state.indices, state)
