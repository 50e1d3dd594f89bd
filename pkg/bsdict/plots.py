"""
SVG plots of sampled atoms and approximations.

Plots are derived from the same arrays that are written to CSV. They are drawn on
standalone `Figure` objects, so no GUI backend is involved, and saved without a
date stamp and with a fixed hash salt, so that reruns give identical files.
"""

# Standard library
from pathlib import Path
from typing import Mapping, Optional, Sequence, Tuple, Union

# 3rd-party
import matplotlib
from matplotlib.figure import Figure
import numpy as np


__all__ = ("save_svg", "plot_atoms", "plot_approximation", "plot_panels")


def save_svg(figure: Figure, path: Union[str, Path]) -> Path:
    path = Path(path)
    with matplotlib.rc_context({"svg.hashsalt": "bsdict", "svg.fonttype": "none"}):
        figure.savefig(path, format="svg", metadata={"Date": None})
    return path


def _draw_atoms(axes, x: np.ndarray, values: np.ndarray, title: Optional[str]):
    for column in np.atleast_2d(values.T):
        axes.plot(x, column, linewidth=0.8)
    axes.set_xlim(x[0], x[-1])
    if title:
        axes.set_title(title, fontsize=9)


def plot_atoms(
    x: np.ndarray, values: np.ndarray, path: Union[str, Path], title: Optional[str] = None
) -> Path:
    """
    Line plot of every column of `values` against `x`.
    """
    figure = Figure(figsize=(6, 3))
    axes = figure.add_subplot()
    _draw_atoms(axes, x, values, title)
    axes.set_xlabel("x")
    figure.tight_layout()
    return save_svg(figure, path)


def plot_approximation(
    x: np.ndarray,
    curves: Mapping[str, np.ndarray],
    path: Union[str, Path],
    title: Optional[str] = None,
) -> Path:
    """
    Signal and its approximations, one labelled line each.
    """
    figure = Figure(figsize=(7, 3.5))
    axes = figure.add_subplot()
    for label, values in curves.items():
        axes.plot(x, values, linewidth=0.8, label=label)
    axes.set_xlim(x[0], x[-1])
    axes.set_xlabel("t")
    axes.legend(fontsize=8)
    if title:
        axes.set_title(title, fontsize=9)
    figure.tight_layout()
    return save_svg(figure, path)


def plot_panels(
    panels: Sequence[Tuple[str, np.ndarray, np.ndarray]],
    path: Union[str, Path],
    n_columns: int = 2,
) -> Path:
    """
    Grid of atom plots; every panel is (title, x, values), filled row by row.
    """
    n_rows = -(-len(panels) // n_columns)
    figure = Figure(figsize=(4 * n_columns, 2.5 * n_rows))
    for i, (title, x, values) in enumerate(panels):
        axes = figure.add_subplot(n_rows, n_columns, i + 1)
        _draw_atoms(axes, x, values, title)
    figure.tight_layout()
    return save_svg(figure, path)
