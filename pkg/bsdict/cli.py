"""
Command-line interface.

Subcommands write their results into the output directory: CSV tables, SVG plots
and plain-text reports. Exit codes: 0 success, 1 failed span certification,
2 invalid configuration, 3 pursuit stagnation (partial results are still written).
"""

# Standard library
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence
import argparse
import csv
import logging
import sys

# 3rd-party
import numpy as np

# Self
from . import plots
from .config import RunConfig, load_config_file, predefined
from .dictionary import build_dictionary, certify_span_equality, frame_bounds
from .errors import BsdictError, RankDeficiencyError, StagnationError
from .helpers import format_number, write_table_csv
from .pursuit import StopCriteria, approximate
from .signals import ChirpParams, SampledSignal, gen_blocky, gen_chirp, read_signal_csv
from .spline import Grid, Partition, SplineSpace, build_basis, sample_atoms


__all__ = ("main", "build_parser")

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CERTIFICATION_FAILED = 1
EXIT_CONFIG = 2
EXIT_STAGNATION = 3

# (order, kind) of the three rows of the basis/dictionary comparison figure
FIGURE1_ROWS = ((1, "esep"), (4, "esep"), (4, "epkb"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--out", help="output directory (default: current directory)")
    common.add_argument("--grid-q", dest="grid_q", type=int, help="samples per knot interval")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="log INFO (-v) or DEBUG (-vv) to stderr"
    )

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--m", type=int, help="spline order")
    model.add_argument("--interval", nargs=2, type=float, metavar=("C", "D"), help="interval [c, d]")
    model.add_argument("--b", type=float, help="coarse knot spacing")
    model.add_argument("--kind", choices=("esep", "epkb"), help="extended partition (default: esep)")

    fine = argparse.ArgumentParser(add_help=False)
    fine.add_argument("--bprime", dest="b_prime", type=float, help="fine shift spacing b'")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, help="seed of random signals")

    parser = argparse.ArgumentParser(
        prog="bsdict", description="Cardinal B-spline bases, wide-support dictionaries and sparse pursuit."
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("basis", parents=[common, model], help="sample the basis of S_m(Δ)")
    commands.add_parser("dict", parents=[common, model, fine], help="sample the dictionary D_m(Δ, b')")
    commands.add_parser("certify", parents=[common, model, fine, seeded], help="certify Span D = S_m(Δ')")
    commands.add_parser("frame", parents=[common, model, fine, seeded], help="frame bounds of D")

    approx = commands.add_parser(
        "approx", parents=[common, model, fine, seeded], help="sparse approximation, basis against dictionary"
    )
    source = approx.add_mutually_exclusive_group()
    source.add_argument("--signal", help="CSV file with columns t,value")
    source.add_argument("--preset", choices=("blocky", "chirp"), help="generated signal")
    approx.add_argument("--max-atoms", dest="max_atoms", type=int)
    approx.add_argument("--target-relerr", dest="target_relerr", type=float)
    approx.add_argument("--n-blocks", dest="n_blocks", type=int)
    approx.add_argument("--f0", type=float)
    approx.add_argument("--f1", type=float)

    reproduce = commands.add_parser("reproduce", parents=[common, seeded], help="run a preset experiment")
    reproduce.add_argument("experiment", choices=predefined.names)
    return parser


def _configure_logging(verbosity: int):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger("bsdict").setLevel(level)


def _flags(args: argparse.Namespace) -> dict:
    flags = {
        key: value
        for key, value in vars(args).items()
        if key in RunConfig.field_names() and key != "command"
    }
    interval = getattr(args, "interval", None)
    if interval is not None:
        flags["c"], flags["d"] = interval
    return flags


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """
    Merge preset, config file and flags into a validated `RunConfig`.
    """
    file_dict = load_config_file(args.config) if args.config else {}
    if args.command == "reproduce":
        base = predefined.get(args.experiment).as_dict()
        file_dict = {**base, **file_dict}
    else:
        file_dict = {**file_dict, "command": args.command}
    return RunConfig.from_sources(file_dict, _flags(args)).validate()


def _atom_table(path: Path, x: np.ndarray, values: np.ndarray) -> Path:
    header = ["x"] + [f"atom_{i}" for i in range(values.shape[1])]
    return write_table_csv(path, header, np.column_stack((x, values)))


def cmd_basis(config: RunConfig) -> int:
    space = SplineSpace(config.m, Partition(config.c, config.d, config.b))
    atoms = build_basis(space, config.kind)
    grid = Grid.for_spacing(config.c, config.d, config.b, config.grid_q)
    values = sample_atoms(atoms, grid)
    out = config.output_dir
    _atom_table(out / "basis.csv", grid.points, values)
    plots.plot_atoms(
        grid.points, values, out / "basis.svg", f"{config.kind.upper()} basis, m={config.m}, b={config.b:g}"
    )
    return EXIT_OK


def _dictionary(config: RunConfig):
    return build_dictionary(config.m, Partition(config.c, config.d, config.b), config.b_prime, config.kind)


def cmd_dict(config: RunConfig) -> int:
    dictionary = _dictionary(config)
    grid = dictionary.default_grid(config.grid_q)
    values = dictionary.sample(grid)
    out = config.output_dir
    _atom_table(out / "dictionary.csv", grid.points, values)
    plots.plot_atoms(
        grid.points,
        values,
        out / "dictionary.svg",
        f"{config.kind.upper()} dictionary, m={config.m}, b={config.b:g}, b'={config.b_prime:g}",
    )
    return EXIT_OK


def cmd_certify(config: RunConfig) -> int:
    dictionary = _dictionary(config)
    grid = dictionary.default_grid(config.grid_q)
    report = certify_span_equality(dictionary, grid=grid)
    report.write(config.output_dir / "certification.txt")
    if not report.passed:
        logger.warning("Span certification failed: rank %d of %d", report.rank, report.expected_dim)
        return EXIT_CERTIFICATION_FAILED
    bounds = frame_bounds(dictionary, grid, seed=config.seed)
    bounds.write(config.output_dir / "frame.txt", dictionary)
    return EXIT_OK if bounds.violations == 0 else EXIT_CERTIFICATION_FAILED


def cmd_frame(config: RunConfig) -> int:
    dictionary = _dictionary(config)
    try:
        bounds = frame_bounds(dictionary, dictionary.default_grid(config.grid_q), seed=config.seed)
    except RankDeficiencyError as error:
        logger.error("%s", error)
        return EXIT_CERTIFICATION_FAILED
    bounds.write(config.output_dir / "frame.txt", dictionary)
    return EXIT_OK if bounds.violations == 0 else EXIT_CERTIFICATION_FAILED


def _load_signal(config: RunConfig) -> SampledSignal:
    h = config.b_prime / config.grid_q
    if config.signal is not None:
        return read_signal_csv(config.signal)
    if config.preset == "blocky":
        return gen_blocky(config.seed, config.n_blocks, config.interval, config.b_prime, h)
    return gen_chirp(ChirpParams(config.f0, config.f1), config.interval, h)


def cmd_approx(config: RunConfig) -> int:
    signal = _load_signal(config)
    if signal.domain != config.interval:
        config = config.with_overrides(c=signal.domain[0], d=signal.domain[1]).validate()
    fine = Partition(config.c, config.d, config.b_prime)
    representations = (
        ("basis", build_dictionary(config.m, fine, config.b_prime, config.kind)),
        ("dictionary", _dictionary(config)),
    )
    stop = StopCriteria(config.target_relerr, config.max_atoms)

    rows: List[list] = []
    curves: Dict[str, np.ndarray] = {"signal": signal.samples}
    stagnated = False
    for name, dictionary in representations:
        try:
            result = approximate(dictionary, signal, stop)
            state = result.state
        except StagnationError as error:
            logger.warning("%s: %s", name, error)
            state = error.state
            stagnated = True
        rows.append([name, dictionary.K, state.M, state.relerr])
        curves[name] = state.approximation
        logger.info("%s: %d of %d functions, relerr %.3e", name, state.M, dictionary.K, state.relerr)

    out = config.output_dir
    with open(out / "results.csv", "w", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(["representation", "n_functions_available", "M_used", "relerr"])
        for row in rows:
            writer.writerow([row[0]] + [format_number(value) for value in row[1:]])
    write_table_csv(
        out / "reconstruction.csv",
        ["x", "signal", "basis", "dictionary"],
        np.column_stack([signal.points] + list(curves.values())),
    )
    plots.plot_approximation(signal.points, curves, out / "approximation.svg", signal.provenance)
    return EXIT_STAGNATION if stagnated else EXIT_OK


def cmd_figure1(config: RunConfig) -> int:
    out = config.output_dir
    grid = Grid.for_spacing(config.c, config.d, config.b_prime, config.grid_q)
    coarse = Partition(config.c, config.d, config.b)
    panels = []
    for m, kind in FIGURE1_ROWS:
        basis = sample_atoms(build_basis(SplineSpace(m, coarse), kind), grid)
        dictionary = build_dictionary(m, coarse, config.b_prime, kind).sample(grid)
        for part, values in (("basis", basis), ("dictionary", dictionary)):
            _atom_table(out / f"figure1_m{m}_{kind}_{part}.csv", grid.points, values)
            panels.append((f"{kind.upper()} {part}, m={m}", grid.points, values))
    plots.plot_panels(panels, out / "figure1.svg")
    return EXIT_OK


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "basis": cmd_basis,
    "dict": cmd_dict,
    "certify": cmd_certify,
    "frame": cmd_frame,
    "approx": cmd_approx,
    "figure1": cmd_figure1,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command; returns the exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return EXIT_CONFIG if exit_.code not in (0, None) else EXIT_OK
    _configure_logging(args.verbose)

    try:
        config = config_from_args(args)
        config.output_dir.mkdir(parents=True, exist_ok=True)
        return COMMAND_HANDLERS[config.command](config)
    except (BsdictError, OSError) as error:
        print(f"bsdict: error: {error}", file=sys.stderr)
        return EXIT_CONFIG
