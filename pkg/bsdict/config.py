"""
Run configuration of the command-line commands.

A `RunConfig` is assembled from an optional JSON file and the command-line flags,
flags taking precedence; both use the field names of `RunConfig` as keys.
"""

# Standard library
from __future__ import annotations
from dataclasses import asdict, dataclass, fields, replace
from functools import partial
from pathlib import Path
from typing import Optional, Tuple, Union
import json
import logging

# Self
from .data.defaults import grid as grid_defaults, pursuit as pursuit_defaults
from .data.presets import presets
from .errors import BsdictError, ConfigError
from .helpers import as_order, integer_ratio
from .spline import BasisKind, Partition, SplineSpace


__all__ = ("RunConfig", "load_config_file", "predefined", "COMMANDS")

logger = logging.getLogger(__name__)

COMMANDS = ("basis", "dict", "certify", "frame", "approx", "figure1")
SIGNAL_PRESETS = ("blocky", "chirp")


@dataclass(frozen=True)
class RunConfig:
    """
    Parameters of one command.

    Parameters
    ----------
    command : str
        One of "basis", "dict", "certify", "frame", "approx", "figure1".
    m : int
        Spline order.
    c, d : float
        Interval [c, d].
    b : float
        Coarse spacing (the basis spacing for "basis").
    b_prime : float
        Fine spacing of the dictionary shifts.
    grid_q : int
        Working grid step h = b' / grid_q (b / grid_q for "basis").
    seed : int
        Seed of random signals.
    max_atoms : int
        Bound on the atoms selected by pursuit; None for no bound.
    target_relerr : float
        Target relative error of pursuit.
    kind : str
        "esep" or "epkb".
    out : str
        Output directory.
    signal : str
        CSV file with the signal to approximate.
    preset : str
        Signal generator for "approx" ("blocky" or "chirp"), or the name of a
        reproduced experiment.
    n_blocks : int
        Blocks of a blocky signal.
    f0, f1 : float
        Chirp frequencies.
    """

    command: str
    m: Optional[int] = None
    c: float = 0.0
    d: float = 4.0
    b: Optional[float] = None
    b_prime: Optional[float] = None
    grid_q: int = grid_defaults["q"]
    seed: int = 0
    max_atoms: Optional[int] = None
    target_relerr: float = pursuit_defaults["target_relerr"]
    kind: str = BasisKind.ESEP.value
    out: str = "."
    signal: Optional[str] = None
    preset: Optional[str] = None
    n_blocks: int = 10
    f0: float = 0.25
    f1: float = 2.5

    @classmethod
    def field_names(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_sources(cls, file_dict: Optional[dict] = None, flag_dict: Optional[dict] = None) -> RunConfig:
        """
        Merge the entries of a config file with the command-line flags; flags set to
        None are treated as absent.
        """
        merged = {}
        for source, values in (("config file", file_dict or {}), ("flags", flag_dict or {})):
            unknown = set(values) - set(cls.field_names())
            if unknown:
                raise ConfigError(f"Unknown keys in {source}: {', '.join(sorted(unknown))}.")
            merged.update({key: value for key, value in values.items() if value is not None})
        if "command" not in merged:
            raise ConfigError("No command given.")
        return cls(**merged)

    @property
    def interval(self) -> Tuple[float, float]:
        return self.c, self.d

    @property
    def output_dir(self) -> Path:
        return Path(self.out)

    def with_overrides(self, **changes) -> RunConfig:
        return replace(self, **{key: value for key, value in changes.items() if value is not None})

    def as_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> RunConfig:
        """
        Check the preconditions of the command.

        Returns
        -------
            RunConfig
            The config itself.

        Raises
        ------
        ConfigError
            With a single diagnostic for the first violated precondition.
        """
        try:
            self._validate()
        except ConfigError:
            raise
        except (BsdictError, TypeError) as error:
            raise ConfigError(str(error)) from error
        return self

    def _validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}.")
        if not self.d > self.c:
            raise ConfigError(f"The interval [{self.c}, {self.d}] is empty.")
        if int(self.grid_q) != self.grid_q or self.grid_q < 1:
            raise ConfigError(f"The grid factor must be a positive integer, got {self.grid_q}.")
        if self.kind not in {k.value for k in BasisKind}:
            raise ConfigError(f"Unknown basis kind {self.kind!r}; expected 'esep' or 'epkb'.")
        if self.command == "figure1":
            self._require("b", "b_prime")
            integer_ratio(self.b, self.b_prime, "b / b'", ConfigError)
            return

        self._require("m", "b")
        m = as_order(self.m)
        if not self.b > 0:
            raise ConfigError(f"b must be positive, got {self.b}.")
        SplineSpace(m, Partition(self.c, self.d, self.b))
        if self.command == "basis":
            return

        self._require("b_prime")
        if not self.b_prime > 0:
            raise ConfigError(f"b' must be positive, got {self.b_prime}.")
        if integer_ratio(self.b, self.b_prime, "b / b'", ConfigError) < 1:
            raise ConfigError(f"b' = {self.b_prime} exceeds b = {self.b}.")
        integer_ratio(self.d - self.c, self.b_prime, "interval length / b'", ConfigError)
        if self.command != "approx":
            return

        if (self.signal is None) == (self.preset is None):
            raise ConfigError("approx needs exactly one of a signal file or a signal preset.")
        if self.preset is not None and self.preset not in SIGNAL_PRESETS:
            raise ConfigError(f"Unknown signal preset {self.preset!r}; expected one of {SIGNAL_PRESETS}.")
        if self.signal is not None and not Path(self.signal).is_file():
            raise ConfigError(f"Signal file {self.signal} does not exist.")
        if not self.target_relerr >= 0:
            raise ConfigError(f"The target error must be non-negative, got {self.target_relerr}.")
        if self.max_atoms is not None and self.max_atoms < 1:
            raise ConfigError(f"max_atoms must be positive, got {self.max_atoms}.")
        if self.n_blocks < 1:
            raise ConfigError(f"A blocky signal needs at least one block, got {self.n_blocks}.")

    def _require(self, *names: str):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"{self.command} needs {', '.join('--' + n.replace('_', '') for n in missing)}.")


def load_config_file(path: Union[str, Path]) -> dict:
    """
    Read a JSON config file whose top level is an object keyed by `RunConfig` field names.
    """
    path = Path(path)
    try:
        content = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as error:
        raise ConfigError(f"Cannot read config file {path}: {error}") from error
    if not isinstance(content, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object.")
    return content


class PredefinedPresets:
    """
    Container class for the experiment presets as `RunConfig` objects.
    Each preset is defined as a property in this class, which returns a new
    `RunConfig` object for that preset, each time it is called.
    """

    def __init__(self, presets_dict):
        def preset_gen(self, data):
            return RunConfig(**data)

        self.names = tuple(presets_dict)
        for name, data in presets_dict.items():
            setattr(PredefinedPresets, name, property(partial(preset_gen, data=data)))

    def get(self, name: str) -> RunConfig:
        if name not in self.names:
            raise ConfigError(f"Unknown preset {name!r}; expected one of {self.names}.")
        return getattr(self, name)


# Instantiate the container class,
# this can now be directly imported whenever needed.
predefined = PredefinedPresets(presets)
