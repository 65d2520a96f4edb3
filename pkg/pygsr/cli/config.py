from __future__ import annotations
import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union
from pygsr.graph import LaplacianKind
from pygsr.reconstruction import Schedule, ScheduleKind
from pygsr.simulator import SimulationMode

#: The schema version of configuration documents.
CONFIG_VERSION = 1

OmegaPolicy = Literal["footnote_bound", "explicit"]
OmegaPolicy.__doc__ = """
How the cutoff frequency of a sampling plan is chosen.

- **footnote_bound**: The largest cutoff for which the sample set is guaranteed to be a uniqueness
  set, computed from the normalized Laplacian.
- **explicit**: The value of the ``omega`` field. The plan is accepted if its lower frame bound is
  positive.
"""

_PATH_FIELDS = ("edge_list", "readings", "locations")


class ConfigError(ValueError):
    """
    Raised when a configuration document is malformed or inconsistent.
    """


@dataclass
class ExperimentConfig:
    """
    Declarative description of an experiment. Every seed of an experiment builds its own graph,
    sampling plan and true signal.
    """

    #: The schema version of the document.
    version: int = CONFIG_VERSION
    #: The prefix of all artifacts.
    name: str = "experiment"

    #: The number of randomly located vertices of a generated graph.
    num_vertices: int = 100
    #: The number of nearest neighbors every vertex connects to.
    k_nn: int = 4
    #: An edge list to read the graph from instead of generating it.
    edge_list: Optional[str] = None

    #: The number of representatives drawn at random.
    num_samples: int = 20
    #: An explicit set of representatives, overrides ``num_samples``.
    sample_set: Optional[List[int]] = None
    #: How the cutoff frequency is chosen.
    omega_policy: OmegaPolicy = "footnote_bound"
    #: The cutoff frequency for the ``explicit`` policy.
    omega: Optional[float] = None
    #: The Laplacian that defines graph frequencies.
    laplacian: LaplacianKind = "normalized"
    #: The number of times a sample set that is not a uniqueness set is redrawn.
    max_redraws: int = 10

    #: The norm of the true signal in the first time step.
    signal_norm: float = 1.0
    #: The largest change of any entry of the true signal between two time steps.
    delta: float = 0.0
    #: If positive, the initial estimate is the true signal with this fraction of out-of-band
    #: energy. Otherwise, the initial estimate is zero.
    out_of_band_fraction: float = 0.0

    #: The evolution of step size and decay factor.
    schedule: ScheduleKind = "constant"
    #: The (initial) step size.
    mu: float = 0.1
    #: The (initial) decay factor.
    beta: float = 1e-3
    #: The number of updates.
    steps: int = 1000
    #: The execution model of the iteration.
    mode: SimulationMode = "message_passing"
    #: The window for detecting a steady state of the total error.
    steady_window: int = 100
    #: Whether to write the estimates and the true signal of every time step.
    record_estimates: bool = False

    #: The seed of the first repetition.
    seed: int = 0
    #: The number of repetitions with consecutive seeds.
    repeats: int = 1

    #: The Intel Lab readings file of a real data experiment.
    readings: Optional[str] = None
    #: The Intel Lab mote locations file of a real data experiment.
    locations: Optional[str] = None
    #: The first time of a real data experiment.
    start_time: Optional[str] = None
    #: The last time of a real data experiment.
    end_time: Optional[str] = None
    #: The spacing of the time grid of a real data experiment in seconds.
    resample_seconds: int = 30
    #: Readings outside of this range are discarded as sensor malfunctions.
    temperature_range: Optional[List[float]] = None

    #: Overrides that define separate runs of the experiment. A variant may set ``name`` to
    #: label its artifacts.
    variants: List[Dict[str, Any]] = field(default_factory=list)

    def __post_init__(self) -> None:
        _check_version(self.version)
        _require(
            self.num_vertices >= 2, f"num_vertices must be at least 2 but is {self.num_vertices}"
        )
        if self.edge_list is None and self.readings is None:
            _require(
                1 <= self.k_nn < self.num_vertices,
                f"k_nn must lie in [1, {self.num_vertices - 1}] but is {self.k_nn}",
            )
        _require(self.num_samples >= 1, f"num_samples must be positive but is {self.num_samples}")
        _require(
            self.omega_policy in ("footnote_bound", "explicit"),
            f"unknown omega_policy '{self.omega_policy}'",
        )
        if self.omega_policy == "explicit":
            _require(self.omega is not None, "the explicit omega_policy requires omega")
        else:
            _require(
                self.laplacian == "normalized",
                "the footnote_bound omega_policy requires the normalized Laplacian",
            )
        _require(
            self.laplacian in ("normalized", "unnormalized"),
            f"unknown laplacian '{self.laplacian}'",
        )
        _require(
            self.max_redraws >= 0, f"max_redraws must be nonnegative but is {self.max_redraws}"
        )
        _require(
            math.isfinite(self.signal_norm) and self.signal_norm > 0,
            f"signal_norm must be positive but is {self.signal_norm}",
        )
        _require(
            math.isfinite(self.delta) and self.delta >= 0,
            f"delta must be nonnegative but is {self.delta}",
        )
        _require(
            0 <= self.out_of_band_fraction < 1,
            f"out_of_band_fraction must lie in [0, 1) but is {self.out_of_band_fraction}",
        )
        self.to_schedule()
        _require(self.steps >= 1, f"steps must be positive but is {self.steps}")
        _require(
            self.mode in ("message_passing", "closed_form", "centralized"),
            f"unknown mode '{self.mode}'",
        )
        _require(
            self.steady_window >= 1,
            f"steady_window must be positive but is {self.steady_window}",
        )
        _require(self.repeats >= 1, f"repeats must be positive but is {self.repeats}")
        _require(
            self.resample_seconds > 0,
            f"resample_seconds must be positive but is {self.resample_seconds}",
        )
        if self.temperature_range is not None:
            _require(
                len(self.temperature_range) == 2,
                "temperature_range must hold a lower and an upper bound",
            )
        for variant in self.variants:
            _require(isinstance(variant, dict), "every variant must be an object")
            _check_keys(variant, exclude=("version", "variants"), context="variant")

    @property
    def seeds(self) -> List[int]:
        """
        The seeds of all repetitions.
        """
        return list(range(self.seed, self.seed + self.repeats))

    def to_schedule(self) -> Schedule:
        """
        Returns the schedule described by this configuration.
        """
        try:
            return Schedule(self.schedule, self.mu, self.beta)
        except ValueError as error:
            raise ConfigError(str(error)) from error

    def with_overrides(self, **overrides: Any) -> ExperimentConfig:
        """
        Returns a copy with the provided fields replaced. Fields set to ``None`` are kept.
        """
        _check_keys(overrides, exclude=("version",), context="override")
        changes = {key: value for key, value in overrides.items() if value is not None}
        return dataclasses.replace(self, **changes)

    def expand(self) -> List[ExperimentConfig]:
        """
        Returns one configuration per variant, or this configuration if there are no variants.
        Variants without a name are labeled by their position.
        """
        if not self.variants:
            return [self]
        expanded = []
        for i, variant in enumerate(self.variants):
            overrides = {"name": f"{self.name}_{i}", **variant}
            expanded.append(dataclasses.replace(self, variants=[], **overrides))
        return expanded


@dataclass
class SweepConfig:
    """
    Declarative description of a parameter sweep. Every cell of the grid over step size, decay
    factor and signal variation runs the base experiment for all of its seeds.
    """

    #: The schema version of the document.
    version: int = CONFIG_VERSION
    #: The prefix of all artifacts.
    name: str = "sweep"
    #: The experiment run in every cell.
    base: ExperimentConfig = field(default_factory=ExperimentConfig)
    #: The step sizes of the grid.
    mus: List[float] = field(default_factory=lambda: [0.1])
    #: The decay factors of the grid.
    betas: List[float] = field(default_factory=lambda: [1e-3])
    #: The signal variations of the grid.
    deltas: List[float] = field(default_factory=lambda: [0.0])
    #: A run converges if it stays bounded, reaches a steady state and its final relative error
    #: does not exceed this tolerance.
    tolerance: float = 0.1
    #: The number of cells run in parallel.
    n_jobs: int = 1

    def __post_init__(self) -> None:
        _check_version(self.version)
        if isinstance(self.base, dict):
            _check_keys(self.base, exclude=("variants",), context="base experiment")
            self.base = ExperimentConfig(**self.base)
        _require(bool(self.mus and self.betas and self.deltas), "every grid axis needs a value")
        for name, values in (("mus", self.mus), ("betas", self.betas), ("deltas", self.deltas)):
            _require(
                all(math.isfinite(v) and v >= 0 for v in values),
                f"{name} must hold finite, nonnegative values",
            )
        _require(self.tolerance > 0, f"tolerance must be positive but is {self.tolerance}")
        _require(self.n_jobs != 0, "n_jobs must not be zero")


# -------------------------------------------------------------------------------------------------
# LOADING


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Loads an experiment configuration from a JSON document. Relative file references are
    resolved against the document's directory.

    Args:
        path: The JSON document.

    Returns:
        The validated configuration.
    """
    document = _read_document(path)
    _check_keys(document, exclude=(), context="experiment")
    _resolve_paths(document, Path(path).parent)
    return _construct(ExperimentConfig, document, path)


def load_sweep_config(path: Union[str, Path]) -> SweepConfig:
    """
    Loads a sweep configuration from a JSON document. Relative file references of the base
    experiment are resolved against the document's directory.

    Args:
        path: The JSON document.

    Returns:
        The validated configuration.
    """
    document = _read_document(path)
    known = {f.name for f in dataclasses.fields(SweepConfig)}
    unknown = sorted(set(document) - known)
    _require(not unknown, f"unknown keys {unknown} in sweep configuration")
    base = document.get("base", {})
    _require(isinstance(base, dict), "the base experiment must be an object")
    _resolve_paths(base, Path(path).parent)
    return _construct(SweepConfig, document, path)


def _read_document(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"configuration file '{path}' does not exist")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as error:
        raise ConfigError(f"configuration file '{path}' is not valid JSON: {error}") from error
    _require(isinstance(document, dict), f"configuration file '{path}' must hold an object")
    _check_version(document.get("version"))
    return document


def _construct(cls: Any, document: Dict[str, Any], path: Union[str, Path]) -> Any:
    try:
        return cls(**document)
    except TypeError as error:
        raise ConfigError(f"configuration file '{path}' is malformed: {error}") from error


def _resolve_paths(document: Dict[str, Any], directory: Path) -> None:
    for key in _PATH_FIELDS:
        value = document.get(key)
        if isinstance(value, str) and not Path(value).is_absolute():
            document[key] = str(directory / value)


def _check_keys(document: Dict[str, Any], exclude: tuple, context: str) -> None:
    known = {f.name for f in dataclasses.fields(ExperimentConfig)} - set(exclude)
    unknown = sorted(set(document) - known)
    _require(not unknown, f"unknown keys {unknown} in {context} configuration")


def _check_version(version: Any) -> None:
    _require(
        version == CONFIG_VERSION,
        f"configuration version must be {CONFIG_VERSION} but is {version!r}",
    )


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)
