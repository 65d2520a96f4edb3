from .config import (
    CONFIG_VERSION,
    ConfigError,
    ExperimentConfig,
    load_experiment_config,
    load_sweep_config,
    OmegaPolicy,
    SweepConfig,
)
from .experiments import (
    build_graph,
    build_initial_estimate,
    build_plan,
    build_truth,
    execute_run,
    run_experiment,
    run_real_data,
    run_sweep,
    RunRecord,
    summarize,
)
from .main import build_parser, main

__all__ = [
    "CONFIG_VERSION",
    "ConfigError",
    "ExperimentConfig",
    "load_experiment_config",
    "load_sweep_config",
    "OmegaPolicy",
    "SweepConfig",
    "build_graph",
    "build_initial_estimate",
    "build_plan",
    "build_truth",
    "execute_run",
    "run_experiment",
    "run_real_data",
    "run_sweep",
    "RunRecord",
    "summarize",
    "build_parser",
    "main",
]
