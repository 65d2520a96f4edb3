from __future__ import annotations
import itertools
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import pandas as pd
import torch
from joblib import delayed, Parallel
from pygsr.graph import Graph, knn_geometric_graph, read_edge_list, sample_points
from pygsr.metrics import convergence_rate, ErrorTrace, rate_exponent_fit, steady_state
from pygsr.sampling import build_sampling_plan, sample_plan, SamplingPlan
from pygsr.signals import (
    add_out_of_band,
    generate_time_varying,
    load_intel_lab,
    TimeVaryingSignal,
)
from pygsr.simulator import DistributedLeastSquares
from .config import ConfigError, ExperimentConfig, SweepConfig

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass
class RunRecord:
    """
    The outcome of a single run of an experiment.
    """

    #: The label of the run's artifacts.
    label: str
    #: The seed of the run.
    seed: int
    #: The trace of the run.
    trace: ErrorTrace
    #: The summary written alongside the trace.
    summary: Dict[str, Any]

    @property
    def diverged(self) -> bool:
        """
        Whether the run was stopped because the estimate diverged.
        """
        return bool(self.summary["diverged"])


# -------------------------------------------------------------------------------------------------
# SETUP


def build_graph(config: ExperimentConfig, seed: int) -> Graph:
    """
    Reads the configured edge list or generates a k-nearest-neighbor graph on random points.
    """
    if config.edge_list is not None:
        return read_edge_list(config.edge_list)
    points = sample_points(config.num_vertices, seed)
    return knn_geometric_graph(points, config.k_nn)


def build_plan(config: ExperimentConfig, graph: Graph, seed: int) -> SamplingPlan:
    """
    Builds the sampling plan of the configured sample set or draws a random one.
    """
    omega = config.omega if config.omega_policy == "explicit" else None
    if config.sample_set is not None:
        return build_sampling_plan(
            graph, config.sample_set, omega=omega, laplacian_kind=config.laplacian
        )
    return sample_plan(
        graph,
        config.num_samples,
        seed,
        omega=omega,
        laplacian_kind=config.laplacian,
        max_redraws=config.max_redraws,
    )


def build_truth(config: ExperimentConfig, plan: SamplingPlan, seed: int) -> TimeVaryingSignal:
    """
    Generates the bandlimited true signal of all time steps of the run.
    """
    return generate_time_varying(
        plan.band, plan.basis, config.steps, config.delta, seed, norm=config.signal_norm
    )


def build_initial_estimate(
    config: ExperimentConfig, plan: SamplingPlan, truth: TimeVaryingSignal, seed: int
) -> Optional[torch.Tensor]:
    """
    Returns the configured initial estimate or ``None`` for the zero signal.
    """
    if config.out_of_band_fraction <= 0:
        return None
    return add_out_of_band(
        truth.frame(0), plan.band, plan.basis, config.out_of_band_fraction, seed
    )


# -------------------------------------------------------------------------------------------------
# EXPERIMENTS


def run_experiment(config: ExperimentConfig, output_dir: PathLike) -> List[RunRecord]:
    """
    Runs every variant of an experiment for all of its seeds and writes the artifacts of every
    run plus a summary of the experiment.

    Args:
        config: The experiment.
        output_dir: The directory to write to. Created if it does not exist.

    Returns:
        The records of all runs.
    """
    output = Path(output_dir)
    output.mkdir(parents=True, exist_ok=True)
    records = []
    for variant in config.expand():
        for seed in variant.seeds:
            logger.info("Running '%s' with seed %d...", variant.name, seed)
            graph = build_graph(variant, seed)
            plan = build_plan(variant, graph, seed)
            truth = build_truth(variant, plan, seed)
            initial = build_initial_estimate(variant, plan, truth, seed)
            records.append(execute_run(variant, plan, truth, seed, output, initial))
    _write_summary(config.name, records, output)
    return records


def run_real_data(config: ExperimentConfig, output_dir: PathLike) -> List[RunRecord]:
    """
    Tracks the temperature readings of the Intel Berkeley Research Lab. The graph connects every
    mote to its nearest neighbors and a random subset of motes serves as representatives.

    Args:
        config: The experiment. Must reference the readings and the mote locations.
        output_dir: The directory to write to. Created if it does not exist.

    Returns:
        The records of all runs.
    """
    if config.readings is None or config.locations is None:
        raise ConfigError("real data experiments require readings and locations")
    if config.start_time is None or config.end_time is None:
        raise ConfigError("real data experiments require start_time and end_time")
    output = Path(output_dir)
    output.mkdir(parents=True, exist_ok=True)

    data = load_intel_lab(
        config.readings,
        config.locations,
        config.start_time,
        config.end_time,
        resample_seconds=config.resample_seconds,
        temperature_range=(
            tuple(config.temperature_range)  # type: ignore
            if config.temperature_range is not None
            else None
        ),
    )
    graph = knn_geometric_graph(data.points, config.k_nn)
    steps = config.steps
    if steps > data.signal.num_frames:
        logger.info(
            "Shortening the run to the %d available time steps.", data.signal.num_frames
        )
        steps = data.signal.num_frames

    records = []
    for variant in config.expand():
        for seed in variant.seeds:
            plan = build_plan(variant, graph, seed)
            run = variant.with_overrides(steps=steps)
            records.append(execute_run(run, plan, data.signal, seed, output, None))
    _write_summary(config.name, records, output)
    return records


def execute_run(
    config: ExperimentConfig,
    plan: SamplingPlan,
    truth: TimeVaryingSignal,
    seed: int,
    output: Optional[Path],
    initial_estimate: Optional[torch.Tensor],
    **trainer_params: Any,
) -> RunRecord:
    """
    Runs the distributed reconstruction for a single configuration and seed.

    Args:
        config: The configuration of the run.
        plan: The sampling plan.
        truth: The true signal.
        seed: The seed of the run.
        output: The directory for the run's artifacts. If not provided, nothing is written.
        initial_estimate: The estimate at time step zero, zero if not provided.
        trainer_params: Initialization parameters of the PyTorch Lightning trainer.

    Returns:
        The record of the run.
    """
    estimator = DistributedLeastSquares(
        config.to_schedule(),
        mode=config.mode,
        steady_window=config.steady_window,
        record_estimates=config.record_estimates,
        trainer_params=trainer_params or None,
    )
    estimator.fit(plan, truth, config.steps, initial_estimate)
    trace = estimator.trace_
    label = f"{config.name}_seed{seed}"
    summary = summarize(config, plan, estimator)

    if output is not None:
        trace.write_csv(output / f"{label}.csv")
        sidecar = {
            "name": config.name,
            "seed": seed,
            "mode": config.mode,
            "schedule": {"kind": config.schedule, "mu": config.mu, "beta": config.beta},
            "steps": config.steps,
            "delta": truth.delta,
            "plan": plan.summary(),
            "summary": summary,
        }
        _write_json(sidecar, output / f"{label}.json")
        plan.save(output / f"{label}_plan.json")
        if config.record_estimates:
            TimeVaryingSignal(estimator.estimates_).write_csv(output / f"{label}_estimates.csv")
            TimeVaryingSignal(truth.window(len(trace))).write_csv(output / f"{label}_truth.csv")
    return RunRecord(label, seed, trace, summary)


def summarize(
    config: ExperimentConfig, plan: SamplingPlan, estimator: DistributedLeastSquares
) -> Dict[str, Any]:
    """
    Condenses a fitted run into the quantities reported for every experiment.
    """
    trace = estimator.trace_
    steady = steady_state(trace.total, config.steady_window)
    exponent = None
    if config.schedule == "diminishing" and not estimator.diverged_:
        try:
            exponent = rate_exponent_fit(trace, max(1, len(trace) // 10), len(trace) - 1)
        except ValueError:
            exponent = None
    final_relative = float(trace.relative[-1]) if len(trace) > 0 else None
    return {
        "steady_state_error": steady,
        "convergence_rate": convergence_rate(trace, config.steady_window),
        "rate_exponent": exponent,
        "final_relative_error": final_relative,
        "frame_bounds": {"A": plan.frame_bounds[0], "B": plan.frame_bounds[1]},
        "tau_max": plan.tau_max,
        "num_iter": estimator.num_iter_,
        "num_messages": estimator.num_messages_,
        "converged": estimator.converged_,
        "diverged": estimator.diverged_,
    }


# -------------------------------------------------------------------------------------------------
# SWEEPS


def run_sweep(config: SweepConfig, output_dir: PathLike) -> pd.DataFrame:
    """
    Estimates the probability of convergence for every cell of a parameter grid. Cells whose step
    size and decay factor violate ``mu * beta < 1`` are flagged invalid and not run.

    Args:
        config: The sweep.
        output_dir: The directory to write the CSV heatmap to. Created if it does not exist.

    Returns:
        Data frame with one row per cell and the columns ``delta``, ``mu``, ``beta``, ``valid``,
        ``probability`` and ``num_runs``.
    """
    output = Path(output_dir)
    output.mkdir(parents=True, exist_ok=True)
    cells = list(itertools.product(config.deltas, config.mus, config.betas))
    valid = [mu * beta < 1 for _, mu, beta in cells]
    logger.info(
        "Sweeping %d cells (%d invalid) with %d seeds each...",
        len(cells),
        valid.count(False),
        config.base.repeats,
    )

    jobs = [
        delayed(_sweep_cell)(config.base, mu, beta, delta, config.tolerance)
        for (delta, mu, beta), ok in zip(cells, valid)
        if ok
    ]
    probabilities = iter(Parallel(n_jobs=config.n_jobs)(jobs))

    rows = []
    for (delta, mu, beta), ok in zip(cells, valid):
        rows.append(
            {
                "delta": delta,
                "mu": mu,
                "beta": beta,
                "valid": ok,
                "probability": next(probabilities) if ok else float("nan"),
                "num_runs": config.base.repeats if ok else 0,
            }
        )
    frame = pd.DataFrame(rows)
    frame.to_csv(output / f"{config.name}_regions.csv", index=False, float_format="%.17g")
    return frame


def _sweep_cell(
    base: ExperimentConfig, mu: float, beta: float, delta: float, tolerance: float
) -> float:
    config = base.with_overrides(mu=mu, beta=beta, delta=delta)
    converged = 0
    for seed in config.seeds:
        graph = build_graph(config, seed)
        plan = build_plan(config, graph, seed)
        truth = build_truth(config, plan, seed)
        initial = build_initial_estimate(config, plan, truth, seed)
        record = execute_run(
            config, plan, truth, seed, None, initial, enable_progress_bar=False
        )
        final = record.summary["final_relative_error"]
        if record.summary["converged"] and final is not None and final <= tolerance:
            converged += 1
    return converged / len(config.seeds)


def _write_summary(name: str, records: List[RunRecord], output: Path) -> None:
    summary = {record.label: record.summary for record in records}
    _write_json(summary, output / f"{name}_summary.json")


def _write_json(document: Dict[str, Any], path: Path) -> None:
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
