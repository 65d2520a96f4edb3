# pylint: disable=missing-function-docstring
import json
import math
import os
from pathlib import Path
from typing import Any, Dict
import pandas as pd
import pytest
from pygsr.cli import (
    ExperimentConfig,
    load_experiment_config,
    main,
    run_experiment,
    run_real_data,
    run_sweep,
    SweepConfig,
)
from pygsr.graph import read_edge_list, write_edge_list
from pygsr.metrics import ErrorTrace, steady_state
from tests._data.graphs import connected_knn_graph

CONFIGS = Path(__file__).parents[2] / "configs"
INTEL_LAB = Path(__file__).parents[1] / "_data" / "intel_lab"


@pytest.fixture(name="edge_list")
def fixture_edge_list(tmp_path: Path) -> Path:
    path = tmp_path / "graph.txt"
    write_edge_list(connected_knn_graph(30, 4, 0), path)
    return path


def _write(path: Path, document: Dict[str, Any]) -> Path:
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


# -------------------------------------------------------------------------------------------------
# EXPERIMENTS


def test_run_experiment_writes_artifacts(tmp_path: Path, edge_list: Path):
    config = ExperimentConfig(
        name="small",
        edge_list=str(edge_list),
        num_samples=12,
        steps=20,
        repeats=2,
        record_estimates=True,
        variants=[{"mode": "message_passing"}, {"name": "closed", "mode": "closed_form"}],
    )
    records = run_experiment(config, tmp_path / "out")
    assert [record.label for record in records] == [
        "small_0_seed0",
        "small_0_seed1",
        "closed_seed0",
        "closed_seed1",
    ]

    output = tmp_path / "out"
    for record in records:
        trace = ErrorTrace.read_csv(output / f"{record.label}.csv")
        assert len(trace) == 21
        sidecar = json.loads((output / f"{record.label}.json").read_text(encoding="utf-8"))
        assert sidecar["seed"] == record.seed
        assert sidecar["plan"]["tau_max"] == record.summary["tau_max"]
        plan = json.loads((output / f"{record.label}_plan.json").read_text(encoding="utf-8"))
        assert len(plan["sample_set"]) == 12
        estimates = pd.read_csv(output / f"{record.label}_estimates.csv")
        assert len(estimates) == 21 * 30
        assert (output / f"{record.label}_truth.csv").exists()

    summary = json.loads((output / "small_summary.json").read_text(encoding="utf-8"))
    assert set(summary) == {record.label for record in records}
    assert summary["closed_seed0"]["num_messages"] == 0

    # Message passing and its closed form share every estimate
    passing = pd.read_csv(output / "small_0_seed0.csv")
    closed = pd.read_csv(output / "closed_seed0.csv")
    assert (passing["total_error"] - closed["total_error"]).abs().max() < 1e-12


def test_run_experiment_is_deterministic(tmp_path: Path, edge_list: Path):
    config = ExperimentConfig(
        name="repeat", edge_list=str(edge_list), num_samples=12, steps=20, delta=0.01
    )
    run_experiment(config, tmp_path / "first")
    run_experiment(config, tmp_path / "second")
    first = sorted(path.name for path in (tmp_path / "first").iterdir())
    assert first == sorted(path.name for path in (tmp_path / "second").iterdir())
    for name in first:
        assert (tmp_path / "first" / name).read_bytes() == (
            tmp_path / "second" / name
        ).read_bytes()


def test_run_experiment_with_out_of_band_initial_estimate(tmp_path: Path, edge_list: Path):
    config = ExperimentConfig(
        name="perturbed",
        edge_list=str(edge_list),
        num_samples=12,
        steps=5,
        out_of_band_fraction=0.2,
    )
    (record,) = run_experiment(config, tmp_path)
    assert float(record.trace.out_band[0]) > 0
    assert float(record.trace.total[0]) < 1


# -------------------------------------------------------------------------------------------------
# SWEEPS


def test_run_sweep(tmp_path: Path):
    graph = tmp_path / "graph.txt"
    write_edge_list(connected_knn_graph(20, 4, 0), graph)
    config = SweepConfig(
        name="regions",
        base=ExperimentConfig(
            edge_list=str(graph),
            sample_set=list(range(20)),
            steps=200,
            mode="closed_form",
            steady_window=50,
            repeats=2,
        ),
        mus=[0.0, 0.5],
        betas=[0.01, 4.0],
    )
    frame = run_sweep(config, tmp_path)
    assert list(frame.columns) == ["delta", "mu", "beta", "valid", "probability", "num_runs"]
    assert frame["valid"].tolist() == [True, True, True, False]
    assert frame["probability"].tolist()[:3] == [0.0, 0.0, 1.0]
    assert math.isnan(frame["probability"].tolist()[3])
    assert frame["num_runs"].tolist() == [2, 2, 2, 0]

    written = pd.read_csv(tmp_path / "regions_regions.csv")
    assert len(written) == 4


# -------------------------------------------------------------------------------------------------
# REAL DATA


def test_run_real_data(tmp_path: Path):
    config = ExperimentConfig(
        name="lab",
        readings=str(INTEL_LAB / "data.txt"),
        locations=str(INTEL_LAB / "mote_locs.txt"),
        start_time="2004-02-28 01:00:00",
        end_time="2004-02-28 01:01:00",
        k_nn=2,
        num_samples=2,
        steps=100,
    )
    (record,) = run_real_data(config, tmp_path)
    assert len(record.trace) == 3
    assert (tmp_path / "lab_seed0.csv").exists()
    assert (tmp_path / "lab_summary.json").exists()


@pytest.mark.skipif(
    "PYGSR_INTEL_LAB" not in os.environ, reason="Intel Lab data directory not provided"
)
def test_real_data_tracks_temperatures(tmp_path: Path):
    directory = Path(os.environ["PYGSR_INTEL_LAB"])
    config = load_experiment_config(CONFIGS / "real_data.json").with_overrides(
        readings=str(directory / "data.txt"), locations=str(directory / "mote_locs.txt")
    )
    (record,) = run_real_data(config, tmp_path)
    assert not record.diverged
    steady = steady_state(record.trace.relative, config.steady_window, rtol=0.1)
    assert steady is not None
    assert steady < 0.1


# -------------------------------------------------------------------------------------------------
# COMMAND LINE


def test_main_gen_graph(tmp_path: Path):
    status = main(
        [
            "--quiet",
            "gen-graph",
            "--n",
            "30",
            "--k",
            "4",
            "--out",
            str(tmp_path / "graph.txt"),
            "--spectrum",
            str(tmp_path / "spectrum.csv"),
        ]
    )
    assert status == 0
    assert read_edge_list(tmp_path / "graph.txt").n == 30
    assert len(pd.read_csv(tmp_path / "spectrum.csv")) > 0


def test_main_plan(tmp_path: Path, edge_list: Path):
    out = tmp_path / "plan.json"
    args = ["--quiet", "plan", "--graph", str(edge_list)]
    assert main([*args, "--m", "10", "--out", str(out)]) == 0
    plan = json.loads(out.read_text(encoding="utf-8"))
    assert len(plan["sample_set"]) == 10
    assert plan["frame_bounds"]["A"] > 0

    assert main([*args, "--m", "1", "--omega", "1.9", "--out", str(out)]) == 2


def test_main_run(tmp_path: Path, edge_list: Path):
    config = _write(
        tmp_path / "experiment.json",
        {"version": 1, "name": "cli", "edge_list": "graph.txt", "num_samples": 12, "steps": 10},
    )
    out = tmp_path / "results"
    args = ["--quiet", "run", str(config), "--out", str(out), "--seed", "3"]
    assert main([*args, "--mode", "closed_form", "--steps", "15"]) == 0
    assert len(ErrorTrace.read_csv(out / "cli_seed3.csv")) == 16
    assert edge_list.exists()


def test_main_run_reports_divergence(tmp_path: Path, edge_list: Path):
    config = _write(
        tmp_path / "experiment.json",
        {
            "version": 1,
            "edge_list": str(edge_list),
            "num_samples": 12,
            "mu": 50.0,
            "beta": 0.0,
            "steps": 200,
        },
    )
    assert main(["--quiet", "run", str(config), "--out", str(tmp_path / "results")]) == 2


def test_main_rejects_invalid_configs(tmp_path: Path):
    config = _write(tmp_path / "experiment.json", {"version": 1, "mu": 2.0, "beta": 0.6})
    assert main(["--quiet", "run", str(config)]) == 1
    assert main(["--quiet", "run", str(tmp_path / "missing.json")]) == 1
    assert main(["--quiet", "sweep", str(config)]) == 1


def test_main_real_data(tmp_path: Path):
    config = _write(
        tmp_path / "lab.json",
        {
            "version": 1,
            "name": "lab",
            "start_time": "2004-02-28 01:00:00",
            "end_time": "2004-02-28 01:01:00",
            "k_nn": 2,
            "num_samples": 2,
        },
    )
    args = [
        "--quiet",
        "real-data",
        str(config),
        "--out",
        str(tmp_path / "results"),
        "--readings",
        str(INTEL_LAB / "data.txt"),
        "--locations",
        str(INTEL_LAB / "mote_locs.txt"),
    ]
    assert main(args) == 0
    assert (tmp_path / "results" / "lab_seed0.csv").exists()
    assert main(args[:5]) == 1
