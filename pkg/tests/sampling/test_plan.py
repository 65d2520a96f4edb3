# pylint: disable=missing-function-docstring
import json
from pathlib import Path
import numpy as np
import pytest
import torch
from pygsr.graph import DisconnectedGraphError, Graph, hop_distances, laplacian
from pygsr.sampling import (
    build_sampling_plan,
    cutoff_bound,
    NonUniqueSamplingSetError,
    random_sample_set,
    sample_plan,
    UNIQUENESS_TOLERANCE,
    verify_uniqueness,
)
from pygsr.spectral import BandSpec, eigendecompose
from tests._data.graphs import connected_knn_graph, path_graph, random_plan

# -------------------------------------------------------------------------------------------------
# CUTOFF BOUND


def test_cutoff_bound_full_sample_set():
    matrix = laplacian(connected_knn_graph(20, 4, 0))
    expected = float(torch.linalg.eigvalsh(matrix)[-1])
    assert cutoff_bound(matrix, torch.arange(20)) == pytest.approx(expected)
    with pytest.raises(ValueError):
        cutoff_bound(matrix, [])


@pytest.mark.parametrize(("n", "m", "seed"), [(50, 10, 0), (100, 20, 1), (80, 40, 2)])
def test_cutoff_bound_yields_uniqueness_sets(n: int, m: int, seed: int):
    graph = connected_knn_graph(n, 4, seed)
    matrix = laplacian(graph)
    basis = eigendecompose(matrix)
    sample_set = random_sample_set(n, m, seed)

    omega = cutoff_bound(matrix, sample_set)
    assert omega > 0
    result = verify_uniqueness(sample_set, BandSpec.from_cutoff(omega, basis), basis)
    assert result.is_unique
    assert result.lower_bound > UNIQUENESS_TOLERANCE


@pytest.mark.parametrize("seed", range(5))
def test_cutoff_bound_grows_with_sample_set(seed: int):
    matrix = laplacian(connected_knn_graph(40, 4, seed))
    order = torch.randperm(40, generator=torch.Generator().manual_seed(seed))
    bounds = [cutoff_bound(matrix, order[:m]) for m in [4, 8, 16, 24, 32, 39]]
    for smaller, larger in zip(bounds, bounds[1:]):
        assert smaller <= larger + 1e-12


# -------------------------------------------------------------------------------------------------
# UNIQUENESS


def test_verify_uniqueness_rejects_small_sample_sets():
    basis = eigendecompose(laplacian(path_graph(6)))
    band = BandSpec.lowest(3, basis)
    assert not verify_uniqueness([0, 5], band, basis).is_unique
    assert not verify_uniqueness([], band, basis).is_unique
    assert verify_uniqueness(list(range(6)), band, basis).lower_bound == pytest.approx(1)


@pytest.mark.parametrize("seed", range(100))
def test_uniqueness_agrees_with_rank(seed: int):
    generator = torch.Generator().manual_seed(seed)
    n = int(torch.randint(10, 40, (1,), generator=generator))
    graph = connected_knn_graph(n, 4, seed)
    basis = eigendecompose(laplacian(graph))
    num_samples = int(torch.randint(1, n + 1, (1,), generator=generator))
    sample_set = random_sample_set(n, num_samples, seed)
    band = BandSpec.from_cutoff(float(torch.rand(1, generator=generator)) * 2, basis)

    result = verify_uniqueness(sample_set, band, basis)
    rows = basis.band_vectors(band)[sample_set].numpy()
    rank = np.linalg.matrix_rank(rows, tol=UNIQUENESS_TOLERANCE**0.5)
    assert result.is_unique == (rank == band.size)
    assert result.lower_bound >= 0
    assert np.linalg.eigvalsh(rows.T @ rows)[-1] <= 1 + 1e-9


# -------------------------------------------------------------------------------------------------
# SAMPLE SETS


def test_random_sample_set():
    sample_set = random_sample_set(50, 20, 3)
    assert sample_set.numel() == 20
    assert sample_set.unique().numel() == 20
    assert torch.equal(sample_set, sample_set.sort().values)
    assert torch.equal(sample_set, random_sample_set(50, 20, 3))
    assert random_sample_set(50, 0, 3).numel() == 0
    with pytest.raises(ValueError):
        random_sample_set(5, 6, 0)


# -------------------------------------------------------------------------------------------------
# PLANS


def test_build_sampling_plan():
    graph = connected_knn_graph(60, 4, 0)
    plan = build_sampling_plan(graph, [40, 3, 17, 3, 25, 8, 51, 33])

    assert plan.sample_set.tolist() == [3, 8, 17, 25, 33, 40, 51]
    assert plan.num_samples == 7
    assert plan.num_vertices == 60
    assert plan.frame.size() == torch.Size([7, 60])
    assert plan.band_vectors.size() == torch.Size([60, plan.band.size])
    assert plan.frame_bounds[0] > UNIQUENESS_TOLERANCE
    assert plan.omega == pytest.approx(cutoff_bound(laplacian(graph), plan.sample_set))

    tau = hop_distances(graph).tau
    assert torch.equal(plan.sample_delays, tau[plan.sample_set])
    assert plan.tau_max == int(tau[plan.sample_set].max())

    instant = plan.without_delays()
    assert instant.tau_max == 0
    assert (instant.sample_delays == 0).all()
    assert torch.equal(instant.frame, plan.frame)


def test_build_sampling_plan_with_explicit_cutoff():
    graph = connected_knn_graph(40, 4, 1)
    basis = eigendecompose(laplacian(graph))
    omega = BandSpec.lowest(3, basis).omega
    plan = build_sampling_plan(graph, list(range(0, 40, 4)), omega=omega, basis=basis)
    assert plan.band.size == 3
    assert plan.omega == omega


def test_build_sampling_plan_with_unnormalized_laplacian():
    graph = connected_knn_graph(40, 4, 2)
    basis = eigendecompose(laplacian(graph, "unnormalized"))
    omega = BandSpec.lowest(4, basis).omega
    plan = build_sampling_plan(
        graph, list(range(0, 40, 3)), omega=omega, laplacian_kind="unnormalized"
    )
    assert plan.band.size == 4
    assert plan.laplacian_kind == "unnormalized"
    with pytest.raises(ValueError):
        build_sampling_plan(graph, list(range(0, 40, 3)), laplacian_kind="unnormalized")


def test_build_sampling_plan_rejects_invalid_sample_sets():
    graph = connected_knn_graph(30, 4, 3)
    with pytest.raises(NonUniqueSamplingSetError):
        build_sampling_plan(graph, [])
    with pytest.raises(ValueError):
        build_sampling_plan(graph, [0, 30])
    with pytest.raises(NonUniqueSamplingSetError):
        build_sampling_plan(graph, [0, 1], omega=2.0)


def test_build_sampling_plan_rejects_disconnected_graphs():
    graph = Graph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(DisconnectedGraphError):
        build_sampling_plan(graph, [0, 2])


def test_plan_summary(tmp_path: Path):
    plan = random_plan(40, 10, 0)
    summary = plan.summary()
    assert summary["sample_set"] == plan.sample_set.tolist()
    assert summary["band_size"] == plan.band.size
    assert summary["frame_bounds"]["A"] == plan.frame_bounds[0]
    assert summary["tau_max"] == plan.tau_max

    path = tmp_path / "plan.json"
    plan.save(path)
    assert json.loads(path.read_text(encoding="utf-8")) == summary


def test_sample_plan_redraws():
    graph = connected_knn_graph(30, 4, 4)
    basis = eigendecompose(laplacian(graph))
    omega = BandSpec.lowest(5, basis).omega

    plan = sample_plan(graph, 5, 0, omega=omega, max_redraws=50)
    assert plan.num_samples == 5
    assert plan.band.size == 5
    assert plan.frame_bounds[0] > UNIQUENESS_TOLERANCE

    with pytest.raises(NonUniqueSamplingSetError):
        sample_plan(graph, 4, 0, omega=omega)


def test_sample_plan_is_deterministic():
    graph = connected_knn_graph(50, 4, 5)
    first = sample_plan(graph, 10, 7)
    second = sample_plan(graph, 10, 7)
    assert torch.equal(first.sample_set, second.sample_set)
    assert first.omega == second.omega
