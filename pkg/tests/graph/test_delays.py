# pylint: disable=missing-function-docstring
import pytest
import torch
from pygsr.graph import DelayMatrix, DisconnectedGraphError, Graph, hop_distances
from tests._data.graphs import complete_graph, connected_knn_graph, path_graph


def _matrix_power_distances(graph: Graph) -> torch.Tensor:
    # Distance d is the first power of the (reflexive) adjacency that reaches a vertex
    step = (graph.adjacency > 0) | torch.eye(graph.n, dtype=torch.bool)
    reached = torch.eye(graph.n, dtype=torch.bool)
    distances = torch.zeros(graph.n, graph.n, dtype=torch.long)
    for d in range(1, graph.n):
        following = (reached.double() @ step.double()) > 0
        distances[following & ~reached] = d
        reached = following
    return distances


def test_hop_distances_path():
    delays = hop_distances(path_graph(5))
    assert delays.tau_max == 4
    assert delays.tau[0].tolist() == [0, 1, 2, 3, 4]
    assert delays.tau[2].tolist() == [2, 1, 0, 1, 2]


def test_hop_distances_complete_graph():
    delays = hop_distances(complete_graph(4))
    assert delays.tau_max == 1
    assert torch.equal(delays.tau, 1 - torch.eye(4, dtype=torch.long))


def test_hop_distances_ignore_weights():
    graph = Graph.from_edges(3, [(0, 1, 100.0), (1, 2, 0.01), (0, 2, 0.001)])
    assert hop_distances(graph).tau_max == 1


@pytest.mark.parametrize(("n", "k", "seed"), [(40, 3, 0), (100, 4, 1), (60, 5, 2)])
def test_hop_distances_knn_graph(n: int, k: int, seed: int):
    graph = connected_knn_graph(n, k, seed)
    delays = hop_distances(graph)

    assert torch.equal(delays.tau, _matrix_power_distances(graph))
    assert torch.equal(delays.tau, delays.tau.T)
    assert (delays.tau.diagonal() == 0).all()
    assert delays.tau_max == int(delays.tau.max())


@pytest.mark.parametrize(("n", "k", "seed"), [(30, 3, 3), (50, 4, 4)])
def test_hop_distances_satisfy_triangle_inequality(n: int, k: int, seed: int):
    tau = hop_distances(connected_knn_graph(n, k, seed)).tau
    # Entry [u, v, w] compares tau(u, w) against the detour over v
    direct = tau.unsqueeze(1)
    detour = tau.unsqueeze(2) + tau.unsqueeze(0)
    assert (direct <= detour).all()


def test_hop_distances_disconnected():
    graph = Graph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(DisconnectedGraphError, match="disconnected"):
        hop_distances(graph)


def test_delay_matrix_restriction():
    delays = hop_distances(path_graph(5))
    assert delays.restricted_to([2]).tau_max == 2
    assert delays.restricted_to([0, 2]).tau_max == 4
    assert torch.equal(delays.restricted_to([2]).tau, delays.tau)

    zeros = DelayMatrix.zeros(5)
    assert zeros.tau_max == 0
    assert (zeros.tau == 0).all()
