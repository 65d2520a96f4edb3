from __future__ import annotations
from dataclasses import dataclass
from typing import Sequence, Union
import numpy as np
import torch
from scipy.sparse import csgraph, csr_matrix  # type: ignore
from .graph import Graph


class DisconnectedGraphError(ValueError):
    """
    Raised when an operation requires a connected graph but some vertex pair is unreachable.
    """


@dataclass(frozen=True)
class DelayMatrix:
    """
    Transmission delays between all pairs of vertices, measured in hops. A message needs
    ``tau[u, v]`` time steps to travel from vertex ``u`` to vertex ``v``.
    """

    #: Symmetric tensor of shape ``[n, n]`` with nonnegative integer hop counts and a zero
    #: diagonal.
    tau: torch.Tensor
    #: The maximal delay. For a delay matrix restricted to a sample set, this is the maximum over
    #: rows of the sample set only.
    tau_max: int

    @classmethod
    def zeros(cls, n: int) -> DelayMatrix:
        """
        Delays of a network in which every message arrives instantly.
        """
        return cls(torch.zeros(n, n, dtype=torch.long), 0)

    def restricted_to(self, sample_set: Union[torch.Tensor, Sequence[int]]) -> DelayMatrix:
        """
        Returns the same delays with ``tau_max`` taken over the rows of the provided vertices.
        """
        rows = torch.as_tensor(sample_set, dtype=torch.long)
        tau_max = int(self.tau[rows].max()) if rows.numel() > 0 else 0
        return DelayMatrix(self.tau, tau_max)


def hop_distances(graph: Graph) -> DelayMatrix:
    """
    Computes the unweighted shortest-path distance between all pairs of vertices via
    breadth-first search.

    Args:
        graph: The graph. Must be connected.

    Returns:
        The delay matrix whose ``tau_max`` is the diameter of the graph.
    """
    distances = csgraph.shortest_path(
        csr_matrix(graph.adjacency.numpy()), directed=False, unweighted=True
    )
    unreachable = np.argwhere(np.isinf(distances))
    if unreachable.shape[0] > 0:
        u, v = unreachable[0].tolist()
        raise DisconnectedGraphError(f"graph is disconnected, vertex {v} is unreachable from {u}")

    tau = torch.as_tensor(distances.astype(np.int64))
    return DelayMatrix(tau, int(tau.max()) if graph.n > 0 else 0)
