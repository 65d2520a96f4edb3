from __future__ import annotations
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Tuple, Union
import torch
from scipy.sparse import csgraph, csr_matrix  # type: ignore
from .types import LaplacianKind

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    """
    A weighted undirected graph on the vertices ``0, ..., n - 1``.

    The graph is immutable. All views (edges, degrees, Laplacians) are derived from the symmetric
    adjacency matrix.
    """

    #: The number of vertices.
    n: int
    #: The symmetric weight matrix of shape ``[n, n]`` with zero diagonal. Entries are nonnegative
    #: and an entry is positive if and only if the corresponding edge exists.
    adjacency: torch.Tensor

    def __post_init__(self) -> None:
        adjacency = torch.as_tensor(self.adjacency, dtype=torch.float64).clone()
        if adjacency.shape != (self.n, self.n):
            raise ValueError(
                f"adjacency must have shape [{self.n}, {self.n}] but has shape "
                f"{list(adjacency.shape)}"
            )
        if not torch.isfinite(adjacency).all() or (adjacency < 0).any():
            raise ValueError("adjacency must contain finite, nonnegative weights")
        if (adjacency.diagonal() != 0).any():
            raise ValueError("adjacency must have a zero diagonal, self-loops are not supported")
        if not torch.equal(adjacency, adjacency.T):
            raise ValueError("adjacency must be symmetric, directed graphs are not supported")
        object.__setattr__(self, "adjacency", adjacency)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> Graph:
        """
        Builds a graph from a list of weighted edges.

        Args:
            n: The number of vertices.
            edges: Triples ``(u, v, w)`` with ``w > 0``. Each undirected edge may be listed once
                in either orientation.

        Returns:
            The graph.
        """
        adjacency = torch.zeros(n, n, dtype=torch.float64)
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a vertex outside of [0, {n})")
            if u == v:
                raise ValueError(f"edge ({u}, {v}) is a self-loop")
            if not w > 0:
                raise ValueError(f"edge ({u}, {v}) has nonpositive weight {w}")
            adjacency[u, v] = w
            adjacency[v, u] = w
        return cls(n, adjacency)

    @property
    def edges(self) -> List[Edge]:
        """
        The edges of the graph as triples ``(u, v, w)`` with ``u < v``, sorted lexicographically.
        """
        rows, cols = torch.triu(self.adjacency, diagonal=1).nonzero(as_tuple=True)
        return [
            (u, v, float(self.adjacency[u, v])) for u, v in zip(rows.tolist(), cols.tolist())
        ]

    @property
    def degrees(self) -> torch.Tensor:
        """
        The weighted degree of every vertex, tensor of shape ``[n]``.
        """
        return self.adjacency.sum(1)

    def is_connected(self) -> bool:
        """
        Returns whether every vertex can be reached from every other vertex.
        """
        num_components = csgraph.connected_components(
            csr_matrix(self.adjacency.numpy()), directed=False, return_labels=False
        )
        return num_components == 1


def sample_points(n: int, rng_seed: int) -> torch.Tensor:
    """
    Samples vertex locations uniformly from the unit square.

    Args:
        n: The number of points.
        rng_seed: The seed of the random number generator.

    Returns:
        Tensor of shape ``[n, 2]``.
    """
    generator = torch.Generator().manual_seed(rng_seed)
    return torch.rand(n, 2, generator=generator, dtype=torch.float64)


def knn_geometric_graph(points: torch.Tensor, k: int) -> Graph:
    """
    Connects every point to its ``k`` nearest neighbors (Euclidean distance). An edge exists if
    either endpoint selects the other and edges are weighted by the inverse squared distance.
    Equal distances are resolved in favor of the lower vertex index.

    Args:
        points: Tensor of shape ``[n, 2]`` with the vertex locations.
        k: The number of neighbors selected by each point.

    Returns:
        The k-nearest-neighbor graph. Vertex ``i`` corresponds to ``points[i]``.
    """
    points = torch.as_tensor(points, dtype=torch.float64)
    if points.dim() != 2 or points.size(1) != 2:
        raise ValueError(f"points must have shape [n, 2] but have shape {list(points.shape)}")
    n = points.size(0)
    if not 0 < k < n:
        raise ValueError(f"k must lie in [1, {n - 1}] for {n} points but is {k}")

    distances = torch.cdist(points, points, compute_mode="donot_use_mm_for_euclid_dist")
    distances.fill_diagonal_(float("inf"))
    duplicates = (distances == 0).nonzero()
    if duplicates.size(0) > 0:
        u, v = duplicates[0].tolist()
        raise ValueError(f"points {u} and {v} coincide, their edge weight would be infinite")

    # Stable sort keeps the lower index first among equal distances
    nearest = distances.sort(dim=1, stable=True).indices[:, :k]
    selected = torch.zeros(n, n, dtype=torch.bool).scatter_(1, nearest, True)
    selected = selected | selected.T

    weights = distances.pow(-2).masked_fill(~selected, 0.0)
    return Graph(n, weights)


def laplacian(graph: Graph, kind: LaplacianKind = "normalized") -> torch.Tensor:
    """
    Computes the Laplacian of a graph.

    Args:
        graph: The graph.
        kind: The kind of Laplacian to compute.

    Returns:
        Symmetric positive semidefinite tensor of shape ``[n, n]``.
    """
    degrees = graph.degrees
    unnormalized = torch.diag(degrees) - graph.adjacency
    if kind == "unnormalized":
        return unnormalized
    if kind != "normalized":
        raise ValueError(f"unknown Laplacian kind '{kind}'")

    isolated = (degrees <= 0).nonzero()
    if isolated.size(0) > 0:
        raise ValueError(
            f"vertex {int(isolated[0])} is isolated, the normalized Laplacian is undefined"
        )
    scale = degrees.rsqrt()
    normalized = scale.unsqueeze(1) * unnormalized * scale.unsqueeze(0)
    return 0.5 * (normalized + normalized.T)


# -------------------------------------------------------------------------------------------------
# SERIALIZATION


def write_edge_list(graph: Graph, path: Union[str, Path]) -> None:
    """
    Writes a graph in the edge-list text format: a header line ``n <count>`` followed by one line
    ``u v w`` per undirected edge with ``u < v``. Weights are written with full precision.

    Args:
        graph: The graph to write.
        path: The file to write to.
    """
    lines = [f"n {graph.n}"]
    lines.extend(f"{u} {v} {w!r}" for u, v, w in graph.edges)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edge_list(path: Union[str, Path]) -> Graph:
    """
    Reads a graph written by :meth:`write_edge_list`. Blank lines and lines starting with ``#``
    are ignored.

    Args:
        path: The file to read from.

    Returns:
        The graph.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"edge list '{path}' does not exist")

    lines = [
        line.split()
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines or len(lines[0]) != 2 or lines[0][0] != "n":
        raise ValueError(f"edge list '{path}' does not start with a header line 'n <count>'")

    edges = []
    for i, fields in enumerate(lines[1:], start=2):
        if len(fields) != 3:
            raise ValueError(f"line {i} of '{path}' is not of the form 'u v w'")
        edges.append((int(fields[0]), int(fields[1]), float(fields[2])))
    return Graph.from_edges(int(lines[0][1]), edges)
