from .delays import DelayMatrix, DisconnectedGraphError, hop_distances
from .graph import (
    Edge,
    Graph,
    knn_geometric_graph,
    laplacian,
    read_edge_list,
    sample_points,
    write_edge_list,
)
from .types import LaplacianKind

__all__ = [
    "DelayMatrix",
    "DisconnectedGraphError",
    "hop_distances",
    "Edge",
    "Graph",
    "knn_geometric_graph",
    "laplacian",
    "read_edge_list",
    "sample_points",
    "write_edge_list",
    "LaplacianKind",
]
