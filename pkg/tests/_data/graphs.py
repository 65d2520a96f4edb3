from typing import List, Optional
from pygsr.graph import Graph, knn_geometric_graph, sample_points
from pygsr.sampling import sample_plan, SamplingPlan


def connected_knn_graph(n: int, k: int, seed: int) -> Graph:
    """
    Returns the first connected k-nearest-neighbor graph on random points, trying the seeds
    ``seed, seed + 1, ...``.
    """
    for attempt in range(seed, seed + 100):
        graph = knn_geometric_graph(sample_points(n, attempt), k)
        if graph.is_connected():
            return graph
    raise RuntimeError(f"no connected {k}-NN graph on {n} points found")


def random_plan(n: int, m: int, seed: int, k: int = 4, **kwargs) -> SamplingPlan:
    """
    Samples a plan with ``m`` representatives on a connected random k-NN graph.
    """
    graph = connected_knn_graph(n, k, seed)
    return sample_plan(graph, m, seed, **kwargs)


def find_plans(
    n: int,
    m: int,
    count: int,
    min_lower_bound: float,
    *,
    k: int = 4,
    max_tau: Optional[int] = None,
    start: int = 0,
) -> List[SamplingPlan]:
    """
    Returns the plans of the first ``count`` seeds whose lower frame bound is at least
    ``min_lower_bound`` and whose maximal delay does not exceed ``max_tau``.
    """
    plans = []
    for seed in range(start, start + 500):
        plan = random_plan(n, m, seed, k=k)
        if plan.frame_bounds[0] < min_lower_bound:
            continue
        if max_tau is not None and plan.tau_max > max_tau:
            continue
        plans.append(plan)
        if len(plans) == count:
            return plans
    raise RuntimeError(f"found only {len(plans)} plans with lower frame bound {min_lower_bound}")


def path_graph(n: int) -> Graph:
    """
    Returns the path ``0 - 1 - ... - (n-1)`` with unit weights.
    """
    return Graph.from_edges(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    """
    Returns the complete graph with unit weights.
    """
    return Graph.from_edges(n, [(u, v, 1.0) for u in range(n) for v in range(u + 1, n)])
