from __future__ import annotations
import dataclasses
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, NamedTuple, Optional, Tuple, Union
import torch
from pygsr.graph import DelayMatrix, Graph, hop_distances, laplacian, LaplacianKind
from pygsr.spectral import (
    BandSpec,
    eigendecompose,
    frame_bounds,
    frame_elements,
    SampleSet,
    SpectralBasis,
)

logger = logging.getLogger(__name__)

#: Lower frame bounds at or below this value indicate that a sample set is not a uniqueness set.
UNIQUENESS_TOLERANCE = 1e-10


class NonUniqueSamplingSetError(ValueError):
    """
    Raised when a sample set does not determine every signal of the Paley-Wiener space.
    """


class UniquenessResult(NamedTuple):
    """
    Outcome of a uniqueness check.
    """

    #: Whether the sample set is a uniqueness set.
    is_unique: bool
    #: The lower frame bound which serves as evidence.
    lower_bound: float


@dataclass(frozen=True)
class SamplingPlan:
    """
    Everything the network needs to know before reconstruction starts: the representative
    vertices, the cutoff frequency, the precomputed frame elements and the transmission delays.
    """

    #: The communication graph.
    graph: Graph
    #: The spectral basis of the graph's Laplacian.
    basis: SpectralBasis
    #: The band of the reconstructed signals.
    band: BandSpec
    #: The representative vertices in ascending order, tensor of shape ``[num_samples]``.
    sample_set: torch.Tensor
    #: The frame elements of the representatives, tensor of shape ``[num_samples, n]``.
    frame: torch.Tensor
    #: The delays in effect, restricted to the sample set.
    delays: DelayMatrix
    #: The lower and upper frame bounds ``(A, B)``.
    frame_bounds: Tuple[float, float]
    #: The Laplacian that defines graph frequencies.
    laplacian_kind: LaplacianKind = "normalized"

    @property
    def omega(self) -> float:
        """
        The cutoff frequency.
        """
        return self.band.omega

    @property
    def num_vertices(self) -> int:
        """
        The number of vertices of the graph.
        """
        return self.graph.n

    @property
    def num_samples(self) -> int:
        """
        The number of representative vertices.
        """
        return self.sample_set.numel()

    @property
    def tau_max(self) -> int:
        """
        The maximal delay between any representative and any vertex.
        """
        return self.delays.tau_max

    @property
    def sample_delays(self) -> torch.Tensor:
        """
        The delays from every representative to every vertex, tensor of shape
        ``[num_samples, n]``.
        """
        return self.delays.tau[self.sample_set]

    @property
    def band_vectors(self) -> torch.Tensor:
        """
        The in-band eigenvectors, tensor of shape ``[n, band_size]``.
        """
        return self.basis.band_vectors(self.band)

    def without_delays(self) -> SamplingPlan:
        """
        Returns the same plan in a network where every error arrives instantly.
        """
        return dataclasses.replace(self, delays=DelayMatrix.zeros(self.num_vertices))

    def summary(self) -> Dict[str, Any]:
        """
        Returns the JSON-serializable description of the plan stored alongside experiment traces.
        """
        return {
            "num_vertices": self.num_vertices,
            "sample_set": self.sample_set.tolist(),
            "omega": self.omega,
            "band_size": self.band.size,
            "laplacian": self.laplacian_kind,
            "frame_bounds": {"A": self.frame_bounds[0], "B": self.frame_bounds[1]},
            "tau_max": self.tau_max,
        }

    def save(self, path: Union[str, Path]) -> None:
        """
        Writes the plan summary as JSON.
        """
        Path(path).write_text(json.dumps(self.summary(), indent=2) + "\n", encoding="utf-8")


# -------------------------------------------------------------------------------------------------
# OPERATIONS


def cutoff_bound(normalized_laplacian: torch.Tensor, sample_set: SampleSet) -> float:
    """
    Computes a cutoff frequency below which the sample set is guaranteed to be a uniqueness set.
    The bound is ``σ`` where ``σ²`` is the smallest singular value of the squared Laplacian
    restricted to the rows and columns of the unsampled vertices.

    Args:
        normalized_laplacian: The normalized Laplacian, tensor of shape ``[n, n]``.
        sample_set: The sampled vertices.

    Returns:
        The cutoff bound. If every vertex is sampled, the largest eigenvalue of the Laplacian is
        returned since any band is then determined.
    """
    matrix = torch.as_tensor(normalized_laplacian, dtype=torch.float64)
    index = torch.as_tensor(sample_set, dtype=torch.long).reshape(-1)
    if index.numel() == 0:
        raise ValueError("the cutoff bound requires a nonempty sample set")

    unsampled = torch.ones(matrix.size(0), dtype=torch.bool)
    unsampled[index] = False
    if not unsampled.any():
        return float(torch.linalg.eigvalsh(matrix)[-1])

    squared = (matrix @ matrix)[unsampled][:, unsampled]
    return float(torch.linalg.svdvals(squared).min().sqrt())


def verify_uniqueness(
    sample_set: SampleSet, band: BandSpec, basis: SpectralBasis
) -> UniquenessResult:
    """
    Checks whether the sample set determines every signal of the band's Paley-Wiener space.

    Args:
        sample_set: The sampled vertices.
        band: The band.
        basis: The spectral basis.

    Returns:
        The outcome of the check with the lower frame bound as witness.
    """
    index = torch.as_tensor(sample_set, dtype=torch.long).reshape(-1)
    if index.numel() == 0:
        return UniquenessResult(False, 0.0)
    lower, _ = frame_bounds(index, band, basis)
    return UniquenessResult(lower > UNIQUENESS_TOLERANCE, lower)


def random_sample_set(n: int, m: int, rng_seed: int) -> torch.Tensor:
    """
    Draws ``m`` of ``n`` vertices uniformly without replacement.

    Args:
        n: The number of vertices.
        m: The number of samples.
        rng_seed: The seed of the random number generator.

    Returns:
        The sampled vertices in ascending order.
    """
    if not 0 <= m <= n:
        raise ValueError(f"cannot draw {m} samples from {n} vertices")
    generator = torch.Generator().manual_seed(rng_seed)
    return torch.randperm(n, generator=generator)[:m].sort().values


def build_sampling_plan(
    graph: Graph,
    sample_set: SampleSet,
    *,
    omega: Optional[float] = None,
    laplacian_kind: LaplacianKind = "normalized",
    basis: Optional[SpectralBasis] = None,
) -> SamplingPlan:
    """
    Builds and validates a sampling plan.

    Args:
        graph: The communication graph. Must be connected.
        sample_set: The representative vertices.
        omega: The cutoff frequency. If not provided, the cutoff bound of the sample set is used
            which requires the normalized Laplacian.
        laplacian_kind: The Laplacian that defines graph frequencies.
        basis: The spectral basis of the Laplacian, if already computed.

    Returns:
        The plan whose lower frame bound is positive.
    """
    index = torch.as_tensor(sample_set, dtype=torch.long).reshape(-1).unique()
    if index.numel() == 0:
        raise NonUniqueSamplingSetError("the sample set is empty")
    if index.min() < 0 or index.max() >= graph.n:
        raise ValueError(f"sample set references vertices outside of [0, {graph.n})")
    delays = hop_distances(graph).restricted_to(index)

    matrix = laplacian(graph, laplacian_kind)
    if basis is None:
        basis = eigendecompose(matrix)

    if omega is None:
        if laplacian_kind != "normalized":
            raise ValueError("the cutoff bound is only defined for the normalized Laplacian")
        omega = cutoff_bound(matrix, index)
    elif laplacian_kind == "normalized" and omega > cutoff_bound(matrix, index):
        logger.info(
            "Cutoff %.4g exceeds the cutoff bound of the sample set, relying on the frame "
            "bound check alone.",
            omega,
        )

    band = BandSpec.from_cutoff(omega, basis)
    if band.size > index.numel():
        raise NonUniqueSamplingSetError(
            f"{index.numel()} samples cannot determine a band of {band.size} frequencies"
        )
    uniqueness = verify_uniqueness(index, band, basis)
    if not uniqueness.is_unique:
        raise NonUniqueSamplingSetError(
            f"sample set is not a uniqueness set for cutoff {omega:.4g} "
            f"(lower frame bound {uniqueness.lower_bound:.3g})"
        )

    return SamplingPlan(
        graph=graph,
        basis=basis,
        band=band,
        sample_set=index,
        frame=frame_elements(index, band, basis),
        delays=delays,
        frame_bounds=frame_bounds(index, band, basis),
        laplacian_kind=laplacian_kind,
    )


def sample_plan(
    graph: Graph,
    num_samples: int,
    rng_seed: int,
    *,
    omega: Optional[float] = None,
    laplacian_kind: LaplacianKind = "normalized",
    max_redraws: int = 10,
) -> SamplingPlan:
    """
    Draws a random sample set and builds its plan. If the drawn set is not a uniqueness set, the
    set is redrawn with the next seed.

    Args:
        graph: The communication graph.
        num_samples: The number of representatives.
        rng_seed: The seed of the first draw.
        omega: The cutoff frequency, see :meth:`build_sampling_plan`.
        laplacian_kind: The Laplacian that defines graph frequencies.
        max_redraws: The number of redraws before giving up.

    Returns:
        The first valid plan.
    """
    basis = eigendecompose(laplacian(graph, laplacian_kind))
    for seed in range(rng_seed, rng_seed + max_redraws + 1):
        sample_set = random_sample_set(graph.n, num_samples, seed)
        try:
            plan = build_sampling_plan(
                graph, sample_set, omega=omega, laplacian_kind=laplacian_kind, basis=basis
            )
        except NonUniqueSamplingSetError as error:
            logger.info("Redrawing sample set with seed %d: %s", seed + 1, error)
            continue
        logger.info(
            "Sampling plan uses %d representatives, cutoff %.4g, %d frequencies, frame bounds "
            "[%.4g, %.4g] and maximal delay %d.",
            plan.num_samples,
            plan.omega,
            plan.band.size,
            plan.frame_bounds[0],
            plan.frame_bounds[1],
            plan.tau_max,
        )
        return plan
    raise NonUniqueSamplingSetError(
        f"no uniqueness set of size {num_samples} found within {max_redraws} redraws"
    )
