from __future__ import annotations
from typing import Sequence, Tuple, Union
import torch
from .basis import BandSpec, SpectralBasis

SampleSet = Union[torch.Tensor, Sequence[int]]


def _sample_index(sample_set: SampleSet) -> torch.Tensor:
    return torch.as_tensor(sample_set, dtype=torch.long).reshape(-1)


def frame_elements(sample_set: SampleSet, band: BandSpec, basis: SpectralBasis) -> torch.Tensor:
    """
    Computes the frame elements, i.e. the projections of the sampled unit impulses onto the
    Paley-Wiener space.

    Args:
        sample_set: The sampled vertices.
        band: The band defining the Paley-Wiener space.
        basis: The spectral basis.

    Returns:
        Tensor of shape ``[num_samples, n]`` whose ``i``-th row is the projection of the impulse
        at ``sample_set[i]``.
    """
    index = _sample_index(sample_set)
    if index.numel() == 0:
        raise ValueError("frame elements require a nonempty sample set")
    vectors = basis.band_vectors(band)
    return vectors[index] @ vectors.T


def frame_operator_apply(
    signal: torch.Tensor, elements: torch.Tensor, sample_set: SampleSet
) -> torch.Tensor:
    """
    Applies the frame operator ``T f = sum_u f(u) P δ_u`` where the sum ranges over the sampled
    vertices.

    Args:
        signal: Tensor of shape ``[n]`` or ``[num_signals, n]``.
        elements: The frame elements as returned by :meth:`frame_elements`.
        sample_set: The sampled vertices, in the order of the frame elements.

    Returns:
        Tensor of the same shape as the signal.
    """
    return signal[..., _sample_index(sample_set)] @ elements


def frame_bounds(
    sample_set: SampleSet, band: BandSpec, basis: SpectralBasis
) -> Tuple[float, float]:
    """
    Computes the optimal frame bounds of the sampled impulses on the Paley-Wiener space. These
    are the extreme eigenvalues of ``U^T I_S U`` where ``U`` holds the in-band eigenvectors and
    ``I_S`` masks the sample set.

    Args:
        sample_set: The sampled vertices.
        band: The band defining the Paley-Wiener space.
        basis: The spectral basis.

    Returns:
        The lower frame bound ``A`` and the upper frame bound ``B``. The lower bound is positive
        if and only if the sample set is a uniqueness set. For an empty sample set, both bounds
        are zero.
    """
    rows = basis.band_vectors(band)[_sample_index(sample_set)]
    eigenvalues = torch.linalg.eigvalsh(rows.T @ rows)
    return float(eigenvalues[0].clamp_min(0)), float(eigenvalues[-1])


def operator_norm(elements: torch.Tensor) -> float:
    """
    Computes the spectral norm of the frame operator on the space of all graph signals. It equals
    the square root of the upper frame bound.

    Args:
        elements: The frame elements as returned by :meth:`frame_elements`.

    Returns:
        The operator norm.
    """
    return float(torch.linalg.matrix_norm(elements, ord=2))
