from __future__ import annotations
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union
import pandas as pd
import torch
from .types import ProjectionSide

logger = logging.getLogger(__name__)

#: Absolute tolerance for eigenvalues to be considered equal to the cutoff frequency.
BAND_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SpectralBasis:
    """
    Eigendecomposition of a graph Laplacian. Eigenvalues act as graph frequencies and the
    eigenvectors as the corresponding Fourier modes.
    """

    #: The eigenvalues in ascending order, tensor of shape ``[n]``.
    eigenvalues: torch.Tensor
    #: Orthonormal eigenvectors, tensor of shape ``[n, n]``. Column ``k`` is paired with
    #: eigenvalue ``k``.
    eigenvectors: torch.Tensor

    @property
    def num_vertices(self) -> int:
        """
        The number of vertices of the underlying graph.
        """
        return self.eigenvalues.size(0)

    def band_vectors(self, band: BandSpec) -> torch.Tensor:
        """
        Returns the in-band eigenvectors as a tensor of shape ``[n, band_size]``.
        """
        return self.eigenvectors[:, band.indices]


@dataclass(frozen=True)
class BandSpec:
    """
    A cutoff frequency together with the indices of all eigenvalues that do not exceed it. The
    signals whose spectral coefficients vanish outside of the band form the Paley-Wiener space.
    """

    #: The cutoff frequency.
    omega: float
    #: The indices ``k`` with ``eigenvalues[k] <= omega``, ascending.
    indices: torch.Tensor

    @classmethod
    def from_cutoff(cls, omega: float, basis: SpectralBasis) -> BandSpec:
        """
        Collects all frequencies of the basis up to and including the cutoff. Eigenvalues within
        :attr:`BAND_TOLERANCE` above the cutoff are considered equal to it.

        Args:
            omega: The nonnegative cutoff frequency.
            basis: The spectral basis providing the frequencies.

        Returns:
            The band.
        """
        if omega < 0:
            raise ValueError(f"cutoff frequency must be nonnegative but is {omega}")
        indices = (basis.eigenvalues <= omega + BAND_TOLERANCE).nonzero().squeeze(1)
        return cls(float(omega), indices)

    @classmethod
    def lowest(cls, size: int, basis: SpectralBasis) -> BandSpec:
        """
        The band of the ``size`` lowest frequencies. The cutoff is placed halfway between the
        largest in-band and the smallest out-of-band eigenvalue.

        Args:
            size: The number of in-band frequencies.
            basis: The spectral basis providing the frequencies.

        Returns:
            The band.
        """
        if not 0 < size <= basis.num_vertices:
            raise ValueError(
                f"band size must lie in [1, {basis.num_vertices}] but is {size}"
            )
        eigenvalues = basis.eigenvalues
        if size == basis.num_vertices:
            return cls.from_cutoff(float(eigenvalues[-1]), basis)
        if eigenvalues[size] - eigenvalues[size - 1] <= 2 * BAND_TOLERANCE:
            raise ValueError(
                f"eigenvalues {size - 1} and {size} coincide, no cutoff separates them"
            )
        return cls.from_cutoff(float(eigenvalues[size - 1] + eigenvalues[size]) / 2, basis)

    @property
    def size(self) -> int:
        """
        The number of in-band frequencies, i.e. the dimension of the Paley-Wiener space.
        """
        return self.indices.numel()


def eigendecompose(matrix: torch.Tensor) -> SpectralBasis:
    """
    Computes the spectral basis of a symmetric positive semidefinite matrix. Each eigenvector is
    oriented such that its first entry with a magnitude above ``1e-10`` is positive.

    Args:
        matrix: Tensor of shape ``[n, n]``, typically a graph Laplacian.

    Returns:
        The spectral basis with eigenvalues in ascending order.
    """
    matrix = torch.as_tensor(matrix, dtype=torch.float64)
    if matrix.dim() != 2 or matrix.size(0) != matrix.size(1):
        raise ValueError(f"matrix must be square but has shape {list(matrix.shape)}")
    asymmetry = (matrix - matrix.T).abs().max() if matrix.numel() > 0 else 0
    if asymmetry > 1e-10:
        raise ValueError(f"matrix must be symmetric but deviates by {float(asymmetry):.3g}")

    eigenvalues, eigenvectors = torch.linalg.eigh(0.5 * (matrix + matrix.T))
    scale = max(1.0, float(eigenvalues.abs().max()))
    if eigenvalues.numel() > 0 and eigenvalues[0] < -1e-8 * scale:
        raise ValueError(
            f"matrix must be positive semidefinite but has eigenvalue {float(eigenvalues[0]):.3g}"
        )

    pivots = (eigenvectors.abs() > 1e-10).int().argmax(0)
    signs = eigenvectors.gather(0, pivots.unsqueeze(0)).sign()
    return SpectralBasis(eigenvalues.clamp_min(0), eigenvectors * signs)


def _check_dimension(signal: torch.Tensor, basis: SpectralBasis) -> torch.Tensor:
    signal = torch.as_tensor(signal, dtype=torch.float64)
    if signal.dim() == 0 or signal.size(-1) != basis.num_vertices:
        raise ValueError(
            f"signal must have {basis.num_vertices} entries in its last dimension but has shape "
            f"{list(signal.shape)}"
        )
    return signal


def gft(signal: torch.Tensor, basis: SpectralBasis) -> torch.Tensor:
    """
    Computes the graph Fourier transform: coefficient ``k`` is the inner product of the signal
    with eigenvector ``k``.

    Args:
        signal: Tensor of shape ``[n]`` or ``[num_signals, n]``.
        basis: The spectral basis.

    Returns:
        The spectral coefficients with the same shape as the signal.
    """
    return _check_dimension(signal, basis) @ basis.eigenvectors


def igft(coefficients: torch.Tensor, basis: SpectralBasis) -> torch.Tensor:
    """
    Inverts :meth:`gft`.

    Args:
        coefficients: Tensor of shape ``[n]`` or ``[num_signals, n]``.
        basis: The spectral basis.

    Returns:
        The graph signals with the same shape as the coefficients.
    """
    return _check_dimension(coefficients, basis) @ basis.eigenvectors.T


def project(
    signal: torch.Tensor,
    band: BandSpec,
    basis: SpectralBasis,
    side: ProjectionSide = "low",
) -> torch.Tensor:
    """
    Projects graph signals onto the Paley-Wiener space of the band or onto its orthogonal
    complement.

    Args:
        signal: Tensor of shape ``[n]`` or ``[num_signals, n]``.
        band: The band defining the Paley-Wiener space.
        basis: The spectral basis.
        side: The side of the cutoff to project onto.

    Returns:
        The projected signals with the same shape as the input.
    """
    signal = _check_dimension(signal, basis)
    vectors = basis.band_vectors(band)
    low = (signal @ vectors) @ vectors.T
    if side == "low":
        return low
    if side == "high":
        return signal - low
    raise ValueError(f"unknown projection side '{side}'")


def write_spectrum_csv(basis: SpectralBasis, path: Union[str, Path]) -> None:
    """
    Writes a spectral basis to CSV with one column per eigenvector. The first row holds the
    eigenvalues, row ``v + 1`` holds the entries of vertex ``v``.

    Args:
        basis: The basis to export.
        path: The file to write to.
    """
    table = torch.cat([basis.eigenvalues.unsqueeze(0), basis.eigenvectors])
    frame = pd.DataFrame(
        table.numpy(),
        columns=[f"u{k}" for k in range(basis.num_vertices)],
        index=["eigenvalue"] + [str(v) for v in range(basis.num_vertices)],
    )
    frame.to_csv(path, index_label="row", float_format="%.17g")
    logger.debug("Wrote spectrum of %d vertices to '%s'.", basis.num_vertices, path)
