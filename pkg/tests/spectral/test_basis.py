# pylint: disable=missing-function-docstring
from pathlib import Path
import numpy as np
import pandas as pd
import pytest
import torch
from pygsr.graph import laplacian
from pygsr.spectral import BandSpec, eigendecompose, gft, igft, project, write_spectrum_csv
from tests._data.graphs import complete_graph, connected_knn_graph, path_graph


@pytest.mark.parametrize(("n", "seed"), [(20, 0), (50, 1), (100, 2)])
def test_eigendecompose(n: int, seed: int):
    matrix = laplacian(connected_knn_graph(n, 4, seed))
    basis = eigendecompose(matrix)

    expected = np.linalg.eigvalsh(matrix.numpy())
    assert np.allclose(basis.eigenvalues.numpy(), expected, atol=1e-10)
    assert (basis.eigenvalues[1:] >= basis.eigenvalues[:-1]).all()
    assert (basis.eigenvalues >= 0).all()

    vectors = basis.eigenvectors
    assert torch.allclose(vectors.T @ vectors, torch.eye(n, dtype=torch.float64), atol=1e-10)
    reconstructed = vectors @ torch.diag(basis.eigenvalues) @ vectors.T
    assert torch.allclose(reconstructed, matrix, atol=1e-10)


def test_eigendecompose_orients_eigenvectors():
    basis = eigendecompose(laplacian(connected_knn_graph(30, 4, 0)))
    pivots = (basis.eigenvectors.abs() > 1e-10).int().argmax(0)
    assert (basis.eigenvectors.gather(0, pivots.unsqueeze(0)) > 0).all()
    assert torch.equal(
        basis.eigenvectors, eigendecompose(laplacian(connected_knn_graph(30, 4, 0))).eigenvectors
    )


def test_eigendecompose_rejects_invalid_matrices():
    with pytest.raises(ValueError):
        eigendecompose(torch.zeros(2, 3))
    with pytest.raises(ValueError):
        eigendecompose(torch.tensor([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        eigendecompose(-torch.eye(3))


# -------------------------------------------------------------------------------------------------
# BANDS


def test_band_from_cutoff():
    basis = eigendecompose(laplacian(path_graph(6)))
    band = BandSpec.from_cutoff(float(basis.eigenvalues[2]), basis)
    assert band.indices.tolist() == [0, 1, 2]
    assert band.size == 3
    assert BandSpec.from_cutoff(0.0, basis).size == 1
    assert BandSpec.from_cutoff(10.0, basis).size == 6
    with pytest.raises(ValueError):
        BandSpec.from_cutoff(-0.1, basis)


def test_band_lowest():
    basis = eigendecompose(laplacian(path_graph(6)))
    band = BandSpec.lowest(4, basis)
    assert band.size == 4
    assert basis.eigenvalues[3] < band.omega < basis.eigenvalues[4]
    assert BandSpec.lowest(6, basis).size == 6
    with pytest.raises(ValueError):
        BandSpec.lowest(0, basis)


def test_band_lowest_rejects_coinciding_eigenvalues():
    basis = eigendecompose(laplacian(complete_graph(4)))
    with pytest.raises(ValueError):
        BandSpec.lowest(2, basis)


# -------------------------------------------------------------------------------------------------
# TRANSFORMS


def test_gft_inverts():
    basis = eigendecompose(laplacian(connected_knn_graph(40, 4, 3)))
    signals = torch.randn(5, 40, dtype=torch.float64)
    assert torch.allclose(igft(gft(signals, basis), basis), signals, atol=1e-12)
    assert torch.allclose(gft(basis.eigenvectors[:, 7], basis), torch.eye(40)[7].double())
    with pytest.raises(ValueError):
        gft(torch.zeros(39), basis)


def test_project():
    basis = eigendecompose(laplacian(connected_knn_graph(40, 4, 4)))
    band = BandSpec.lowest(8, basis)
    signal = torch.randn(40, dtype=torch.float64)

    low = project(signal, band, basis, side="low")
    high = project(signal, band, basis, side="high")
    assert torch.allclose(low + high, signal)
    assert float(low @ high) == pytest.approx(0, abs=1e-12)
    assert torch.allclose(project(low, band, basis), low, atol=1e-12)
    assert gft(low, basis)[8:].abs().max() < 1e-12
    with pytest.raises(ValueError):
        project(signal, band, basis, side="middle")  # type: ignore


def test_write_spectrum_csv(tmp_path: Path):
    basis = eigendecompose(laplacian(path_graph(5)))
    path = tmp_path / "spectrum.csv"
    write_spectrum_csv(basis, path)

    frame = pd.read_csv(path, index_col="row")
    assert list(frame.columns) == [f"u{k}" for k in range(5)]
    assert list(frame.index) == ["eigenvalue", "0", "1", "2", "3", "4"]
    eigenvalues = frame.loc["eigenvalue"].to_numpy()
    assert np.allclose(eigenvalues, basis.eigenvalues.numpy(), atol=1e-15)
    assert np.allclose(frame.iloc[1:].to_numpy(), basis.eigenvectors.numpy(), atol=1e-15)
