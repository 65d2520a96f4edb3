from .basis import (
    BAND_TOLERANCE,
    BandSpec,
    eigendecompose,
    gft,
    igft,
    project,
    SpectralBasis,
    write_spectrum_csv,
)
from .frame import frame_bounds, frame_elements, frame_operator_apply, operator_norm, SampleSet
from .types import ProjectionSide

__all__ = [
    "BAND_TOLERANCE",
    "BandSpec",
    "eigendecompose",
    "gft",
    "igft",
    "project",
    "SpectralBasis",
    "write_spectrum_csv",
    "frame_bounds",
    "frame_elements",
    "frame_operator_apply",
    "operator_norm",
    "SampleSet",
    "ProjectionSide",
]
