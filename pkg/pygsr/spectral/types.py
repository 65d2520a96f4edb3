from __future__ import annotations
from typing import Literal

ProjectionSide = Literal["low", "high"]
ProjectionSide.__doc__ = """
The side of the cutoff frequency onto which a graph signal is projected.

- **low**: The orthogonal projection onto the Paley-Wiener space, i.e. all spectral coefficients
  of frequencies larger than the cutoff are set to zero.
- **high**: The orthogonal projection onto the complement of the Paley-Wiener space. The low and
  high projections of a signal always sum up to the signal.
"""
