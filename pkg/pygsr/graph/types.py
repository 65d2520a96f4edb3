from __future__ import annotations
from typing import Literal

LaplacianKind = Literal["unnormalized", "normalized"]
LaplacianKind.__doc__ = """
The Laplacian matrix to derive graph frequencies from.

- **unnormalized**: The combinatorial Laplacian ``L = D - A`` where ``D`` is the diagonal degree
  matrix and ``A`` the weighted adjacency matrix.
- **normalized**: The symmetric normalized Laplacian ``D^(-1/2) L D^(-1/2)``. Its spectrum lies in
  ``[0, 2]``. Requires every vertex to have a positive degree.
"""
