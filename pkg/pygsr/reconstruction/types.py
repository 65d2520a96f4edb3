from __future__ import annotations
from typing import Literal

ScheduleKind = Literal["constant", "diminishing"]
ScheduleKind.__doc__ = """
The evolution of step size and decay factor over iterations.

- **constant**: Step size ``mu`` and decay factor ``beta`` are used in every iteration. The
  estimates converge linearly to a biased target whose bias grows with ``beta``.
- **diminishing**: Iteration ``k >= 1`` uses the step size ``mu / sqrt(k)`` and the decay factor
  ``beta / k^(1/4)``. The bias vanishes and the error decreases at the rate ``k^(-1/4)``.
"""
