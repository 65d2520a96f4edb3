from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union
import numpy as np
import pandas as pd
import torch

#: The columns of an error trace, in order.
TRACE_COLUMNS = (
    "k",
    "total_error",
    "relative_error",
    "in_band_error",
    "out_band_error",
    "delta_k",
    "eta_k",
    "mu_k",
    "beta_k",
)


@dataclass(frozen=True)
class ErrorTrace:
    """
    Per-iteration record of a reconstruction run. Row ``k`` describes the estimate of time step
    ``k``:

    - ``total_error`` and ``relative_error`` compare the estimate against the true signal.
    - ``in_band_error`` and ``out_band_error`` compare the estimate against the biased target of
      the decay factor ``beta_k``.
    - ``delta_k`` is the norm of the change from the previous estimate (zero in the first row).
    - ``eta_k`` measures how much the delayed estimates at the sensors deviate from the current
      ones. It is NaN while some delayed time step precedes zero.
    - ``mu_k`` and ``beta_k`` are the parameters of the update that produced the estimate (the
      parameters of the first update for ``k = 0``).
    """

    #: The rows of the trace, tensor of shape ``[num_rows, 9]`` ordered as :attr:`TRACE_COLUMNS`.
    values: torch.Tensor

    def __post_init__(self) -> None:
        values = torch.as_tensor(self.values, dtype=torch.float64)
        if values.dim() != 2 or values.size(1) != len(TRACE_COLUMNS):
            raise ValueError(
                f"trace values must have shape [num_rows, {len(TRACE_COLUMNS)}] but have shape "
                f"{list(values.shape)}"
            )
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size(0)

    def column(self, name: str) -> torch.Tensor:
        """
        Returns the column with the provided name, tensor of shape ``[num_rows]``.
        """
        return self.values[:, TRACE_COLUMNS.index(name)]

    @property
    def total(self) -> torch.Tensor:
        """
        The distance of every estimate to the true signal.
        """
        return self.column("total_error")

    @property
    def relative(self) -> torch.Tensor:
        """
        The distance of every estimate to the true signal relative to the signal's norm.
        """
        return self.column("relative_error")

    @property
    def in_band(self) -> torch.Tensor:
        """
        The in-band distance of every estimate to the biased target.
        """
        return self.column("in_band_error")

    @property
    def out_band(self) -> torch.Tensor:
        """
        The out-of-band energy (as norm) of every estimate.
        """
        return self.column("out_band_error")

    def to_frame(self) -> pd.DataFrame:
        """
        Returns the trace as data frame with an integer column ``k``.
        """
        frame = pd.DataFrame(self.values.numpy(), columns=list(TRACE_COLUMNS))
        frame["k"] = frame["k"].astype(np.int64)
        return frame

    def write_csv(self, path: Union[str, Path]) -> None:
        """
        Writes the trace as CSV. Identical traces produce identical files.
        """
        self.to_frame().to_csv(path, index=False, float_format="%.17g")

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> ErrorTrace:
        """
        Reads a trace written by :meth:`write_csv`.
        """
        frame = pd.read_csv(path)
        missing = set(TRACE_COLUMNS) - set(frame.columns)
        if missing:
            raise ValueError(f"trace file '{path}' lacks the columns {sorted(missing)}")
        return cls(torch.as_tensor(frame[list(TRACE_COLUMNS)].to_numpy(dtype=np.float64)))


# -------------------------------------------------------------------------------------------------
# ESTIMATORS


def steady_state(
    values: torch.Tensor, window: int, rtol: float = 0.01, atol: float = 1e-12
) -> Optional[float]:
    """
    Detects whether a series has settled. The series is steady if the means of its last two
    windows differ by less than ``rtol`` relative to the earlier mean, or by less than ``atol``
    relative to the first value of the series.

    Args:
        values: The series, tensor of shape ``[num_values]``.
        window: The window size.
        rtol: The relative tolerance.
        atol: The tolerance relative to the initial value.

    Returns:
        The mean of the last window or ``None`` if the series is not steady.
    """
    if window < 1:
        raise ValueError(f"window must be positive but is {window}")
    if values.numel() < 2 * window or not torch.isfinite(values).all():
        return None
    previous = float(values[-2 * window : -window].mean())
    last = float(values[-window:].mean())
    change = abs(last - previous)
    if change < rtol * abs(previous) or change <= atol * abs(float(values[0])):
        return last
    return None


def convergence_rate(trace: ErrorTrace, steady_window: int) -> Optional[float]:
    """
    Estimates the linear convergence rate of a run. With ``m`` the first time step at which the
    total error falls below 1.2 times its steady state, the rate is ``(e_m / e_0)^(1 / m)``.

    Args:
        trace: The trace of the run.
        steady_window: The window for detecting the steady state, see :meth:`steady_state`.

    Returns:
        The rate or ``None`` if the run did not converge.
    """
    total = trace.total
    steady = steady_state(total, steady_window)
    if steady is None:
        return None
    initial = float(total[0])
    if initial == 0:
        return 1.0
    m = int((total <= 1.2 * steady).nonzero()[0])
    if m == 0:
        m = 1
    return (float(total[m]) / initial) ** (1 / m)


def rate_exponent_fit(trace: ErrorTrace, k_min: int, k_max: int) -> float:
    """
    Fits a power law to the total error of a run.

    Args:
        trace: The trace of the run.
        k_min: The first time step of the fit, at least 1.
        k_max: The last time step of the fit.

    Returns:
        The least-squares slope of the log total error against the log time step.
    """
    if not 1 <= k_min < k_max:
        raise ValueError(f"fit range [{k_min}, {k_max}] must satisfy 1 <= k_min < k_max")
    steps = trace.column("k")
    selected = (steps >= k_min) & (steps <= k_max)
    if int(selected.sum()) < 2:
        raise ValueError(f"trace holds fewer than two rows in [{k_min}, {k_max}]")
    total = trace.total[selected]
    if (total <= 0).any() or not torch.isfinite(total).all():
        raise ValueError("power law fits require positive, finite errors")

    x = steps[selected].log()
    y = total.log()
    x_centered = x - x.mean()
    return float((x_centered * (y - y.mean())).sum() / x_centered.square().sum())
