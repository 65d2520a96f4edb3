from __future__ import annotations
import math
from dataclasses import dataclass
from .types import ScheduleKind


@dataclass(frozen=True)
class Schedule:
    """
    Step sizes and decay factors of the distributed iteration. Iterations are counted from 1: the
    update that produces the estimate of time step ``k`` uses ``step_size(k)`` and ``decay(k)``.
    """

    #: The evolution of the parameters.
    kind: ScheduleKind = "constant"
    #: The step size, or the initial step size for a diminishing schedule.
    mu: float = 0.1
    #: The decay factor, or the initial decay factor for a diminishing schedule.
    beta: float = 1e-3

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "diminishing"):
            raise ValueError(f"unknown schedule kind '{self.kind}'")
        if not (math.isfinite(self.mu) and self.mu >= 0):
            raise ValueError(f"step size must be finite and nonnegative but is {self.mu}")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"decay factor must be finite and nonnegative but is {self.beta}")
        # The product is largest in the first iteration for both kinds
        if self.mu * self.beta >= 1:
            raise ValueError(
                f"the product of step size {self.mu} and decay factor {self.beta} must be "
                "smaller than 1"
            )

    @classmethod
    def constant(cls, mu: float, beta: float) -> Schedule:
        """
        Creates a schedule with fixed parameters.
        """
        return cls("constant", mu, beta)

    @classmethod
    def diminishing(cls, mu: float, beta: float) -> Schedule:
        """
        Creates a schedule with parameters decreasing from the provided initial values.
        """
        return cls("diminishing", mu, beta)

    def step_size(self, k: int) -> float:
        """
        Returns the step size of iteration ``k >= 1``.
        """
        self._check_iteration(k)
        if self.kind == "constant":
            return self.mu
        return self.mu / math.sqrt(k)

    def decay(self, k: int) -> float:
        """
        Returns the decay factor of iteration ``k >= 1``.
        """
        self._check_iteration(k)
        if self.kind == "constant":
            return self.beta
        return self.beta / k**0.25

    def _check_iteration(self, k: int) -> None:
        if k < 1:
            raise ValueError(f"iterations are counted from 1 but {k} was requested")
