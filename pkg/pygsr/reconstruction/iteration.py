from __future__ import annotations
from dataclasses import dataclass
from typing import Optional
import torch
from pygsr.sampling import SamplingPlan, UNIQUENESS_TOLERANCE
from .schedule import Schedule


@dataclass(frozen=True)
class ReconState:
    """
    The state of the closed-form distributed iteration at time step ``k``.
    """

    #: The estimate of time step ``k``, tensor of shape ``[n]``.
    f: torch.Tensor
    #: Ring buffer of sensor errors, tensor of shape ``[depth, num_samples]``. The error of time
    #: step ``j`` is stored in row ``j % depth``.
    error_history: torch.Tensor
    #: The time step.
    k: int = 0

    @classmethod
    def initial(cls, plan: SamplingPlan, estimate: Optional[torch.Tensor] = None) -> ReconState:
        """
        Creates the state at time step zero with a history deep enough for the plan's delays.

        Args:
            plan: The sampling plan.
            estimate: The initial estimate. Defaults to the zero signal.

        Returns:
            The initial state.
        """
        if estimate is None:
            estimate = torch.zeros(plan.num_vertices, dtype=torch.float64)
        history = torch.zeros(plan.tau_max + 1, plan.num_samples, dtype=torch.float64)
        return cls(torch.as_tensor(estimate, dtype=torch.float64).clone(), history, 0)


# -------------------------------------------------------------------------------------------------
# SHARED UPDATE


def delayed_errors(history: torch.Tensor, k: int, delays: torch.Tensor) -> torch.Tensor:
    """
    Looks up the error of every sensor that is available at every vertex in time step ``k``.
    Errors of time steps before zero are reported as zero.

    Args:
        history: Ring buffer of sensor errors of shape ``[depth, num_samples]`` which holds the
            errors of all time steps ``k - depth + 1, ..., k``.
        k: The current time step.
        delays: The delays from every sensor to every vertex, shape ``[num_samples, n]``.

    Returns:
        Tensor of shape ``[num_samples, n]`` with the error of sensor ``u`` from time step
        ``k - delays[u, v]`` at index ``[u, v]``.
    """
    steps = k - delays
    slots = steps.remainder(history.size(0))
    errors = history.T.gather(1, slots)
    return errors.masked_fill(steps < 0, 0.0)


def dlsr_update(
    estimate: torch.Tensor,
    errors: torch.Tensor,
    frame: torch.Tensor,
    step_size: float,
    decay: float,
) -> torch.Tensor:
    """
    Performs the local update of every vertex: the estimate shrinks by the decay factor and moves
    along the frame elements weighted by the (possibly delayed) sensor errors.

    Args:
        estimate: The current estimate of shape ``[n]``.
        errors: The sensor errors available at every vertex, shape ``[num_samples, n]``.
        frame: The frame elements of shape ``[num_samples, n]``.
        step_size: The step size of the iteration.
        decay: The decay factor of the iteration.

    Returns:
        The next estimate.
    """
    return (1 - step_size * decay) * estimate + step_size * (errors * frame).sum(0)


# -------------------------------------------------------------------------------------------------
# ITERATIONS


def frame_step(
    f: torch.Tensor, truth_samples: torch.Tensor, plan: SamplingPlan, relaxation: float = 1.0
) -> torch.Tensor:
    """
    Performs one centralized frame iteration ``f + λ P(sum_u (f*(u) - f(u)) δ_u)``.

    Args:
        f: The current estimate of shape ``[n]``.
        truth_samples: The true signal on the sample set, shape ``[num_samples]``.
        plan: The sampling plan.
        relaxation: The relaxation parameter ``λ``.

    Returns:
        The next estimate.
    """
    errors = truth_samples - f[plan.sample_set]
    return f + relaxation * (errors @ plan.frame)


def ilsr_step(f: torch.Tensor, truth_samples: torch.Tensor, plan: SamplingPlan) -> torch.Tensor:
    """
    Performs one step of iterative least square reconstruction, i.e. a frame iteration without
    relaxation.

    Args:
        f: The current estimate of shape ``[n]``.
        truth_samples: The true signal on the sample set, shape ``[num_samples]``.
        plan: The sampling plan. Must describe a uniqueness set.

    Returns:
        The next estimate.
    """
    return frame_step(f, truth_samples, plan)


def dlsr_closed_form_step(
    state: ReconState, truth_samples: torch.Tensor, plan: SamplingPlan, schedule: Schedule
) -> ReconState:
    """
    Performs one step of the distributed iteration in vector form. Every vertex combines the
    sensor errors delayed by the plan's hop distances.

    Args:
        state: The state at time step ``k``.
        truth_samples: The true signal of time step ``k`` on the sample set, shape
            ``[num_samples]``.
        plan: The sampling plan.
        schedule: The step sizes and decay factors.

    Returns:
        The state at time step ``k + 1``.
    """
    depth = state.error_history.size(0)
    if depth < plan.tau_max + 1:
        raise ValueError(
            f"error history of depth {depth} does not cover the maximal delay {plan.tau_max}"
        )

    history = state.error_history.clone()
    history[state.k % depth] = truth_samples - state.f[plan.sample_set]
    errors = delayed_errors(history, state.k, plan.sample_delays)
    k = state.k + 1
    f = dlsr_update(state.f, errors, plan.frame, schedule.step_size(k), schedule.decay(k))
    return ReconState(f, history, k)


def biased_target(f_star: torch.Tensor, plan: SamplingPlan, beta: float) -> torch.Tensor:
    """
    Computes the fixed point of the distributed iteration with decay factor ``beta``, i.e. the
    bandlimited solution of ``(β I + T) f = T f*``. The system is solved in the coordinates of the
    in-band eigenvectors.

    Args:
        f_star: The true signal of shape ``[n]``. Only its values on the sample set enter.
        plan: The sampling plan.
        beta: The decay factor.

    Returns:
        The biased target of shape ``[n]``.
    """
    if beta < 0:
        raise ValueError(f"decay factor must be nonnegative but is {beta}")
    if beta == 0 and plan.frame_bounds[0] <= UNIQUENESS_TOLERANCE:
        raise ValueError("the biased target is undefined without decay for a non-unique plan")

    vectors = plan.band_vectors
    rows = vectors[plan.sample_set]
    system = rows.T @ rows + beta * torch.eye(plan.band.size, dtype=torch.float64)
    coefficients = torch.linalg.solve(system, rows.T @ f_star[plan.sample_set])
    return vectors @ coefficients
