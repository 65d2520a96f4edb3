from __future__ import annotations
import logging
from typing import Any, Dict, NamedTuple, Optional, Union
import torch
from lightkit import ConfigurableBaseEstimator
from lightkit.data import collate_tensor, DataLoader, dataset_from_tensors
from pygsr.graph import hop_distances
from pygsr.metrics import ErrorTrace, steady_state
from pygsr.reconstruction import Schedule
from pygsr.sampling import NonUniqueSamplingSetError, SamplingPlan, UNIQUENESS_TOLERANCE
from pygsr.signals import TimeVaryingSignal
from .lightning_module import DistributedReconstructionLightningModule
from .model import DistributedNetworkModel, DistributedNetworkModelConfig
from .types import SimulationMode

logger = logging.getLogger(__name__)

Truth = Union[TimeVaryingSignal, torch.Tensor]


class DistributedLeastSquares(ConfigurableBaseEstimator[DistributedNetworkModel]):  # type: ignore
    """
    Distributed least square reconstruction of (time-varying) bandlimited graph signals. Every
    node of the network estimates its own signal value from sensor errors that reach it with a
    delay of one time step per hop.

    See also:
        .. currentmodule:: pygsr.simulator
        .. autosummary::
            :nosignatures:
            :template: classes/pytorch_module.rst

            DistributedNetworkModel
            DistributedNetworkModelConfig
    """

    #: The simulated network after the last time step.
    model_: DistributedNetworkModel
    #: The per-iteration record of the run.
    trace_: ErrorTrace
    #: The estimates of all recorded time steps, tensor of shape ``[num_rows, n]``. Empty if
    #: estimates are not recorded.
    estimates_: torch.Tensor
    #: The final estimate of every node, tensor of shape ``[n]``.
    estimate_: torch.Tensor
    #: Whether the total error reached a steady state without diverging.
    converged_: bool
    #: Whether the run was stopped because the estimate diverged.
    diverged_: bool
    #: The number of updates performed.
    num_iter_: int
    #: The total number of messages sent over all links.
    num_messages_: int
    #: The largest number of messages a single node sent within one time step.
    peak_messages_: int

    def __init__(
        self,
        schedule: Optional[Schedule] = None,
        *,
        mode: SimulationMode = "message_passing",
        divergence_threshold: float = 1e3,
        check_propagation: bool = False,
        steady_window: int = 100,
        record_estimates: bool = True,
        trainer_params: Optional[Dict[str, Any]] = None,
    ):
        """
        Args:
            schedule: The step sizes and decay factors. Defaults to a constant schedule with
                ``mu = 0.1`` and ``beta = 1e-3``.
            mode: The execution model of the iteration.
            divergence_threshold: A run is stopped once the norm of the estimate exceeds this
                multiple of the true signal's norm (or of 1 if the signal is smaller).
            check_propagation: Whether to verify in every time step of a message passing run
                that every node knows exactly the sensor errors its hop distances permit.
            steady_window: The window for detecting a steady state of the total error.
            record_estimates: Whether to keep the estimate of every time step.
            trainer_params: Initialization parameters to use when initializing a PyTorch Lightning
                trainer. By default, it disables various stdout logs unless PyGSR is configured to
                do verbose logging. Checkpointing and logging are disabled regardless of the log
                level. This estimator further sets the following overridable defaults:

                - ``precision=64``

        Note:
            A run always lasts a single epoch in which every batch is one time step.
        """
        super().__init__(
            default_params=dict(precision=64),
            user_params=trainer_params,
        )

        self.schedule = schedule or Schedule()
        self.mode = mode
        self.divergence_threshold = divergence_threshold
        self.check_propagation = check_propagation
        self.steady_window = steady_window
        self.record_estimates = record_estimates

    def fit(
        self,
        plan: SamplingPlan,
        truth: Truth,
        num_steps: int,
        initial_estimate: Optional[torch.Tensor] = None,
    ) -> DistributedLeastSquares:
        """
        Runs the iteration on a simulated network.

        Args:
            plan: The sampling plan of the network.
            truth: The true signal, either time-varying or a single signal of shape ``[n]``.
            num_steps: The number of updates. The truth must provide the frames of time steps
                ``0, ..., num_steps - 1``.
            initial_estimate: The estimate of every node at time step zero. Defaults to zero.

        Returns:
            The fitted estimator.
        """
        if num_steps < 1:
            raise ValueError(f"number of steps must be positive but is {num_steps}")
        if self.mode not in ("message_passing", "closed_form", "centralized"):
            raise ValueError(f"unknown simulation mode '{self.mode}'")
        signal = _as_signal(truth)
        if signal.num_vertices != plan.num_vertices:
            raise ValueError(
                f"truth has {signal.num_vertices} vertices but the plan covers "
                f"{plan.num_vertices}"
            )
        if plan.frame_bounds[0] <= UNIQUENESS_TOLERANCE:
            raise NonUniqueSamplingSetError(
                f"plan has lower frame bound {plan.frame_bounds[0]:.3g}, the sample set is not a "
                "uniqueness set"
            )
        if self.mode == "message_passing":
            # Messages travel one hop per time step, other delays cannot be realized
            hops = hop_distances(plan.graph).tau[plan.sample_set]
            if not torch.equal(hops, plan.sample_delays):
                raise ValueError("message passing requires the plan's delays to be hop distances")
        frames = signal.window(num_steps)

        # Initialize model
        config = DistributedNetworkModelConfig(
            num_nodes=plan.num_vertices,
            num_samples=plan.num_samples,
            history_depth=plan.tau_max + 1,
            mode=self.mode,
        )
        self.model_ = DistributedNetworkModel(config)
        self.model_.load_plan(plan, initial_estimate)

        # Setup the data loading
        loader = DataLoader(
            dataset_from_tensors(frames),
            batch_size=1,
            collate_fn=collate_tensor,
        )

        # Run the iteration
        logger.info(
            "Running distributed reconstruction for %d steps (%s)...", num_steps, self.mode
        )
        module = DistributedReconstructionLightningModule(
            self.model_,
            plan,
            self.schedule,
            final_truth=signal.frame(num_steps) if signal.covers(num_steps) else None,
            divergence_threshold=self.divergence_threshold,
            check_propagation=self.check_propagation,
            record_estimates=self.record_estimates,
        )
        self.trainer(max_epochs=1).fit(module, loader)

        # Assign results
        self.trace_ = ErrorTrace(module.trace_aggregator.compute())
        self.estimates_ = module.estimate_aggregator.compute()
        self.estimate_ = self.model_.estimate.detach().clone()
        self.diverged_ = module.diverged
        self.num_iter_ = int(self.model_.time_step)
        total, peak = module.message_volume.compute().tolist()
        self.num_messages_ = int(total)
        self.peak_messages_ = int(peak)
        self.converged_ = (
            not self.diverged_
            and steady_state(self.trace_.total, self.steady_window) is not None
        )
        if self.diverged_:
            logger.warning("Run diverged after %d steps.", self.num_iter_)
        return self

    def score(self, truth: torch.Tensor) -> float:
        """
        Computes the relative error of the final estimate.

        Args:
            truth: The true signal of shape ``[n]`` to compare against.

        Returns:
            The distance of the final estimate to the truth relative to the truth's norm, or the
            absolute distance if the truth is zero.
        """
        truth = torch.as_tensor(truth, dtype=torch.float64)
        error = float((self.estimate_ - truth).norm())
        norm = float(truth.norm())
        return error / norm if norm > 0 else error


# -------------------------------------------------------------------------------------------------
# FUNCTIONAL INTERFACE


class SimulationResult(NamedTuple):
    """
    The outcome of :meth:`simulate`.
    """

    #: The per-iteration record of the run.
    trace: ErrorTrace
    #: The final estimate, tensor of shape ``[n]``.
    estimate: torch.Tensor
    #: The estimates of all recorded time steps, tensor of shape ``[num_rows, n]``.
    estimates: torch.Tensor
    #: Whether the run was stopped because the estimate diverged.
    diverged: bool


def simulate(
    plan: SamplingPlan,
    schedule: Schedule,
    truth: Truth,
    num_steps: int,
    mode: SimulationMode = "message_passing",
    *,
    initial_estimate: Optional[torch.Tensor] = None,
    **kwargs: Any,
) -> SimulationResult:
    """
    Runs the distributed reconstruction on a simulated network.

    Args:
        plan: The sampling plan of the network.
        schedule: The step sizes and decay factors.
        truth: The true signal, either time-varying or a single signal of shape ``[n]``.
        num_steps: The number of updates.
        mode: The execution model of the iteration.
        initial_estimate: The estimate of every node at time step zero. Defaults to zero.
        kwargs: Additional parameters passed to :class:`DistributedLeastSquares`.

    Returns:
        The trace and the estimates of the run.
    """
    estimator = DistributedLeastSquares(schedule, mode=mode, **kwargs)
    estimator.fit(plan, truth, num_steps, initial_estimate)
    return SimulationResult(
        trace=estimator.trace_,
        estimate=estimator.estimate_,
        estimates=estimator.estimates_,
        diverged=estimator.diverged_,
    )


def _as_signal(truth: Truth) -> TimeVaryingSignal:
    if isinstance(truth, TimeVaryingSignal):
        return truth
    values = torch.as_tensor(truth, dtype=torch.float64)
    if values.dim() != 1:
        raise ValueError(
            f"a plain truth signal must have shape [n] but has shape {list(values.shape)}"
        )
    return TimeVaryingSignal.constant(values)
