# pylint: disable=abstract-method
from __future__ import annotations
import logging
import math
from typing import Optional, Tuple
import torch
from pygsr.metrics import band_errors, delay_mismatch, TRACE_COLUMNS
from pygsr.reconstruction import biased_target, Schedule
from pygsr.sampling import SamplingPlan
from pygsr.utils import IterativeLightningModule
from .metrics import MessageVolume, RowAggregator
from .model import DistributedNetworkModel

logger = logging.getLogger(__name__)


class DistributedReconstructionLightningModule(IterativeLightningModule):
    """
    Lightning module for running the distributed reconstruction on a simulated network. Batch
    ``k`` holds the true signal of time step ``k``. Before every update, the module records the
    trace row of the current estimate.
    """

    def __init__(
        self,
        model: DistributedNetworkModel,
        plan: SamplingPlan,
        schedule: Schedule,
        *,
        final_truth: Optional[torch.Tensor] = None,
        divergence_threshold: float = 1e3,
        check_propagation: bool = False,
        record_estimates: bool = True,
    ):
        """
        Args:
            model: The network to run the iteration on. Its plan must already be loaded.
            plan: The sampling plan of the network.
            schedule: The step sizes and decay factors.
            final_truth: The true signal of the time step after the last update. If provided, a
                trace row for the final estimate is recorded.
            divergence_threshold: The run is stopped once the norm of the estimate exceeds this
                multiple of the true signal's norm (or of 1 if the signal is smaller).
            check_propagation: Whether to verify in every time step that every node knows
                exactly the sensor errors its hop distances permit.
            record_estimates: Whether to keep the estimate of every time step.
        """
        super().__init__()

        self.model = model
        self.plan = plan
        self.schedule = schedule
        self.final_truth = final_truth
        self.divergence_threshold = divergence_threshold
        self.check_propagation = check_propagation
        self.record_estimates = record_estimates

        #: Whether the run was stopped because the estimate diverged.
        self.diverged = False
        self.tau_max = int(model.delays.max()) if model.delays.numel() > 0 else 0
        self._previous: Optional[torch.Tensor] = None
        self._target_cache: Optional[Tuple[float, torch.Tensor, torch.Tensor]] = None

        # Initialize aggregators
        self.trace_aggregator = RowAggregator(len(TRACE_COLUMNS), dist_sync_fn=self.all_gather)
        self.estimate_aggregator = RowAggregator(
            model.config.num_nodes, dist_sync_fn=self.all_gather
        )
        self.message_volume = MessageVolume(model.config.num_nodes, dist_sync_fn=self.all_gather)

    def on_train_start(self) -> None:
        self.trace_aggregator.reset()
        self.estimate_aggregator.reset()
        self.message_volume.reset()
        self.diverged = False
        self._previous = None

    def iteration_step(self, batch: torch.Tensor, iteration: int) -> None:
        if self.diverged:
            return

        truth = batch[0]
        k = int(self.model.time_step)
        relative = self._record(k, truth)
        self.log("relative_error", relative, prog_bar=True)

        estimate = self.model(
            truth[self.model.sample_set],
            self.schedule.step_size(k + 1),
            self.schedule.decay(k + 1),
        )
        if self.model.config.mode == "message_passing":
            assert self.model.in_flight is not None
            self.message_volume.update(self.model.in_flight.sender)
            if self.check_propagation:
                self._verify_propagation(k)

        limit = self.divergence_threshold * max(float(truth.norm()), 1.0)
        if not torch.isfinite(estimate).all() or float(estimate.norm()) > limit:
            logger.warning("Estimate diverged in time step %d, stopping the run.", k + 1)
            self.diverged = True
            self.stop_iterating()

    def iteration_epoch_end(self) -> None:
        if not self.diverged and self.final_truth is not None:
            self._record(int(self.model.time_step), self.final_truth)

    def _record(self, k: int, truth: torch.Tensor) -> float:
        f = self.model.estimate
        index = max(k, 1)
        mu, beta = self.schedule.step_size(index), self.schedule.decay(index)

        total = float((f - truth).norm())
        truth_norm = float(truth.norm())
        relative = total / truth_norm if truth_norm > 0 else total
        target = self._biased_target(truth, beta)
        e, e_plus = band_errors(f, target, self.plan.band, self.plan.basis)
        delta = float((f - self._previous).norm()) if self._previous is not None else 0.0
        if k >= self.tau_max:
            eta = float(
                delay_mismatch(
                    f[self.model.sample_set], self.model.delayed_estimates(), self.model.frame
                )
            )
        else:
            eta = math.nan

        row = torch.tensor(
            [k, total, relative, e, e_plus, delta, eta, mu, beta], dtype=torch.float64
        )
        self.trace_aggregator.update(row)
        if self.record_estimates:
            self.estimate_aggregator.update(f.clone())
        self._previous = f.clone()
        return relative

    def _biased_target(self, truth: torch.Tensor, beta: float) -> torch.Tensor:
        if self._target_cache is not None:
            cached_beta, cached_truth, target = self._target_cache
            if cached_beta == beta and torch.equal(cached_truth, truth):
                return target
        target = biased_target(truth, self.plan, beta)
        self._target_cache = (beta, truth.clone(), target)
        return target

    def _verify_propagation(self, k: int) -> None:
        expected = self.model.expected_iterations(k)
        mismatch = (self.model.latest_iteration != expected).nonzero()
        if mismatch.size(0) > 0:
            v, i = mismatch[0].tolist()
            u = int(self.model.sample_set[i])
            raise RuntimeError(
                f"node {v} knows the error of sensor {u} from time step "
                f"{int(self.model.latest_iteration[v, i])} in time step {k} but hop distances "
                f"predict time step {int(expected[v, i])}"
            )
        logger.debug("Propagation in time step %d matches the hop distances.", k)
