from __future__ import annotations
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional
import torch
from lightkit.nn import Configurable
from torch import jit, nn
from pygsr.reconstruction import delayed_errors, dlsr_update
from pygsr.sampling import SamplingPlan
from .types import SimulationMode


@dataclass
class DistributedNetworkModelConfig:
    """
    Configuration class for a simulated sensor network.

    See also:
        :class:`DistributedNetworkModel`
    """

    #: The number of nodes.
    num_nodes: int
    #: The number of representative nodes, i.e. nodes equipped with a sensor.
    num_samples: int
    #: The number of past time steps for which sensor errors and estimates are retained. Must
    #: exceed the maximal delay of the network.
    history_depth: int
    #: The execution model of the iteration.
    mode: SimulationMode = "message_passing"


@dataclass(frozen=True)
class ErrorMessage:
    """
    The error of a single sensor at a single time step, as stored and forwarded by nodes.
    """

    #: The vertex of the sensor.
    sensor: int
    #: The time step at which the error was measured.
    iteration: int
    #: The error between the true signal and the sensor's estimate.
    value: float


@dataclass(frozen=True)
class NodeState:
    """
    Snapshot of a single node of the network.
    """

    #: The vertex of the node.
    id: int
    #: Whether the node is equipped with a sensor.
    is_representative: bool
    #: The node's current estimate of its signal value.
    estimate: float
    #: The freshest error known for every sensor, keyed by the sensor's vertex.
    latest_errors: Dict[int, ErrorMessage]
    #: The messages sent to this node that arrive in the next time step.
    inbox: List[ErrorMessage]
    #: The messages this node sent in the last time step.
    outbox: List[ErrorMessage]


class MessageBatch(NamedTuple):
    """
    All messages sent within one time step. Each message carries one table entry over one edge.
    """

    #: The sending nodes, tensor of shape ``[num_messages]``.
    sender: torch.Tensor
    #: The receiving nodes, tensor of shape ``[num_messages]``.
    receiver: torch.Tensor
    #: The position of the sensor within the sample set, tensor of shape ``[num_messages]``.
    sensor: torch.Tensor
    #: The time step of the carried error, tensor of shape ``[num_messages]``.
    iteration: torch.Tensor
    #: The carried error, tensor of shape ``[num_messages]``.
    value: torch.Tensor


class DistributedNetworkModel(Configurable[DistributedNetworkModelConfig], nn.Module):
    """
    PyTorch module holding the state of all nodes of a simulated sensor network.

    The state consists of non-trainable buffers only. All nodes advance synchronously: within a
    time step, every representative measures its error, every node merges the messages sent to it
    in the previous time step and forwards its merged table, then all nodes update their estimates.
    An error therefore advances one hop per time step.
    """

    def __init__(self, config: DistributedNetworkModelConfig):
        """
        Args:
            config: The configuration to use for initializing the module's buffers.
        """
        super().__init__(config)
        n, s, depth = config.num_nodes, config.num_samples, config.history_depth

        #: The estimate of every node, buffer of shape ``[num_nodes]``.
        self.estimate: torch.Tensor
        self.register_buffer("estimate", torch.empty(n, dtype=torch.float64))

        #: The frame elements of the sensors, buffer of shape ``[num_samples, num_nodes]``.
        self.frame: torch.Tensor
        self.register_buffer("frame", torch.empty(s, n, dtype=torch.float64))

        #: The vertices of the sensors, buffer of shape ``[num_samples]``.
        self.sample_set: torch.Tensor
        self.register_buffer("sample_set", torch.empty(s, dtype=torch.long))

        #: The delays in effect from every sensor to every node, buffer of shape
        #: ``[num_samples, num_nodes]``.
        self.delays: torch.Tensor
        self.register_buffer("delays", torch.empty(s, n, dtype=torch.long))

        #: The links of the network, boolean buffer of shape ``[num_nodes, num_nodes]``.
        self.adjacency: torch.Tensor
        self.register_buffer("adjacency", torch.empty(n, n, dtype=torch.bool))

        #: The time step of the freshest error per node and sensor (``-1`` if none is known),
        #: buffer of shape ``[num_nodes, num_samples]``.
        self.latest_iteration: torch.Tensor
        self.register_buffer("latest_iteration", torch.empty(n, s, dtype=torch.long))

        #: The freshest error per node and sensor, buffer of shape ``[num_nodes, num_samples]``.
        self.latest_error: torch.Tensor
        self.register_buffer("latest_error", torch.empty(n, s, dtype=torch.float64))

        #: Ring buffer of sensor errors of shape ``[history_depth, num_samples]``.
        self.error_history: torch.Tensor
        self.register_buffer("error_history", torch.empty(depth, s, dtype=torch.float64))

        #: Ring buffer of the estimates at the sensors of shape ``[history_depth, num_samples]``.
        self.estimate_history: torch.Tensor
        self.register_buffer("estimate_history", torch.empty(depth, s, dtype=torch.float64))

        #: The current time step, scalar buffer.
        self.time_step: torch.Tensor
        self.register_buffer("time_step", torch.empty((), dtype=torch.long))

        #: The messages that were sent in the last time step and are yet to be merged.
        self.in_flight: Optional[MessageBatch] = None

        self.reset_parameters()

    @jit.unused
    def reset_parameters(self) -> None:
        """
        Resets the dynamic state: all estimates and histories are set to zero and no node knows
        about any sensor error.
        """
        nn.init.zeros_(self.estimate)
        nn.init.zeros_(self.latest_error)
        nn.init.zeros_(self.error_history)
        nn.init.zeros_(self.estimate_history)
        self.latest_iteration.fill_(-1)
        self.time_step.zero_()
        self.in_flight = None

    @jit.unused
    def load_plan(
        self,
        plan: SamplingPlan,
        initial_estimate: Optional[torch.Tensor] = None,
    ) -> None:
        """
        Installs a sampling plan and resets the dynamic state.

        Args:
            plan: The sampling plan. In centralized mode, its delays are ignored.
            initial_estimate: The estimate of every node at time step zero. Defaults to zero.
        """
        if plan.tau_max >= self.config.history_depth:
            raise ValueError(
                f"history depth {self.config.history_depth} does not exceed the maximal delay "
                f"{plan.tau_max}"
            )
        self.reset_parameters()
        self.frame.copy_(plan.frame)
        self.sample_set.copy_(plan.sample_set)
        self.adjacency.copy_(plan.graph.adjacency > 0)
        if self.config.mode == "centralized":
            self.delays.zero_()
        else:
            self.delays.copy_(plan.sample_delays)
        if initial_estimate is not None:
            self.estimate.copy_(initial_estimate)

    def forward(
        self, truth_samples: torch.Tensor, step_size: float, decay: float
    ) -> torch.Tensor:
        """
        Runs one synchronous time step of the network.

        Args:
            truth_samples: The true signal at the sensors, tensor of shape ``[num_samples]``.
            step_size: The step size of the update.
            decay: The decay factor of the update.

        Returns:
            The estimates of all nodes after the update, tensor of shape ``[num_nodes]``.
        """
        k = int(self.time_step)
        self.measure(truth_samples)
        if self.config.mode == "message_passing":
            if self.in_flight is not None:
                self.receive(self.in_flight)
            self.in_flight = self.send()
            errors = self.table_errors()
        else:
            errors = delayed_errors(self.error_history, k, self.delays)
        self.estimate.copy_(dlsr_update(self.estimate, errors, self.frame, step_size, decay))
        self.time_step.add_(1)
        return self.estimate

    # ---------------------------------------------------------------------------------------------
    # PHASES

    def measure(self, truth_samples: torch.Tensor) -> torch.Tensor:
        """
        Estimation phase: every representative computes the error of its current estimate and
        stores it as its own freshest table entry.

        Args:
            truth_samples: The true signal at the sensors, tensor of shape ``[num_samples]``.

        Returns:
            The errors of all sensors, tensor of shape ``[num_samples]``.
        """
        k = int(self.time_step)
        slot = k % self.config.history_depth
        current = self.estimate[self.sample_set]
        errors = truth_samples - current

        self.estimate_history[slot] = current
        self.error_history[slot] = errors
        sensors = torch.arange(self.config.num_samples, device=errors.device)
        self.latest_iteration[self.sample_set, sensors] = k
        self.latest_error[self.sample_set, sensors] = errors
        return errors

    def send(self) -> MessageBatch:
        """
        Communication phase: every node sends each known table entry to each neighbor.

        Returns:
            The sent messages.
        """
        senders, receivers = self.adjacency.nonzero(as_tuple=True)
        edges, sensors = (self.latest_iteration[senders] >= 0).nonzero(as_tuple=True)
        senders, receivers = senders[edges], receivers[edges]
        return MessageBatch(
            sender=senders,
            receiver=receivers,
            sensor=sensors,
            iteration=self.latest_iteration[senders, sensors],
            value=self.latest_error[senders, sensors],
        )

    def receive(self, messages: MessageBatch) -> None:
        """
        Storage update: every node keeps the freshest error per sensor among its own table and
        the received messages. The merge is independent of the message order.

        Args:
            messages: The messages to merge.
        """
        if messages.receiver.numel() == 0:
            return
        index = messages.receiver * self.config.num_samples + messages.sensor
        freshest = self.latest_iteration.reshape(-1).clone()
        freshest.scatter_reduce_(0, index, messages.iteration, reduce="amax", include_self=True)

        # Messages about the same sensor and time step carry identical errors
        accepted = messages.iteration == freshest[index]
        errors = self.latest_error.reshape(-1).clone()
        errors[index[accepted]] = messages.value[accepted]

        self.latest_iteration.copy_(freshest.view_as(self.latest_iteration))
        self.latest_error.copy_(errors.view_as(self.latest_error))

    def table_errors(self) -> torch.Tensor:
        """
        Returns the freshest known error of every sensor at every node with zeros for unknown
        sensors, tensor of shape ``[num_samples, num_nodes]``.
        """
        return self.latest_error.T.masked_fill(self.latest_iteration.T < 0, 0.0)

    # ---------------------------------------------------------------------------------------------
    # INSPECTION

    def expected_iterations(self, k: int) -> torch.Tensor:
        """
        Returns the time step of the freshest error every node can know of after merging in time
        step ``k``, ``-1`` if the sensor's first error has not arrived yet. Tensor of shape
        ``[num_nodes, num_samples]``.
        """
        steps = k - self.delays.T
        return steps.masked_fill(steps < 0, -1)

    def delayed_estimates(self) -> torch.Tensor:
        """
        Returns the estimate of every sensor at the time step whose error every node uses, tensor
        of shape ``[num_samples, num_nodes]``. Only meaningful once the current time step is at
        least the maximal delay.
        """
        depth = self.config.history_depth
        history = self.estimate_history.clone()
        history[int(self.time_step) % depth] = self.estimate[self.sample_set]
        slots = (int(self.time_step) - self.delays).remainder(depth)
        return history.T.gather(1, slots)

    @jit.unused
    def node_state(self, v: int) -> NodeState:
        """
        Returns a snapshot of the node at vertex ``v``.
        """
        sensors = self.sample_set.tolist()

        def messages(batch: Optional[MessageBatch], mask_of: str) -> List[ErrorMessage]:
            if batch is None:
                return []
            selected = (getattr(batch, mask_of) == v).nonzero().squeeze(1).tolist()
            return [
                ErrorMessage(
                    sensors[int(batch.sensor[i])], int(batch.iteration[i]), float(batch.value[i])
                )
                for i in selected
            ]

        latest = {
            u: ErrorMessage(u, int(self.latest_iteration[v, i]), float(self.latest_error[v, i]))
            for i, u in enumerate(sensors)
            if self.latest_iteration[v, i] >= 0
        }
        return NodeState(
            id=v,
            is_representative=v in sensors,
            estimate=float(self.estimate[v]),
            latest_errors=latest,
            inbox=messages(self.in_flight, "receiver"),
            outbox=messages(self.in_flight, "sender"),
        )
