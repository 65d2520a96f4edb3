from typing import Any, Callable, List, Optional
import torch
from torchmetrics import Metric
from torchmetrics.utilities.data import dim_zero_cat


class RowAggregator(Metric):
    """
    The row aggregator collects one row per iteration, in order, and stacks them into a matrix.
    """

    full_state_update = False

    def __init__(
        self,
        num_columns: int,
        *,
        dist_sync_fn: Optional[Callable[[Any], Any]] = None,
    ):
        super().__init__(dist_sync_fn=dist_sync_fn)  # type: ignore

        self.num_columns = num_columns

        self.rows: List[torch.Tensor]
        self.add_state("rows", [], dist_reduce_fx="cat")

    def update(self, row: torch.Tensor) -> None:
        self.rows.append(row.reshape(1, self.num_columns))

    def compute(self) -> torch.Tensor:
        if not self.rows:
            return torch.empty(0, self.num_columns, dtype=torch.float64)
        return dim_zero_cat(self.rows)


class MessageVolume(Metric):
    """
    The message volume counts the messages sent over all links and tracks the largest number of
    messages a single node sent within one iteration.
    """

    full_state_update = False

    def __init__(
        self,
        num_nodes: int,
        *,
        dist_sync_fn: Optional[Callable[[Any], Any]] = None,
    ):
        super().__init__(dist_sync_fn=dist_sync_fn)  # type: ignore

        self.num_nodes = num_nodes

        self.total: torch.Tensor
        self.add_state("total", torch.zeros((), dtype=torch.long), dist_reduce_fx="sum")

        self.peak: torch.Tensor
        self.add_state("peak", torch.zeros((), dtype=torch.long), dist_reduce_fx="max")

    def update(self, senders: torch.Tensor) -> None:
        self.total.add_(senders.numel())
        if senders.numel() > 0:
            per_node = senders.bincount(minlength=self.num_nodes)
            self.peak.copy_(torch.maximum(self.peak, per_node.max()))

    def compute(self) -> torch.Tensor:
        return torch.stack([self.total, self.peak])
