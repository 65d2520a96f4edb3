from abc import ABC, abstractmethod
from typing import List
import pytorch_lightning as pl
import torch
from torch import nn


class IterativeLightningModule(pl.LightningModule, ABC):
    """
    A lightning module for iterative algorithms that update buffers in place without gradients.
    Every training batch is a single iteration and training runs for a single epoch whose
    dataloader yields one item per iteration, in order.
    """

    def __init__(self):
        super().__init__()
        self.automatic_optimization = False

        # Required parameter to make DDP training work
        self.register_parameter("__ddp_dummy__", nn.Parameter(torch.empty(1)))

    def configure_optimizers(self) -> None:
        return None

    def training_step(self, batch: torch.Tensor, batch_idx: int) -> None:
        self.iteration_step(batch, batch_idx)

    def training_epoch_end(self, outputs: List[torch.Tensor]) -> None:
        self.iteration_epoch_end()

    @abstractmethod
    def iteration_step(self, batch: torch.Tensor, iteration: int) -> None:
        """
        Runs the iteration with the given index on the batch provided for it. Not allowed to
        return any value.
        """

    def iteration_epoch_end(self) -> None:
        """
        Called after the last iteration. Does nothing by default.
        """

    def stop_iterating(self) -> None:
        """
        Requests the trainer to skip all remaining iterations.
        """
        self.trainer.should_stop = True
