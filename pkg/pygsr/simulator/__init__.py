from .estimator import DistributedLeastSquares, simulate, SimulationResult
from .lightning_module import DistributedReconstructionLightningModule
from .metrics import MessageVolume, RowAggregator
from .model import (
    DistributedNetworkModel,
    DistributedNetworkModelConfig,
    ErrorMessage,
    MessageBatch,
    NodeState,
)
from .types import SimulationMode

__all__ = [
    "DistributedLeastSquares",
    "simulate",
    "SimulationResult",
    "DistributedReconstructionLightningModule",
    "MessageVolume",
    "RowAggregator",
    "DistributedNetworkModel",
    "DistributedNetworkModelConfig",
    "ErrorMessage",
    "MessageBatch",
    "NodeState",
    "SimulationMode",
]
