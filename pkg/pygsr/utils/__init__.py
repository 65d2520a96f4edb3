from .lightning_module import IterativeLightningModule

__all__ = ["IterativeLightningModule"]
