from .iteration import (
    biased_target,
    delayed_errors,
    dlsr_closed_form_step,
    dlsr_update,
    frame_step,
    ilsr_step,
    ReconState,
)
from .schedule import Schedule
from .types import ScheduleKind

__all__ = [
    "biased_target",
    "delayed_errors",
    "dlsr_closed_form_step",
    "dlsr_update",
    "frame_step",
    "ilsr_step",
    "ReconState",
    "Schedule",
    "ScheduleKind",
]
