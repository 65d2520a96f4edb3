from .intel_lab import IntelLabData, load_intel_lab, read_mote_locations
from .synthetic import (
    add_out_of_band,
    evolve,
    generate_bandlimited,
    generate_time_varying,
    TimeVaryingSignal,
)

__all__ = [
    "IntelLabData",
    "load_intel_lab",
    "read_mote_locations",
    "add_out_of_band",
    "evolve",
    "generate_bandlimited",
    "generate_time_varying",
    "TimeVaryingSignal",
]
