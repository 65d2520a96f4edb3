from .errors import (
    appendix_diagnostics,
    band_errors,
    delay_mismatch,
    inequality_violations,
    trajectory_diagnostics,
)
from .trace import convergence_rate, ErrorTrace, rate_exponent_fit, steady_state, TRACE_COLUMNS

__all__ = [
    "appendix_diagnostics",
    "band_errors",
    "delay_mismatch",
    "inequality_violations",
    "trajectory_diagnostics",
    "convergence_rate",
    "ErrorTrace",
    "rate_exponent_fit",
    "steady_state",
    "TRACE_COLUMNS",
]
