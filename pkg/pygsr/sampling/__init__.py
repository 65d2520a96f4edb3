from .plan import (
    build_sampling_plan,
    cutoff_bound,
    NonUniqueSamplingSetError,
    random_sample_set,
    sample_plan,
    SamplingPlan,
    UNIQUENESS_TOLERANCE,
    UniquenessResult,
    verify_uniqueness,
)

__all__ = [
    "build_sampling_plan",
    "cutoff_bound",
    "NonUniqueSamplingSetError",
    "random_sample_set",
    "sample_plan",
    "SamplingPlan",
    "UNIQUENESS_TOLERANCE",
    "UniquenessResult",
    "verify_uniqueness",
]
