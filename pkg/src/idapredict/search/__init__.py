from .ida import (
    SearchStats,
    ThresholdSchedule,
    accepts_threshold,
    ida_iteration,
    ida_iterations,
    schedule_membership,
    threshold_schedule,
)
from .starts import SamplingExhausted, generate_restricted_starts

__all__ = [
    "SearchStats", "ThresholdSchedule", "accepts_threshold", "ida_iteration", "ida_iterations",
    "schedule_membership", "threshold_schedule", "SamplingExhausted", "generate_restricted_starts",
]
