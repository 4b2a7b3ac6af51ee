"""Observability infrastructure."""

from app.infrastructure.observability.metrics import (
    StageMetric,
    StageTimer,
)
from app.infrastructure.observability.error_tracker import (
    FailureRecord,
    FailureTracker,
)

__all__ = [
    "StageMetric",
    "StageTimer",
    "FailureRecord",
    "FailureTracker",
]
