"""Pipeline stage timing."""

import time
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterator, List
import logging

logger = logging.getLogger(__name__)


@dataclass
class StageMetric:
    """One timed stage."""

    stage: str
    elapsed_ms: float
    succeeded: bool = True


class StageTimer:
    """Collector for per-stage wall-clock timings of one run."""

    def __init__(self):
        self._metrics: List[StageMetric] = []

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Time the enclosed block as stage ``name``.

        The stage is recorded (as failed) even when the block raises.
        """
        start = time.perf_counter()
        succeeded = False
        try:
            yield
            succeeded = True
        finally:
            elapsed_ms = (time.perf_counter() - start) * 1000.0
            self._metrics.append(StageMetric(stage=name, elapsed_ms=elapsed_ms, succeeded=succeeded))
            logger.debug(
                f"Stage {name} took {elapsed_ms:.1f} ms",
                extra={"stage": name, "elapsed_ms": round(elapsed_ms, 3)},
            )

    def get_stage_stats(self) -> Dict[str, Dict[str, float]]:
        """Total time and call count per stage name."""
        totals: Dict[str, float] = defaultdict(float)
        counts: Dict[str, int] = defaultdict(int)
        for metric in self._metrics:
            totals[metric.stage] += metric.elapsed_ms
            counts[metric.stage] += 1
        return {
            stage: {"total_ms": round(totals[stage], 3), "calls": counts[stage]}
            for stage in totals
        }

    def get_summary(self) -> Dict[str, float]:
        """Milliseconds per stage, plus ``total``."""
        summary = {stage: stats["total_ms"] for stage, stats in self.get_stage_stats().items()}
        summary["total"] = round(sum(m.elapsed_ms for m in self._metrics), 3)
        return summary
