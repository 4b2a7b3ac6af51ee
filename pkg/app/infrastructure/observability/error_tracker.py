"""Failure tracking for verification runs."""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional
import logging

from app.core.exceptions import EngineError

logger = logging.getLogger(__name__)


@dataclass
class FailureRecord:
    """One failed check or raised error."""

    check: str
    scope: str
    message: str
    witness: Optional[str] = None
    exit_code: int = 1
    error_type: str = "CheckFailed"
    context: Dict[str, str] = field(default_factory=dict)


class FailureTracker:
    """Collects failures of a verify-suite run."""

    def __init__(self):
        self._failures: List[FailureRecord] = []
        self._passed: Dict[str, int] = defaultdict(int)

    def record_pass(self, scope: str, count: int = 1):
        self._passed[scope] += count

    def record_failure(
        self,
        check: str,
        scope: str,
        message: str,
        witness: Optional[str] = None,
    ):
        """Record a check whose report came back failed.

        Args:
            check: Check name
            scope: Suite scope the check belongs to
            message: What was checked
            witness: Counterexample, when the check produced one
        """
        self._failures.append(FailureRecord(check=check, scope=scope, message=message, witness=witness))
        logger.error(
            f"Check failed: {check} ({message})",
            extra={"check": check, "scope": scope},
        )

    def record_error(self, error: Exception, check: str, scope: str):
        """Record an error raised while a check was running.

        Args:
            error: Exception raised
            check: Check name
            scope: Suite scope the check belongs to
        """
        exit_code = error.exit_code if isinstance(error, EngineError) else 1
        self._failures.append(
            FailureRecord(
                check=check,
                scope=scope,
                message=str(error),
                exit_code=exit_code,
                error_type=type(error).__name__,
            )
        )
        logger.error(
            f"Error in {check}: {type(error).__name__} - {error}",
            extra={"check": check, "scope": scope},
        )

    def get_failures(self) -> List[FailureRecord]:
        return list(self._failures)

    @property
    def exit_code(self) -> int:
        """Largest exit code among failures, 0 when there are none."""
        return max((f.exit_code for f in self._failures), default=0)

    def summary(self) -> Dict:
        """Failure counts by scope and error type, with pass counts."""
        by_scope: Dict[str, int] = defaultdict(int)
        by_type: Dict[str, int] = defaultdict(int)
        for failure in self._failures:
            by_scope[failure.scope] += 1
            by_type[failure.error_type] += 1
        return {
            "total_failures": len(self._failures),
            "failures_by_scope": dict(by_scope),
            "failures_by_type": dict(by_type),
            "passed_by_scope": dict(self._passed),
        }
