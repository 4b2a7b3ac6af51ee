"""DTOs for axiom and invariant check results."""

from typing import Any, List, Optional
from pydantic import BaseModel, Field


class AxiomCheck(BaseModel):
    """Outcome of one named check."""

    name: str = Field(..., description="Check name")
    passed: bool = Field(..., description="Whether the check holds")
    witness: Optional[str] = Field(None, description="Counterexample when the check fails")
    detail: Optional[str] = Field(None, description="Extra context")


class CheckReport(BaseModel):
    """Ordered list of checks run against one subject."""

    subject: str = Field(..., description="What was checked")
    checks: List[AxiomCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, name: str, passed: bool, witness: Any = None, detail: Optional[str] = None) -> "CheckReport":
        self.checks.append(
            AxiomCheck(
                name=name,
                passed=bool(passed),
                witness=None if passed or witness is None else str(witness),
                detail=detail,
            )
        )
        return self

    def extend(self, other: "CheckReport", prefix: str = "") -> "CheckReport":
        for check in other.checks:
            self.checks.append(check.model_copy(update={"name": f"{prefix}{check.name}"}))
        return self

    def failures(self) -> List[AxiomCheck]:
        return [check for check in self.checks if not check.passed]

    def get(self, name: str) -> Optional[AxiomCheck]:
        for check in self.checks:
            if check.name == name:
                return check
        return None
