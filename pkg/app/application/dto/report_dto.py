"""Report DTOs for analyze and verify-suite."""

from typing import Dict, List, Optional, Tuple
from pydantic import BaseModel, Field

from app.application.dto.check_dto import CheckReport


class InputIdentity(BaseModel):
    """What was analysed."""

    kind: str = Field(..., description="semigroup, category or script")
    source: str = Field(..., description="catalog name or file path")
    name: str = Field("", description="Name of the built object")
    sha256: str = Field(..., description="SHA-256 of the canonical input text")


class EggboxSummary(BaseModel):
    """One D-class grid; each cell lists element labels, idempotent cells start with '*'."""

    d_class: int
    rows: int
    columns: int
    cells: List[List[str]]


class GreensSummary(BaseModel):
    """Green's class counts and egg-box layout."""

    order: int = Field(..., ge=1)
    num_l: int
    num_r: int
    num_h: int
    num_d: int
    idempotents: List[str] = Field(default_factory=list, description="Idempotent labels")
    monoid_identity: Optional[str] = None
    r_order: List[Tuple[str, str]] = Field(default_factory=list, description="Covering pairs of S/R")
    eggbox: List[EggboxSummary] = Field(default_factory=list)


class CategorySummary(BaseModel):
    """Objects, hom sizes and normal-category axioms."""

    name: str
    objects: List[str]
    num_morphisms: int
    hom_sizes: List[List[int]]
    order: List[Tuple[str, str]] = Field(default_factory=list, description="Covering pairs of the subobject order")
    largest_object: Optional[str] = Field(None, description="Set when the category is bounded above")
    axioms: Optional[CheckReport] = None


class ConeSummary(BaseModel):
    """Cone semigroup and its connection."""

    order: int
    vertex_counts: Dict[str, int] = Field(default_factory=dict, description="Cones per vertex")
    idempotents: int
    r_classes: List[str] = Field(default_factory=list, description="R-class labels of Ĉ")
    r_order: List[Tuple[str, str]] = Field(default_factory=list, description="Covering pairs of Ĉ/R")
    downset: List[str] = Field(default_factory=list, description="Connecting R-classes")
    connection_order: Optional[int] = Field(None, description="Order of the connection semigroup")
    monoid_identity: Optional[str] = Field(None, description="ε_k when bounded above")
    supported: Optional[bool] = None
    self_supported: Optional[bool] = None


class StageResult(BaseModel):
    """Outcome of one pipeline stage."""

    stage: str
    status: str = Field(..., description="ok, skipped or failed")
    reason: Optional[str] = None


class RoundtripResult(BaseModel):
    """Isomorphism witness or the reason there is none."""

    name: str
    status: str = Field(..., description="verified, failed or skipped")
    reason: Optional[str] = None
    witness: Optional[List[int]] = Field(None, description="Image of every element (semigroup roundtrips)")
    object_map: Optional[List[int]] = None
    morphism_map: Optional[List[int]] = None
    class_map: Optional[Dict[str, str]] = None


class AnalysisReport(BaseModel):
    """Full output of analyze."""

    schema_version: int = Field(1, serialization_alias="schema")
    tool: str = Field(..., description="Tool name and version")
    input: InputIdentity
    flags: Optional[Dict[str, bool]] = None
    ladders: Dict[str, Dict[str, bool]] = Field(default_factory=dict)
    greens: Optional[GreensSummary] = None
    category: Optional[CategorySummary] = None
    cones: Optional[ConeSummary] = None
    roundtrips: List[RoundtripResult] = Field(default_factory=list)
    checks: List[CheckReport] = Field(default_factory=list)
    stages: List[StageResult] = Field(default_factory=list)
    timing: Optional[Dict[str, float]] = Field(None, description="Milliseconds per stage")

    @property
    def passed(self) -> bool:
        return all(r.status != "failed" for r in self.roundtrips) and all(c.passed for c in self.checks)

    def to_json(self, include_timing: bool = True) -> str:
        exclude = None if include_timing and self.timing is not None else {"timing"}
        return self.model_dump_json(indent=2, by_alias=True, exclude=exclude)


class SuiteFailure(BaseModel):
    """One failed verify-suite check."""

    check: str
    scope: str
    message: str
    witness: Optional[str] = None
    error_type: str = "CheckFailed"
    exit_code: int = 1


class SuiteReport(BaseModel):
    """Machine-readable verify-suite outcome."""

    schema_version: int = Field(1, serialization_alias="schema")
    scope: str
    passed: bool
    exit_code: int = 0
    total_checks: int
    failures: List[SuiteFailure] = Field(default_factory=list)
    summary: Dict = Field(default_factory=dict)
    timing: Optional[Dict[str, float]] = None

    def to_json(self, include_timing: bool = True) -> str:
        exclude = None if include_timing and self.timing is not None else {"timing"}
        return self.model_dump_json(indent=2, by_alias=True, exclude=exclude)
