"""Data Transfer Objects."""

from app.application.dto.check_dto import AxiomCheck, CheckReport
from app.application.dto.report_dto import (
    AnalysisReport,
    CategorySummary,
    ConeSummary,
    EggboxSummary,
    GreensSummary,
    InputIdentity,
    RoundtripResult,
    StageResult,
    SuiteFailure,
    SuiteReport,
)

__all__ = [
    "AxiomCheck",
    "CheckReport",
    "AnalysisReport",
    "CategorySummary",
    "ConeSummary",
    "EggboxSummary",
    "GreensSummary",
    "InputIdentity",
    "RoundtripResult",
    "StageResult",
    "SuiteFailure",
    "SuiteReport",
]
