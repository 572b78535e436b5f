"""
Run report Pydantic schemas (report.v1).
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

CheckStatusLiteral = Literal["pass", "fail", "unsupported", "undecided"]


class CheckEntry(BaseModel):
    """One named check with its status and optional residual."""
    name: str
    status: CheckStatusLiteral
    detail: str = ""
    residual: Optional[float] = None
    data: Dict[str, Any] = Field(default_factory=dict)


class RunReport(BaseModel):
    """Machine-readable outcome of one CLI command."""
    format: Literal["report.v1"] = "report.v1"
    tool: str
    version: str
    command: str
    input: str
    checks: List[CheckEntry] = Field(default_factory=list)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    artifacts: Dict[str, Any] = Field(default_factory=dict)
    errors: List[Dict[str, Any]] = Field(default_factory=list)

    @field_validator("checks")
    @classmethod
    def validate_unique(cls, v: List[CheckEntry]) -> List[CheckEntry]:
        names = [c.name for c in v]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"Duplicate check names: {', '.join(duplicates)}")
        return v

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.checks if c.status == "fail"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


class ReportSummaryEntry(BaseModel):
    source: str
    command: str
    input: str
    counts: Dict[str, int]
    failed: List[str] = Field(default_factory=list)
    exit_code: int


class ReportSummary(BaseModel):
    """Merge of several run reports."""
    format: Literal["report-summary.v1"] = "report-summary.v1"
    tool: str
    version: str
    reports: List[ReportSummaryEntry] = Field(default_factory=list)
    counts: Dict[str, int] = Field(default_factory=dict)
    exit_code: int = 0
