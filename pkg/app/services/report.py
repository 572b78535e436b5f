"""
Run report assembly: named checks, tolerances and artifacts rendered as
deterministic JSON.
"""

import json
import math
from collections import Counter
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from app import __version__
from app.core.config import settings
from app.core.exceptions import ParseError, TripleError, UnsupportedError
from app.core.logging import RunLogger
from app.schemas.report import CheckEntry, ReportSummary, ReportSummaryEntry, RunReport
from app.services.checks import Check, CheckList, CheckStatus
from app.services.liecore.axioms import SpanCertificate
from app.utils.exactlin import Mat, format_scalar

TOOL = "triples"

TOLERANCE_FIELDS = (
    "tolerance_manifold",
    "tolerance_curvature",
    "tolerance_parallel",
    "tolerance_signature",
    "tolerance_isometry",
    "tolerance_mean_direction",
    "fd_step",
    "gauss_newton_tol",
)


def tolerances() -> Dict[str, float]:
    return {name: float(getattr(settings, name)) for name in TOLERANCE_FIELDS}


def _round(x: float, digits: int) -> Any:
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.{digits}g}")


def _finite_residual(residual: Optional[float]) -> Optional[float]:
    if residual is None or not math.isfinite(residual):
        return None
    return _round(residual, settings.float_digits)


def plain(value: Any, digits: Optional[int] = None) -> Any:
    """JSON-safe copy with floats cut to ``digits`` significant digits and exact scalars as "p/q"."""
    digits = digits or settings.float_digits
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round(float(value), digits)
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, Mat):
        return [[format_scalar(v) for v in value.row(i)] for i in range(value.rows)]
    if isinstance(value, np.ndarray):
        return plain(value.tolist(), digits)
    if isinstance(value, dict):
        return {str(k): plain(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v, digits) for v in value]
    return str(value)


class ReportBuilder:
    """Collects checks for one command and input; ``build`` freezes them into a RunReport."""

    def __init__(self, command: str, input_id: str):
        self.command = command
        self.input_id = input_id
        self.checks = CheckList()
        self.artifacts: Dict[str, Any] = {}
        self.errors: List[Dict[str, Any]] = []
        self.run_logger = RunLogger(__name__, command=command, input=input_id)

    def _logged(self, check: Check) -> Check:
        self.run_logger.log_check(check.name, check.status.value, residual=check.residual)
        return check

    def add(self, checks: CheckList, prefix: str = "") -> None:
        for check in checks:
            self.checks.append(
                Check(prefix + check.name, check.status, check.detail, check.residual, dict(check.data))
            )
            self._logged(self.checks[prefix + check.name])

    def record(self, name: str, ok: bool, detail: str = "", residual: Optional[float] = None, **data: Any) -> Check:
        status = CheckStatus.PASS if ok else CheckStatus.FAIL
        return self._logged(self.checks.mark(name, status, detail, residual, **data))

    def mark(self, name: str, status: CheckStatus, detail: str = "", residual: Optional[float] = None, **data: Any) -> Check:
        return self._logged(self.checks.mark(name, status, detail, residual, **data))

    def span(self, name: str, certificate: SpanCertificate) -> Check:
        """Span equality as a check with both dimensions."""
        return self.record(
            name,
            certificate.result,
            "" if certificate.result else f"bracket span has dim {certificate.bracket_span.cols}, target {certificate.target.cols}",
            span_dim=certificate.bracket_span.cols,
            target_dim=certificate.target.cols,
        )

    def error(self, name: str, error: TripleError) -> Check:
        """Unsupported errors become "unsupported" entries, every other error a failure."""
        self.run_logger.log_error(error, {"check": name})
        self.errors.append({"check": name, **error.to_dict()})
        status = CheckStatus.UNSUPPORTED if isinstance(error, UnsupportedError) else CheckStatus.FAIL
        return self._logged(self.checks.mark(name, status, error.message, code=error.code))

    def artifact(self, key: str, value: Any) -> None:
        self.artifacts[key] = value

    def build(self) -> RunReport:
        entries = [
            CheckEntry(
                name=c.name,
                status=c.status.value,
                detail=c.detail,
                residual=_finite_residual(c.residual),
                data=plain(c.data),
            )
            for c in self.checks
        ]
        return RunReport(
            tool=TOOL,
            version=__version__,
            command=self.command,
            input=self.input_id,
            checks=entries,
            tolerances=tolerances(),
            artifacts=plain(self.artifacts),
            errors=plain(self.errors),
        )


def dumps_report(report: RunReport) -> str:
    """Byte-stable JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_report(path: Path) -> RunReport:
    try:
        return RunReport.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValidationError) as exc:
        raise ParseError(f"Cannot read run report {path}", {"reason": str(exc)}) from exc


def summarize(paths: Sequence[Path]) -> ReportSummary:
    """Merge run reports; the summary fails when any report has a failed check."""
    entries: List[ReportSummaryEntry] = []
    total: Counter = Counter()
    for path in paths:
        report = load_report(path)
        counts = Counter(c.status for c in report.checks)
        total.update(counts)
        entries.append(
            ReportSummaryEntry(
                source=str(path),
                command=report.command,
                input=report.input,
                counts=dict(sorted(counts.items())),
                failed=report.failed,
                exit_code=report.exit_code,
            )
        )
    return ReportSummary(
        tool=TOOL,
        version=__version__,
        reports=entries,
        counts=dict(sorted(total.items())),
        exit_code=max((e.exit_code for e in entries), default=0),
    )


def dumps_summary(summary: ReportSummary) -> str:
    return json.dumps(summary.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_text(report: RunReport) -> str:
    """Plain-text view of the report JSON."""
    lines = [f"{report.tool} {report.version} {report.command} {report.input}"]
    width = max((len(c.name) for c in report.checks), default=0)
    for check in report.checks:
        line = f"  {check.name.ljust(width)}  {check.status}"
        if check.residual is not None:
            line += f"  residual={check.residual}"
        if check.detail:
            line += f"  {check.detail}"
        lines.append(line)
    lines.append(f"exit {report.exit_code}")
    return "\n".join(lines) + "\n"
