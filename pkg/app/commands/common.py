"""
Shared helpers for subcommands: input resolution, matrix literals and output.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from app.core.exceptions import ParseError, TripleError
from app.schemas.report import RunReport
from app.services.checks import Check
from app.services.report import ReportBuilder, dumps_report, render_text
from app.utils.exactlin import Mat, to_scalar


def read_json(path: Path) -> Dict[str, Any]:
    """Load a JSON document; unreadable or malformed files are parse errors."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"Cannot read JSON input {path}", {"reason": str(exc)}) from exc
    if not isinstance(data, dict):
        raise ParseError(f"JSON input {path} must be an object")
    return data


def is_file_input(text: str) -> bool:
    return Path(text).is_file()


def parse_matrix(text: str) -> Mat:
    """Rational matrix literal with rows split by ';' and entries by ',', e.g. "1,0;0,3"."""
    rows = [row.strip() for row in text.split(";")]
    try:
        values = [[to_scalar(v.strip()) for v in row.split(",")] for row in rows if row]
        return Mat.from_rows(values)
    except TripleError as exc:
        raise ParseError(f"Bad matrix literal {text!r}", {"reason": exc.message}) from exc


def parse_vector(text: str) -> List:
    try:
        return [to_scalar(v.strip()) for v in text.split(",") if v.strip()]
    except TripleError as exc:
        raise ParseError(f"Bad vector literal {text!r}", {"reason": exc.message}) from exc


def guarded(builder: ReportBuilder, name: str, action: Callable[[], Optional[Check]]) -> Optional[Check]:
    """Run one check; toolkit errors become report entries instead of aborting the run."""
    try:
        return action()
    except TripleError as exc:
        return builder.error(name, exc)


def emit(report: RunReport, args: argparse.Namespace, stream=None) -> int:
    """Print the report as JSON (or its text rendering) and return the exit code."""
    out = stream or sys.stdout
    out.write(render_text(report) if getattr(args, "text", False) else dumps_report(report))
    return report.exit_code


def write_text(path: Optional[Path], text: str) -> Optional[Path]:
    """Write to ``path`` or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return None
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def random_points(rng: np.random.Generator, count: int, dim: int, radius: float) -> Sequence:
    """Uniform probes in the cube [-radius, radius]^dim."""
    return rng.uniform(-radius, radius, size=(count, dim))
