"""
Tests for run report assembly and serialization.
"""

import json
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import PreconditionError, UnsupportedError
from app.schemas.report import CheckEntry, RunReport
from app.services.checks import CheckStatus
from app.services.report import ReportBuilder, dumps_report, load_report, plain, render_text, summarize
from app.utils.exactlin import Mat


def test_check_names_are_unique():
    """Test a report cannot carry two checks with the same name."""
    with pytest.raises(ValidationError):
        RunReport(
            tool="triples",
            version="0",
            command="verify",
            input="x",
            checks=[CheckEntry(name="a", status="pass"), CheckEntry(name="a", status="fail")],
        )


def test_exit_code_follows_failures():
    """Test only failed checks set exit code 1."""
    builder = ReportBuilder("verify", "x")
    builder.record("ok", True)
    builder.mark("maybe", CheckStatus.UNDECIDED)
    builder.mark("skipped", CheckStatus.UNSUPPORTED)
    assert builder.build().exit_code == 0
    builder.record("broken", False, "nope")
    report = builder.build()
    assert report.exit_code == 1
    assert report.failed == ["broken"]


def test_errors_become_entries():
    """Test unsupported errors are unsupported checks and other errors failures."""
    builder = ReportBuilder("extend", "x")
    builder.error("family", UnsupportedError("not for this case"))
    builder.error("split", PreconditionError("bad split", {"dim": 3}))
    report = builder.build()
    status = {c.name: c.status for c in report.checks}
    assert status == {"family": "unsupported", "split": "fail"}
    assert report.errors[1] == {"check": "split", "code": "precondition", "message": "bad split", "dim": 3}


def test_plain_values():
    """Test exact scalars, matrices and floats are made JSON safe."""
    assert plain(Fraction(1, 3)) == "1/3"
    assert plain(Mat.from_rows([[1, Fraction(1, 2)]])) == [["1", "1/2"]]
    assert plain(np.array([1.0, 2.0])) == [1.0, 2.0]
    assert plain(float("inf")) == "inf"
    assert plain({1: (True, None)}) == {"1": [True, None]}


def test_dumps_report_is_stable(tmp_path):
    """Test report JSON has sorted keys, a trailing newline and reads back."""
    builder = ReportBuilder("verify", "x")
    builder.record("b", True, residual=1e-17)
    builder.artifact("dim", 3)
    text = dumps_report(builder.build())
    assert text.endswith("}\n")
    assert list(json.loads(text)) == sorted(json.loads(text))
    path = tmp_path / "report.json"
    path.write_text(text, encoding="utf-8")
    assert load_report(path).artifacts == {"dim": 3}


def test_render_text():
    """Test the text rendering lists checks and the exit code."""
    builder = ReportBuilder("verify", "x")
    builder.record("jacobi", False, "defect")
    lines = render_text(builder.build()).splitlines()
    assert "jacobi" in lines[1] and "fail" in lines[1]
    assert lines[-1] == "exit 1"


def test_summarize_counts(tmp_path):
    """Test summaries add up status counts across reports."""
    paths = []
    for index, ok in enumerate([True, True, False]):
        builder = ReportBuilder("verify", f"x{index}")
        builder.record("check", ok)
        path = tmp_path / f"r{index}.json"
        path.write_text(dumps_report(builder.build()), encoding="utf-8")
        paths.append(path)
    summary = summarize(paths)
    assert summary.counts == {"fail": 1, "pass": 2}
    assert summary.exit_code == 1
