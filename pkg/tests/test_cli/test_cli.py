"""
Tests for the triples command line: subcommands, exit codes and report files.
"""

import json

import pytest

from app.core.logging import RunLogger
from app.services.quadext.catalog import CatalogDescriptor, catalog
from app.services.quadext.cochains import QuadraticCocycle
from app.services.quadext.forms import Form
from app.services.quadext.io import cocycle_to_document, dumps_cocycle
from tests.conftest import statuses


def last_json_line(text: str) -> dict:
    lines = [line for line in text.splitlines() if line.strip()]
    return json.loads(lines[-1])


def test_catalog_lists_families(run_report):
    """Test the catalog lists the five families."""
    code, listing = run_report("catalog")
    assert code == 0
    assert listing["format"] == "catalog.v1"
    assert len(listing["entries"]) == 5
    ids = [case["descriptor"] for entry in listing["entries"] for case in entry["cases"]]
    assert "tfull-3" in ids


def test_catalog_filter_without_match(run_report):
    """Test an unmatched filter gives an empty listing, not an error."""
    code, listing = run_report("catalog", "nope")
    assert code == 0
    assert listing["entries"] == []


def test_catalog_text(cli):
    """Test the text listing has one line per family."""
    code, out, _ = cli("catalog", "--text")
    assert code == 0
    assert len(out.strip().splitlines()) == 5


def test_build_to_stdout(cli):
    """Test build prints an algebra.v1 document."""
    code, out, _ = cli("build", "tfull-3")
    assert code == 0
    document = json.loads(out)
    assert document["format"] == "algebra.v1"
    assert len(document["labels"]) == 8


def test_build_to_file(run_report, tmp_path):
    """Test build --out writes the document and reports its path."""
    path = tmp_path / "entries" / "tfull-3.json"
    code, report = run_report("build", "tfull-3", "--out", str(path))
    assert code == 0
    assert report["artifacts"]["path"] == str(path)
    assert report["artifacts"]["kind"] == "algebra.v1"
    assert json.loads(path.read_text())["format"] == "algebra.v1"


def test_build_cocycle(cli):
    """Test build --cocycle prints the quadext.v1 cocycle."""
    code, out, _ = cli("build", "tfull-4:k=1,l=0,m=0:c=0", "--cocycle")
    assert code == 0
    document = json.loads(out)
    assert document["format"] == "quadext.v1"
    assert document["descriptor"] == "tfull-4:k=1,l=0,m=0:c=0:a0=0"


@pytest.mark.parametrize("text", ["tfull-1", "tfull-3", "tfull-4:k=0,l=0,m=1:c=0"])
def test_verify_catalog_entry(run_report, text):
    """Test catalog entries pass verification."""
    code, report = run_report("verify", text)
    assert code == 0
    checks = statuses(report)
    assert checks["algebra.bracket.jacobi"] == "pass"
    assert checks["triple.extrinsic"] == "pass"
    assert checks["triple.full"] == "pass"
    assert checks["fullness.T1"] == "pass"
    assert report["format"] == "report.v1"
    assert report["command"] == "verify"


def test_verify_tampered_cocycle(run_report, tmp_path):
    """Test a broken alpha is reported as a Jacobi failure with exit code 1."""
    desc = CatalogDescriptor.parse("tfull-4:k=1,l=0,m=0:c=0")
    l, a, z = catalog(desc)
    alpha = Form.from_entries(2, l.dim, a.dim, {(0, 1): [1, 0, 0]})
    document = cocycle_to_document(QuadraticCocycle(alpha, z.gamma), l.labels, a.labels, descriptor=desc.id)
    path = tmp_path / "tampered.json"
    path.write_text(dumps_cocycle(document), encoding="utf-8")

    code, report = run_report("verify", str(path))
    assert code == 1
    assert statuses(report)["algebra.bracket.jacobi"] == "fail"
    assert "algebra.bracket.jacobi" in [c["name"] for c in report["checks"] if c["status"] == "fail"]


def test_verify_algebra_file_has_no_split(cli, run_report, tmp_path):
    """Test algebra.v1 input marks the split-dependent checks unsupported."""
    path = tmp_path / "tfull-3.json"
    cli("build", "tfull-3", "--out", str(path))
    code, report = run_report("verify", str(path))
    assert code == 0
    checks = statuses(report)
    assert checks["balanced"] == "unsupported"
    assert checks["fullness"] == "unsupported"
    assert checks["triple.extrinsic"] == "pass"


@pytest.mark.parametrize("text", ["tfull-9", "tfull-4:k=x", "other-1"])
def test_bad_descriptor_is_usage_error(cli, text):
    """Test unparseable descriptors exit with code 2 and a JSON error."""
    code, out, err = cli("verify", text)
    assert code == 2
    assert out == ""
    assert last_json_line(err)["code"] == "parse"


def test_unknown_file_format(cli, tmp_path):
    """Test a JSON file of an unknown format is a parse error."""
    path = tmp_path / "unknown.json"
    path.write_text(json.dumps({"format": "nothing.v0"}), encoding="utf-8")
    code, _, err = cli("verify", str(path))
    assert code == 2
    assert last_json_line(err)["code"] == "parse"


def test_missing_subcommand(cli):
    """Test argparse errors exit with code 2."""
    code, _, _ = cli()
    assert code == 2


def test_extend_full_classifier(run_report):
    """Test a definite classifier gives a full indecomposable extension."""
    code, report = run_report("extend", "tfull-1:a0=1", "--B", "1,0;0,3")
    checks = statuses(report)
    assert checks["extension.full"] == "pass"
    assert checks["extension.indecomposable"] == "pass"
    assert report["artifacts"]["h2"]["out_dim"] == 3
    assert code == 0


def test_extend_zero_omega_is_not_full(run_report):
    """Test the trivial extension fails the fullness check."""
    code, report = run_report("extend", "tfull-1:a0=1")
    assert code == 1
    assert statuses(report)["extension.full"] == "fail"


def test_extend_rejects_bad_matrix(cli):
    """Test a malformed matrix literal is a parse error."""
    code, _, err = cli("extend", "tfull-1:a0=1", "--B", "1,x;0,3")
    assert code == 2
    assert last_json_line(err)["code"] == "parse"


def test_embed_item_two(cli):
    """Test embed prints the default 11 x 11 grid as CSV."""
    code, out, _ = cli("embed", "item-2")
    assert code == 0
    lines = [line for line in out.splitlines() if line and not line.startswith("#")]
    assert lines[0] == "r,s,x1,x2,x3"
    assert len(lines) == 122


def test_embed_grid_override(cli):
    """Test --grid changes the row count."""
    code, out, _ = cli("embed", "item-1", "--grid", "4")
    assert code == 0
    lines = [line for line in out.splitlines() if line and not line.startswith("#")]
    assert len(lines) == 5


def test_embed_to_file(run_report, tmp_path):
    """Test embed --out writes the point cloud and reports its size."""
    path = tmp_path / "item2.json"
    code, report = run_report("embed", "tfull-2b", "--out", str(path), "--grid", "3")
    assert code == 0
    assert report["artifacts"]["rows"] == 9
    document = json.loads(path.read_text())
    assert document["columns"] == ["r", "s", "x1", "x2", "x3"]
    assert len(document["rows"]) == 9


def test_embed_rejects_item_params(cli):
    """Test k on a small item is a usage error."""
    code, _, err = cli("embed", "item-2", "--k", "1")
    assert code == 2
    assert last_json_line(err)["code"] == "usage"


def test_geomcheck_item_two(run_report):
    """Test item 2 passes every geometry check."""
    code, report = run_report("geomcheck", "item-2", "--probes", "8")
    checks = statuses(report)
    assert checks["signature.p0"] == "pass"
    assert checks["reflection"] == "pass"
    assert checks["mean_curvature"] == "pass"
    assert checks["curvature.flat"] == "pass"
    assert checks["route_agreement"] == "pass"
    assert report["artifacts"]["signature"] == [1, 1]
    assert code == 0


def test_geomcheck_needs_probes(cli):
    """Test a probe count below one is rejected."""
    code, _, _ = cli("geomcheck", "item-2", "--probes", "0")
    assert code == 2


def test_geomcheck_logs_numeric_results(cli, monkeypatch):
    """Test geomcheck logs the curvature, mean curvature and route agreement numbers."""
    logged = []
    monkeypatch.setattr(RunLogger, "log_probe", lambda self, data: logged.append(data))
    code, _, _ = cli("geomcheck", "item-2", "--probes", "4")
    assert code == 0
    kinds = {entry["kind"] for entry in logged}
    assert {"curvature", "mean_curvature", "route_agreement"} <= kinds
    route = next(entry for entry in logged if entry["kind"] == "route_agreement")
    assert route["residual"] <= 1e-8


def test_reports_are_deterministic(cli):
    """Test two identical runs print identical bytes."""
    first = cli("geomcheck", "item-2", "--probes", "5", "--seed", "3")
    second = cli("geomcheck", "item-2", "--probes", "5", "--seed", "3")
    assert first[1] == second[1]
    assert first[0] == second[0]
    assert cli("verify", "tfull-3")[1] == cli("verify", "tfull-3")[1]


def test_text_rendering(cli):
    """Test --text prints one line per check and the exit code."""
    code, out, _ = cli("verify", "tfull-1", "--text")
    assert code == 0
    assert out.splitlines()[0].startswith("triples ")
    assert out.splitlines()[-1] == "exit 0"


def test_tolerance_override_is_reported(run_report):
    """Test tolerance flags show up in the report."""
    _, report = run_report("verify", "tfull-1", "--tolerance-curvature", "1e-5")
    assert report["tolerances"]["tolerance_curvature"] == 1e-5


def test_invalid_tolerance_is_usage_error(cli):
    """Test a non-positive tolerance is rejected by the settings validator."""
    code, _, err = cli("verify", "tfull-1", "--tolerance-curvature", "-1")
    assert code == 2
    assert last_json_line(err)["code"] == "usage"


def test_report_summary(cli, run_report, tmp_path):
    """Test the report subcommand merges run reports and keeps the worst exit code."""
    good = tmp_path / "good.json"
    bad = tmp_path / "bad.json"
    good.write_text(cli("verify", "tfull-3")[1], encoding="utf-8")
    bad.write_text(cli("extend", "tfull-1:a0=1")[1], encoding="utf-8")

    code, summary = run_report("report", str(good), str(bad))
    assert summary["format"] == "report-summary.v1"
    assert [entry["exit_code"] for entry in summary["reports"]] == [0, 1]
    assert "extension.full" in summary["reports"][1]["failed"]
    assert summary["exit_code"] == 1
    assert code == 1


def test_report_rejects_garbage(cli, tmp_path):
    """Test a file that is not a run report is a parse error."""
    path = tmp_path / "garbage.json"
    path.write_text("{}", encoding="utf-8")
    code, _, _ = cli("report", str(path))
    assert code == 2
