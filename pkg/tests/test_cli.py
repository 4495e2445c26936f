import csv
import json
import math
import subprocess
import sys

import pytest

from vacstat.cli import main
from vacstat.ode import TRACE_COLUMNS
from vacstat.report import ANCHORS, CheckRecord, RunReport, strip_timing, trace_csv
from vacstat.suite import RunConfig


def test_check_record_verdicts():
    assert CheckRecord.judge("a", "x", 1e-12, 1e-9).verdict == "pass"
    assert CheckRecord.judge("a", "x", 1e-3, 1e-9).verdict == "fail"
    assert CheckRecord.judge("a", "x", math.nan, 1e-9).verdict == "fail"
    assert CheckRecord.skip("a", "x", "why").verdict == "skip"
    rep = RunReport("t", {})
    rep.add(CheckRecord.judge("b", "x", 0.0, 1.0), CheckRecord.skip("a", "x", "why"))
    assert rep.exit_code == 0 and [c.name for c in rep.sorted_checks()] == ["a", "b"]
    rep.add(CheckRecord.condition("c", "x", False, 1.0, 0.0))
    assert rep.exit_code == 1


def test_anchors_are_descriptive():
    for text in ANCHORS.values():
        assert "Eq." not in text and "Lemma" not in text and "—" not in text


def test_trace_csv_full_precision():
    text = trace_csv([{"a": 0.1, "b": 1 / 3}], ("a", "b"))
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["a", "b"] and float(rows[1][1]) == 1 / 3


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("verify", samples=0)
    with pytest.raises(ValueError):
        RunConfig("verify", tol=-1.0)


def test_verify_exit_zero_and_json_schema(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--space", "s1xs2", "--samples", "16", "--json", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == "1.0" and doc["command"] == "verify"
    assert doc["summary"]["failed"] == 0
    for c in doc["checks"]:
        assert set(c) == {"name", "paper_anchor", "max_residual", "tol", "verdict", "note"}
    assert "0 failed" in capsys.readouterr().out


def test_failing_check_gives_exit_one():
    # exact-arithmetic tolerance against a finite-difference curvature cannot hold
    assert main(["verify", "--space", "s3", "--samples", "4", "--fd", "--tol", "1e-14", "--quiet"]) == 1


@pytest.mark.parametrize("argv", [["verify", "--space", "nosuch"], ["verify"],
                                  ["verify", "--space", "s3", "--samples", "0"],
                                  ["ode-classify", "--n", "2"]])
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_env_tolerance(monkeypatch, tmp_path):
    monkeypatch.setenv("VSS_TOL", "banana")
    assert main(["verify", "--space", "s3", "--samples", "4", "--quiet"]) == 2
    monkeypatch.setenv("VSS_TOL", "1e-7")
    out = tmp_path / "r.json"
    assert main(["verify", "--space", "s3", "--samples", "4", "--quiet", "--json", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["tol"] == 1e-7


def test_sds_scan_csv(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["sds-scan", "--R", "2", "--k", "1", "--c0", "0.3", "--csv", str(out), "--quiet"]) == 0
    rows = list(csv.DictReader(out.open()))
    assert tuple(rows[0]) == TRACE_COLUMNS and len(rows) == 32
    assert min(float(r["ambrozio_margin"]) for r in rows) < -2.5


def test_ode_trace_and_classify(tmp_path):
    out = tmp_path / "c.json"
    assert main(["ode-classify", "--c0", "0.3", "--json", str(out), "--quiet"]) == 0
    doc = json.loads(out.read_text())
    assert doc["extras"]["case"] == "Periodic"
    assert doc["extras"]["period"] == pytest.approx(6.24648, abs=1e-5)
    assert main(["ode-trace", "--c0", "0.3", "--samples", "20", "--quiet"]) == 0
    assert main(["ode-trace", "--R", "-6", "--quiet"]) == 1


def test_json_deterministic(tmp_path):
    docs = []
    for i in range(2):
        p = tmp_path / f"{i}.json"
        main(["identities", "--space", "h3", "--samples", "8", "--quiet", "--json", str(p)])
        docs.append(strip_timing(json.loads(p.read_text())))
    assert docs[0] == docs[1]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "vacstat", "verify", "--space", "r3", "--samples", "4",
                        "--quiet"], capture_output=True, text=True)
    assert r.returncode == 0 and "0 failed" in r.stdout
