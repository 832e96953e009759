import csv
import io as _io
import json
import math

import pytest

from horomaps.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_classify(capsys):
    code, out = run(capsys, "classify", "--mu", "-8")
    d = json.loads(out)
    assert code == 0 and d["class"] == "Discrete" and d["lowest_weight"] == 2


def test_basis_csv(capsys):
    code, out = run(capsys, "--output", "csv", "basis", "--mu", "-8", "--k", "2", "--points", "1j")
    rows = list(csv.DictReader(_io.StringIO(out)))
    assert float(rows[0]["re"]) == pytest.approx(0.0625)


def test_norm(capsys):
    code, out = run(capsys, "norm", "--mu", "1", "--k", "2", "--s", "1")
    assert str(round(math.sqrt(34 * math.pi), 6))[:6] in out


def test_dist_rows(capsys):
    code, out = run(capsys, "--output", "csv", "dist", "--mu", "2", "--k", "1", "--kind", "delta0", "delta_hat", "--ks", "1")
    rows = list(csv.DictReader(_io.StringIO(out)))
    assert rows[0]["kind"] == "Delta0" and float(rows[0]["value_re"]) == pytest.approx(-1.0)
    assert rows[1]["kind"] == "DeltaHat"


def test_solve_writes_report_and_grid(capsys, tmp_path):
    report = tmp_path / "rep.json"
    code, _ = run(capsys, "solve", "--mu", "2", "--T", "1", "--output", str(report))
    d = json.loads(report.read_text())
    assert code == 0 and d["residual_sup"] < 1e-6
    grid = (tmp_path / "rep.csv").read_text().splitlines()
    assert grid[0] == "node,re,im" and len(grid) > 10


def test_solve_rejects_obstructed_input(capsys, tmp_path):
    doc = tmp_path / "u0.json"
    doc.write_text(json.dumps({"mu": 2, "chart": "Line", "k_min": 0, "coeffs": [[1, 0]]}))
    assert main(["solve", "--T", "1", "--input", str(doc)]) == 2


def test_config_flag(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[solver]\ngrid_points = 11\n")
    code, out = run(capsys, "--config", str(cfg), "--output", "csv", "solve", "--mu", "5", "--T", "0.5")
    assert len(out.strip().splitlines()) == 12


def test_ergodic_and_rate(capsys):
    code, out = run(capsys, "--output", "csv", "ergodic", "--mu", "-8", "--N", "16", "256")
    rows = list(csv.DictReader(_io.StringIO(out)))
    assert float(rows[0]["loglog_slope"]) == pytest.approx(-1.0, abs=0.05)
    code, out = run(capsys, "rate", "--mu", "0.75", "--mu0", "0.75")
    assert "0.0125" in out


def test_verify_exit_codes(capsys):
    code, out = run(capsys, "verify", "algebra")
    assert code == 0 and "8/8 checks passed" in out
    code, out = run(capsys, "--output", "json", "verify", "rates")
    assert code == 0 and json.loads(out)[0]["suite"] == "rates"
