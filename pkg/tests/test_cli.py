from __future__ import annotations

import csv
import io
import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from conformal_ladder.cli import main
from conformal_ladder.suites import ConfigError, SuiteConfig, emit_table, jsonable, run_suite

SCHEMA = json.loads((pathlib.Path(__file__).parents[1] / "docs" / "report.schema.json").read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_clifford_json(capsys):
    code, out, _ = run_cli(capsys, "run", "clifford")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert rep["status"] == "pass" and rep["counts"]["failed"] == 0
    ids = [c["id"] for c in rep["checks"]]
    assert ids == sorted(ids)


def test_suite_flag_equivalent(capsys):
    _, a, _ = run_cli(capsys, "run", "modular", "--series-order", "50", "--no-timing")
    _, b, _ = run_cli(capsys, "run", "--suite", "modular", "--series-order", "50", "--no-timing")
    assert a == b
    rep = json.loads(a)
    assert "through q^50" in {c["id"]: c for c in rep["checks"]}["modular.mean_energy_G4"]["ref"]


def test_conflicting_suite_names(capsys):
    code, _, err = run_cli(capsys, "run", "clifford", "--suite", "modular")
    assert code == 2 and "conflicting" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("run", "nonsense"),
        ("run", "clifford", "--e-max", "1"),
        ("run", "clifford", "--series-order", "4"),
        ("run", "clifford", "--tolerance", "0"),
        ("run", "clifford", "--tolerance", "-1"),
    ],
)
def test_config_errors_exit_2(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_failed_check_exit_1(capsys):
    code, out, _ = run_cli(capsys, "run", "geometry", "--tolerance", "1e-30", "--no-timing")
    assert code == 1
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert rep["status"] == "fail" and rep["counts"]["failed"] > 0


def test_ladder_report_spectrum(capsys):
    code, out, _ = run_cli(capsys, "run", "ladder", "--e-max", "8", "--no-timing")
    assert code == 0
    rows = json.loads(out)["tables"]["spectrum_h0"]
    assert [(r["eigenvalue"], r["multiplicity"]) for r in rows] == [(str(n), n * n) for n in range(1, 9)]


def test_no_timing_is_byte_identical(capsys):
    _, a, _ = run_cli(capsys, "run", "geometry", "--seed", "4", "--no-timing")
    _, b, _ = run_cli(capsys, "run", "geometry", "--seed", "4", "--no-timing")
    assert a == b and "seconds" not in a
    _, c, _ = run_cli(capsys, "run", "geometry", "--seed", "4")
    assert '"seconds"' in c


def test_csv_and_text_output(capsys):
    _, out, _ = run_cli(capsys, "run", "planck", "--output", "csv", "--no-timing")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and set(rows[0]) == {"suite", "id", "ref", "status", "exact", "residual"}
    assert all(r["status"] == "pass" for r in rows)
    _, out, _ = run_cli(capsys, "run", "planck", "--output", "text")
    assert out.splitlines()[-1].startswith("planck:") and "FAIL" not in out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "rep.json"
    code, out, _ = run_cli(capsys, "run", "clifford", "--out-file", str(path))
    assert code == 0 and out == ""
    jsonschema.validate(json.loads(path.read_text()), SCHEMA)


# tables


def test_table_spectrum(capsys):
    code, out, _ = run_cli(capsys, "table", "spectrum", "--e-max", "4", "--helicity", "0", "--output", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["eigenvalue"], r["multiplicity"]) for r in rows] == [("1", "1"), ("2", "4"), ("3", "9"), ("4", "16")]


def test_table_z_coefficients(capsys):
    _, out, _ = run_cli(capsys, "table", "z_coefficients", "--series-order", "8")
    assert [r["coefficient"] for r in json.loads(out)][:5] == ["1", "1", "5", "14", "40"]


def test_table_h_polynomials(capsys):
    _, out, _ = run_cli(capsys, "table", "h_polynomials", "--output", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9
    assert rows[1]["h"] == "2 z4"
    assert rows[0]["h"] == "1"


def test_emit_table_file(tmp_path):
    cfg = SuiteConfig(output="json")
    path = tmp_path / "z.json"
    text = emit_table("z_coefficients", cfg, str(path))
    assert path.read_text() == text
    with pytest.raises(ConfigError):
        emit_table("nope", cfg)


def test_table_planck(capsys):
    code, out, _ = run_cli(capsys, "table", "planck_modes", "--R", "2", "--beta", "1", "--n-max", "5")
    rows = json.loads(out)
    assert code == 0 and [r["n"] for r in rows] == [1, 2, 3, 4, 5]


# ad hoc commands


def test_qseries(capsys):
    _, out, _ = run_cli(capsys, "qseries", "G", "--weight", "4", "--series-order", "10", "--output", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["coefficient"] == "1/240" and rows[3]["coefficient"] == "28"
    code, _, _ = run_cli(capsys, "qseries", "G", "--weight", "2", "--series-order", "10")
    assert code == 2


def test_modular_check(capsys):
    code, out, _ = run_cli(capsys, "modular-check", "--weight", "6", "--tau", "0.3+1.1j")
    assert code == 0 and json.loads(out)[0]["status"] == "pass"
    code, _, _ = run_cli(capsys, "modular-check", "--gamma", "2", "0", "0", "1")
    assert code == 2


def test_planck_command(capsys):
    code, out, _ = run_cli(capsys, "planck", "--R", "1000", "--beta", "1", "--n-max", "3")
    payload = json.loads(out)
    assert code == 0 and abs(payload["stefan_boltzmann"]["ratio"] - 1) < 1e-2


def test_geometry_command(capsys):
    code, out, _ = run_cli(capsys, "geometry", "classify", "0", "0", "0", "0.5", "--output", "csv")
    assert code == 0 and "ForwardTube" in out
    code, out, _ = run_cli(capsys, "geometry", "map", "0", "0", "0", "0")
    assert json.loads(out)[0]["z"] == [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
    code, _, err = run_cli(capsys, "geometry", "map", "0", "1j", "0", "0")
    assert code == 2 and "error" in err


def test_vertex_scan(capsys):
    code, out, _ = run_cli(capsys, "vertex-scan", "--e-max", "20", "--radii", "0.1", "0.2")
    assert code == 0 and len(json.loads(out)) == 2
    # far from the origin the truncated series cannot meet 1e-8
    code, _, _ = run_cli(capsys, "vertex-scan", "--e-max", "6", "--radii", "0.45")
    assert code == 1


# plumbing


def test_threads_env(monkeypatch):
    monkeypatch.setenv("CONFORMAL_LADDER_THREADS", "4")
    a = run_suite(SuiteConfig(suite="all", e_max=4, series_order=40)).to_dict(timing=False)
    monkeypatch.setenv("CONFORMAL_LADDER_THREADS", "1")
    b = run_suite(SuiteConfig(suite="all", e_max=4, series_order=40)).to_dict(timing=False)
    assert a == b
    monkeypatch.setenv("CONFORMAL_LADDER_THREADS", "zero")
    with pytest.raises(ConfigError):
        run_suite(SuiteConfig(suite="clifford"))


def test_jsonable():
    from fractions import Fraction

    from conformal_ladder.algebra_core import ExactComplex

    assert jsonable({"a": Fraction(-3, 4), "b": 2j, "c": ExactComplex(1, Fraction(1, 2)), 1: (Fraction(2),)}) == {
        "a": "-3/4",
        "b": [0.0, 2.0],
        "c": ["1", "1/2"],
        "1": ["2"],
    }


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "conformal_ladder", "run", "clifford", "--output", "text"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and "checks passed" in res.stdout
