import json

import pytest

from sltbeta import cli, io


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def small_csv(tmp_path):
    rows = [
        ("a", [0.98, 0.95, 0.85, 0.7, 0.55, 0.4, 0.1]),
        ("b", [1.0, 0.9, 0.75, 0.5, 0.3, 0.2, 0.05]),
        ("c", [0.9, 0.8, 0.6, 0.35, 0.2, 0.1, 0.0]),
    ]
    delays = [1, 7, 30, 90, 180, 365, 1825]
    text = "subject_id,delay,indifference_point,amount\n" + "".join(
        f"{sid},{d},{v * 100:g},100\n" for sid, vals in rows for d, v in zip(delays, vals)
    )
    p = tmp_path / "small.csv"
    p.write_text(text)
    return p


def test_fit_all_one_record_per_subject_and_method(capsys, tmp_path, small_csv):
    code, out, err = run(capsys, "fit", "--input", str(small_csv), "--method", "all", "--output-dir", str(tmp_path / "o"))
    assert code == 0
    fits, errors = io.read_fits_file(tmp_path / "o" / "fits.json")
    keys = {(f.subject_id, f.method.value) for f in fits} | {(e["subject_id"], e["method"]) for e in errors}
    assert keys == {(s, m) for s in "abc" for m in ("nls", "beta", "slt")}
    assert (tmp_path / "o" / "summary_lnk.csv").exists()
    assert (tmp_path / "o" / "manifest-fit.json").exists()


def test_fit_beta_partial_failure(capsys, tmp_path, small_csv):
    code, out, err = run(capsys, "fit", "--input", str(small_csv), "--method", "beta", "--output-dir", str(tmp_path))
    assert code == 0
    fits, errors = io.read_fits_file(tmp_path / "fits.json")
    assert [f.subject_id for f in fits] == ["a"]
    assert sorted(e["subject_id"] for e in errors) == ["b", "c"]
    assert all(e["error"] == "boundary_value" for e in errors)
    assert err.count("warning:") == 2


def test_simulate_byte_identical(capsys, tmp_path):
    args = ["simulate", "--model", "normal", "--replications", "1000", "--seed", "42"]
    assert run(capsys, *args, "--output-dir", str(tmp_path / "r1"))[0] == 0
    assert run(capsys, *args, "--output-dir", str(tmp_path / "r2"), "--workers", "2")[0] == 0
    a = (tmp_path / "r1" / "simulation_normal.json").read_bytes()
    b = (tmp_path / "r2" / "simulation_normal.json").read_bytes()
    assert a == b
    m = io.read_json(tmp_path / "r1" / "manifest-simulate.json")
    assert m["seed"] == 42


def test_simulate_from_input(capsys, tmp_path, small_csv):
    code, out, _ = run(
        capsys, "simulate", "--input", str(small_csv), "--model", "both", "--replications", "50", "--output-dir", str(tmp_path)
    )
    assert code == 0
    assert io.read_json(tmp_path / "simulation_beta.json")["invalid_count"] == 0


def test_screen(capsys, tmp_path):
    code, out, _ = run(capsys, "screen", "--output-dir", str(tmp_path))
    assert code == 0
    assert "108 of 126" in out
    assert (tmp_path / "screen.csv").read_text().startswith("subject_id,passes")


def test_compare_and_report(capsys, tmp_path):
    assert run(capsys, "compare", "--a", "nls", "--b", "slt", "--output-dir", str(tmp_path))[0] == 0
    doc = io.read_json(tmp_path / "agreement_nls_slt.json")
    assert doc["n"] == 126 and doc["correlation"] > 0.95
    assert run(capsys, "report", "--output-dir", str(tmp_path))[0] == 0
    for name in ("variance_by_delay.csv", "model_variance_slt.csv", "summary_lnk.csv", "manifest-report.json"):
        assert (tmp_path / name).exists()


def test_compare_strict_fails_on_unmatched(capsys, tmp_path):
    code, _, err = run(capsys, "compare", "--a", "nls", "--b", "beta", "--strict", "--output-dir", str(tmp_path))
    assert code == 2
    assert json.loads(err)["error"] == "data"


def test_output_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "env"))
    assert run(capsys, "screen")[0] == 0
    assert (tmp_path / "env" / "screen.csv").exists()


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "fit", "--bogus")
    assert code == 2
    assert json.loads(err) == {"error": "usage", "message": "unrecognized arguments: --bogus"}


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("simulation.seed = 1\nslt.l = -1\n")
    code, _, err = run(capsys, "screen", "--config", str(cfg), "--output-dir", str(tmp_path))
    assert code == 2
    e = json.loads(err)
    assert e["error"] == "config" and "line 2" in e["message"]


def test_missing_input(capsys, tmp_path):
    code, _, err = run(capsys, "fit", "--input", str(tmp_path / "nope.csv"), "--output-dir", str(tmp_path))
    assert code == 3
    assert json.loads(err)["error"] == "io"


def test_invalid_data_reports_row(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("subject_id,delay,indifference_point,amount\ns,1,90,100\ns,7,120,100\ns,30,20,100\n")
    code, _, err = run(capsys, "fit", "--input", str(p), "--output-dir", str(tmp_path))
    assert code == 2
    assert "row 3" in json.loads(err)["message"]
