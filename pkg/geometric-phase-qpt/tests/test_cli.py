import json

import pytest

import validation
from main import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main

XY_SWEEP = ["sweep", "--model", "xy", "--gamma", "1", "--lambda-range", "0:1:3", "--sizes", "3,5"]


def test_sweep_writes_csv_file(tmp_path):
    out = tmp_path / "xy.csv"
    assert main(XY_SWEEP + ["--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "gamma,lambda,n,beta_g,dbeta_dlambda"
    assert len(lines) == 7


def test_sweep_writes_json_to_stdout(capsys):
    assert main(XY_SWEEP + ["--format", "json"]) == EXIT_OK
    records = json.loads(capsys.readouterr().out)
    assert len(records) == 6
    assert records[0]["n"] == 3


def test_usage_errors_exit_with_one(capsys):
    assert main(XY_SWEEP[:-1] + ["4"]) == EXIT_USAGE
    assert main(XY_SWEEP + ["--colour", "red"]) == EXIT_USAGE
    assert main(["sweep", "--lambda-range", "0:1"]) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "run.toml"
    config.write_text('model = "xy"\nlambda-range = "0:1:3"\nsizes = "3"\n')
    out = tmp_path / "xy.csv"
    assert main(["sweep", "--config", str(config), "--sizes", "5", "--out", str(out)]) == EXIT_OK
    rows = out.read_text().splitlines()[1:]
    assert len(rows) == 3
    assert all(row.split(",")[2] == "5" for row in rows)


def test_missing_config_file(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "absent.toml")]) == EXIT_USAGE


def test_bad_thread_environment(monkeypatch):
    monkeypatch.setenv("QPT_GEOM_THREADS", "many")
    assert main(XY_SWEEP) == EXIT_USAGE


def test_plot_from_sweep_csv(tmp_path):
    data = tmp_path / "xy.csv"
    assert main(XY_SWEEP + ["--out", str(data)]) == EXIT_OK
    chart = tmp_path / "xy.svg"
    assert main(["plot", str(data), "--out", str(chart), "--y", "beta_g"]) == EXIT_OK
    assert chart.read_text().lstrip().startswith("<?xml")


def test_plot_rejects_empty_csv(tmp_path):
    data = tmp_path / "empty.csv"
    data.write_text("")
    chart = tmp_path / "empty.svg"
    assert main(["plot", str(data), "--out", str(chart)]) == EXIT_USAGE
    assert not chart.exists()


def test_scaling_report_for_xx_chain(capsys):
    assert main(["scaling", "--model", "xy", "--gamma", "0"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["model"] == "xy"
    assert report["nu"] == pytest.approx(0.5, abs=0.02)
    assert report["z"] == pytest.approx(2.0, abs=1e-3)
    assert report["kappa1"] is None
    assert "xx_derivative" in report["fits"]


def test_scaling_rejects_dicke():
    assert main(["scaling", "--model", "dicke"]) == EXIT_USAGE


def test_scaling_rejects_gamma_range():
    assert main(["scaling", "--model", "xy", "--gamma", "0:1:3"]) == EXIT_USAGE


@pytest.mark.slow
def test_oracle_command_passes(capsys):
    assert main(["oracle"]) == EXIT_OK
    assert "11 passed, 0 failed" in capsys.readouterr().out


@pytest.mark.slow
def test_oracle_command_reports_broken_derivative(monkeypatch, capsys):
    original = validation.phase_derivative_finite
    monkeypatch.setattr(validation, "phase_derivative_finite", lambda params: 1.01 * original(params))
    assert main(["oracle"]) == EXIT_NUMERICAL
    assert "FAIL  derivative-vs-finite-difference" in capsys.readouterr().out
