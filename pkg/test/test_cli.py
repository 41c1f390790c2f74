import json
import time
import pandas as pd
import pytest
from scipy import constants as codata
from app.emitters import emit, emit_config, render_json, run_metadata
from app.errors import ExitCode, UsageError
from app.interfaces import RunConfig
from app.main import main, parse_config, run
from app.models.reports import CheckResult, RunReport
from app.run_service import HANDLERS


def read_csv(path):
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline()
    return header, pd.read_csv(path, comment="#")


def test_flags_fill_defaults():
    config = parse_config(["unruh-expected", "--a", "1", "--t-obs", "12"])
    assert config.command == "unruh-expected"
    assert config.unruh.acceleration == 1.0 and config.unruh.t_obs == 12.0
    assert config.unruh.delta_x == 0.02 and config.unruh.window == "hann"
    assert config.seed == 0 and config.format == "csv" and config.unit_system == "natural"


def test_si_needs_constants_file():
    with pytest.raises(UsageError, match="--constants"):
        parse_config(["spectra", "--unit-system", "si"])


def test_si_with_constants_file(tmp_path):
    constants = tmp_path / "codata.json"
    constants.write_text(json.dumps({"hbar": 1.054571817e-34, "c": 299792458.0, "k_b": 1.380649e-23}))
    config = parse_config(["spectra", "--unit-system", "si", "--constants", str(constants)])
    assert config.physical_constants().c == 299792458.0


def test_constants_file_falls_back_to_codata(tmp_path):
    constants = tmp_path / "partial.json"
    constants.write_text(json.dumps({"c": 1.0}))
    k = parse_config(["wien", "--unit-system", "si", "--constants", str(constants)]).physical_constants()
    assert k.c == 1.0
    assert k.hbar == codata.hbar and k.k_b == codata.k
    assert k.unit_system == "si"


def test_constants_file_needs_si(tmp_path):
    constants = tmp_path / "codata.json"
    constants.write_text(json.dumps({"c": 1.0}))
    with pytest.raises(UsageError, match="--unit-system si"):
        parse_config(["spectra", "--constants", str(constants)])


def test_si_run_metadata_says_si(output_dir, tmp_path):
    constants = tmp_path / "codata.json"
    constants.write_text(json.dumps({"hbar": 1.054571817e-34}))
    config = parse_config(["gamma-check", "--unit-system", "si", "--constants", str(constants)])
    assert run_metadata(config)["units"] == "si"


def test_flag_overrides_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "ode", "seed": 3, "ode": {"omega": 2.0, "steps": 500}}))
    config = parse_config(["--config", str(path), "--seed", "5", "--steps", "800"])
    assert config.seed == 5
    assert config.ode.steps == 800
    assert config.ode.omega == 2.0


def test_config_file_argument(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "wien", "format": "json"}))
    assert parse_config([], config_file=str(path)).format == "json"


def test_unknown_config_key_is_rejected(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "ode", "tolerence": 1e-3}))
    with pytest.raises(UsageError, match="tolerence"):
        parse_config(["--config", str(path)])


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["ode", "--bogus", "1"], "--bogus"),
        (["ode", "--seed", "-4"], "--seed"),
        (["unruh-mc", "--n", "1"], "--n"),
        (["teleport"], "--command"),
        ([], "command"),
    ],
)
def test_usage_errors_name_the_flag(argv, flag):
    with pytest.raises(UsageError, match=flag):
        parse_config(argv)


def test_no_fade_flag():
    assert parse_config(["unruh-expected", "--no-fade", "--t-obs", "2"]).unruh.fade_factor is None


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["unruh-expected", "--no-fade"], "--no-fade"),
        (["unruh-mc", "--dtau", "1e-6"], "--dtau"),
        (["all-checks", "--fade-factor", "1e6"], "--fade-factor"),
    ],
)
def test_oversized_window_is_a_usage_error(argv, flag):
    with pytest.raises(UsageError, match=flag):
        parse_config(argv)


def test_oversized_window_exits_before_simulating(output_dir):
    assert main(["unruh-expected", "--no-fade"]) == ExitCode.USAGE


def test_config_round_trip(tmp_path):
    config = parse_config(["unruh-mc", "--seed", "7", "--n", "100", "--no-fade", "--dtau", "0.001"])
    path = emit_config(config, tmp_path / "config.json")
    assert parse_config(["--config", str(path)]) == config


def test_usage_error_exit_code(output_dir):
    assert main(["spectra", "--unit-system", "si"]) == ExitCode.USAGE


def test_gamma_check_emits_residual_pairs(output_dir):
    assert main(["gamma-check"]) == ExitCode.OK
    header, frame = read_csv(output_dir / "gamma-check.csv")
    assert header.startswith("# seed=0 units=natural command=gamma-check version=")
    assert list(frame.columns) == ["x", "residual"]
    assert frame["residual"].abs().max() <= 1e-9


def test_ode_command(output_dir, tmp_path):
    out = tmp_path / "ode.csv"
    code = main(["ode", "--omega", "1", "--t-start", "0.1", "--t-end", "2", "--out", str(out)])
    assert code == ExitCode.OK
    _, frame = read_csv(out)
    assert list(frame.columns) == ["T", "rho_numeric", "rho_closed", "rel_err"]
    assert len(frame) == 2001
    assert frame["rel_err"].max() <= 1e-6


def test_csv_precision(output_dir):
    config = parse_config(["spectra", "--kind", "zeropoint", "--n-omega", "5"])
    report = run(config)
    assert report.passed
    with open(report.outputs[0], "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    assert lines[1] == "omega,value,kind,temperature"
    mantissa = lines[2].split(",")[0].split("e")[0]
    assert len(mantissa.replace("-", "").replace(".", "")) >= 15


@pytest.mark.parametrize("command", ["spectra", "invariance", "wien", "kinematics", "fluctuations"])
def test_fast_commands_pass(output_dir, command):
    report = run(parse_config([command]))
    assert report.error is None
    assert report.passed, [check for check in report.checks if not check.passed]
    assert report.exit_code == ExitCode.OK


def test_numeric_error_names_module(output_dir):
    report = run(parse_config(["ode", "--t-start", "0.01"]))
    assert report.exit_code == ExitCode.CHECK_FAILED
    assert "app.physics.fluctuations" in report.error
    assert report.outputs == []


def test_failed_tolerance_gives_exit_one(output_dir, tmp_path):
    path = tmp_path / "strict.json"
    path.write_text(json.dumps({"command": "ode", "tolerances": {"ode": 1e-30}}))
    assert main(["--config", str(path)]) == ExitCode.CHECK_FAILED


def test_json_output(output_dir, tmp_path):
    out = tmp_path / "wien.json"
    run(parse_config(["wien", "--format", "json", "--out", str(out)]))
    payload = json.loads(out.read_text())
    assert payload["metadata"]["command"] == "wien"
    assert {"omega", "lambda", "adiabatic_relative", "scaling_residual"} <= set(payload["records"][0])


def test_report_json_has_pass_flags():
    config = RunConfig(command="gamma-check", seed=4)
    report = RunReport(
        command="gamma-check",
        seed=4,
        unit_system="natural",
        version="test",
        checks=[
            CheckResult.within("ok", "m", 1e-12, 1e-9),
            CheckResult.within("bad", "m", 1.0, 1e-9),
            CheckResult.within("nan", "m", float("nan"), 1e-9),
        ],
    )
    payload = json.loads(render_json(report, run_metadata(config)))
    assert payload["metadata"]["seed"] == "4"
    assert [check["passed"] for check in payload["checks"]] == [True, False, False]
    assert payload["passed"] is False and payload["exit_code"] == 1


def test_atomic_write_leaves_no_temporaries(tmp_path):
    config = RunConfig(command="spectra")
    frame = pd.DataFrame({"a": [1.0, 2.0]})
    emit(frame, "csv", tmp_path / "deep" / "table.csv", run_metadata(config))
    assert [p.name for p in (tmp_path / "deep").iterdir()] == ["table.csv"]


@pytest.mark.slow
def test_monte_carlo_output_is_byte_identical(output_dir, tmp_path):
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    main(["unruh-mc", "--seed", "7", "--n", "100", "--out", str(first)])
    main(["unruh-mc", "--seed", "7", "--n", "100", "--n-jobs", "2", "--out", str(second)])
    assert first.exists()
    assert first.read_bytes() == second.read_bytes()


def test_emitted_report_carries_timing_and_outputs(output_dir, tmp_path, monkeypatch):
    def slow_checks(config, k):
        time.sleep(0.02)
        return None, [CheckResult.within("quick", "test", 0.0, 1.0)]

    monkeypatch.setitem(HANDLERS, "all-checks", slow_checks)
    out = tmp_path / "report.json"
    report = run(parse_config(["all-checks", "--format", "json", "--out", str(out)]))
    payload = json.loads(out.read_text())
    assert payload["wall_time_s"] >= 0.02
    assert payload["wall_time_s"] <= report.wall_time_s
    assert payload["outputs"] == [str(out)]
    assert payload["checks"][0]["name"] == "quick"
