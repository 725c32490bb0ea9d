import importlib
import json
import math

import pytest

from bell_aspect.cli.main import main

cli_module = importlib.import_module("bell_aspect.cli.main")

pytestmark = pytest.mark.usefixtures("restore_logging", "isolated_cwd")


@pytest.fixture
def isolated_cwd(monkeypatch, tmp_path):
    for name in ("BELL_SEED", "BELL_WORKERS", "BELL_EPSILON", "BELL_DEBUG", "BELL_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)

    return tmp_path


def run_json(capsys, *argv: str) -> dict:
    assert main(list(argv)) == 0

    return json.loads(capsys.readouterr().out)


def test_chsh_reports_tsirelson_value(capsys):
    document = run_json(capsys, "chsh")

    assert document["command"] == "chsh"
    assert document["seed"] == 0
    assert document["inputs"]["angles"] == "pi/4,0,pi/8,-pi/8"
    assert "version" in document
    assert document["result"]["s_value"] == pytest.approx(-2 * math.sqrt(2), abs=1e-12)
    assert document["result"]["verdict"] == "violates_bound"


def test_chsh_prints_seventeen_significant_digits(capsys):
    assert main(["chsh", "--angles", "pi/4,0,pi/8,-pi/8"]) == 0
    text = capsys.readouterr().out

    s_value = json.loads(text)["result"]["s_value"]
    assert f'"s_value": {format(s_value, ".17g")},' in text


def test_predict_prints_quantum_distribution(capsys):
    result = run_json(capsys, "predict", "--theta-l", "0", "--theta-r", "0")["result"]

    assert result["p_pp"] == pytest.approx(0.0, abs=1e-15)
    assert result["p_pm"] == pytest.approx(0.5)
    assert result["p_mp"] == pytest.approx(0.5)


def test_frames_at_rest_are_simultaneous(capsys):
    result = run_json(capsys, "frames", "--distance", "1", "--beta", "0")["result"]

    assert set(result["event_times"].values()) == {1.0}
    assert result["time_gap"] == 0.0
    assert set(result["orderings"].values()) == {"simultaneous"}


def test_frames_default_velocity(capsys):
    result = run_json(capsys, "frames")["result"]

    assert result["gamma"] == 1.25
    assert result["time_gap"] == 1.5
    assert result["orderings"] == {"A": "right_first", "B": "left_first", "source": "simultaneous"}


def test_simulate_is_byte_identical_for_the_same_seed(capsys):
    argv = ["simulate", "--trials", "2000", "--seed", "42"]

    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out

    assert first == second
    assert json.loads(first)["seed"] == 42


def test_root_seed_applies_when_command_has_none(capsys):
    document = run_json(capsys, "--seed", "9", "simulate", "--trials", "400")

    assert document["seed"] == 9
    assert document["result"]["seed"] == 9


def test_exported_trials_reproduce_the_summary(capsys):
    simulated = run_json(
        capsys,
        "simulate",
        "--source",
        "bell_sign",
        "--trials",
        "3000",
        "--seed",
        "5",
        "--export-trials",
        "trials.csv",
    )["result"]
    estimated = run_json(
        capsys, "estimate", "--trials", "trials.csv", "--seed", "5", "--source", "bell_sign"
    )["result"]

    assert estimated["chsh"]["s_value"] == simulated["chsh"]["s_value"]
    assert estimated["pair_counts"] == simulated["pair_counts"]
    assert estimated["seed"] == simulated["seed"] == 5
    assert estimated["source"] == simulated["source"] == "bell_sign"


def test_estimate_echoes_effective_seed_and_default_source(capsys):
    assert main(["simulate", "--trials", "400", "--export-trials", "trials.csv"]) == 0
    capsys.readouterr()

    document = run_json(capsys, "--seed", "3", "estimate", "--trials", "trials.csv")

    assert document["seed"] == document["result"]["seed"] == 3
    assert document["result"]["source"] == "records"


def test_simulate_csv_format_streams_trials(capsys):
    assert main(["simulate", "--trials", "8", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()

    assert lines[0] == "trial,pair,out_l,out_r"
    assert len(lines) == 9


def test_lhv_enumerate_lists_sixteen_strategies(capsys):
    assert main(["lhv", "enumerate"]) == 0
    lines = capsys.readouterr().out.splitlines()

    assert lines[0] == "a_at_theta_a,a_at_theta_a_prime,b_at_theta_b,b_at_theta_b_prime,s_value"
    assert len(lines) == 17
    assert all(abs(float(line.rsplit(",", 1)[1])) <= 2 + 1e-12 for line in lines[1:])


def test_curve_has_requested_points(capsys):
    assert main(["curve", "--points", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()

    assert lines[0] == "delta,E"
    assert lines[1] == "0,-1"
    assert len(lines) == 6


def test_models_lists_builtins_and_families(capsys):
    result = run_json(capsys, "models")["result"]

    assert "bell_sign" in result["models"]
    assert "bell_sign_offset" in result["families"]


def test_check_coincidence_passes_for_bell_sign(capsys):
    document = run_json(capsys, "check", "coincidence", "--model", "bell_sign")

    assert document["command"] == "check coincidence"
    assert document["result"]["statistic"] == 0
    assert document["result"]["passed"] is True


def test_output_flag_writes_file_instead_of_stdout(capsys, isolated_cwd):
    assert main(["chsh", "--output", "result.json"]) == 0

    assert capsys.readouterr().out == ""
    document = json.loads((isolated_cwd / "result.json").read_text(encoding="utf-8"))
    assert document["command"] == "chsh"


def test_too_few_trials_is_invalid_input(capsys):
    assert main(["simulate", "--trials", "2"]) == 1

    captured = capsys.readouterr()
    assert captured.out == ""
    assert "n_trials" in captured.err


def test_unknown_model_is_invalid_input(capsys):
    assert main(["check", "coincidence", "--model", "nope"]) == 1

    assert "nope" in capsys.readouterr().err


def test_unknown_subcommand_prints_usage(capsys):
    assert main(["teleport"]) == 1

    assert "usage: bell" in capsys.readouterr().err


def test_missing_estimate_file_is_invalid_input(capsys):
    assert main(["estimate", "--trials", "absent.csv"]) == 1

    assert "absent.csv" in capsys.readouterr().err


def test_unexpected_failure_is_internal_error(capsys, monkeypatch):
    def explode(*_, **__):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli_module, "exact_chsh", explode)

    assert main(["chsh"]) == 2
    assert "internal error: boom" in capsys.readouterr().err
