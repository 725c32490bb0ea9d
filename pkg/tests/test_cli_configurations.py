import math

import pydantic
import pydantic_settings
import pytest

from bell_aspect.cli.configurations import (
    ChshCommand,
    Configurations,
    FramesCommand,
    SimulateCommand,
    parse_angle,
    parse_angle_list,
    parse_float_list,
)
from bell_aspect.cli.main import resolve_command


@pytest.mark.parametrize(
    ("token", "expected"),
    [
        ("pi/8", math.pi / 8),
        ("-pi/8", -math.pi / 8),
        ("-3pi/4", -3 * math.pi / 4),
        ("2*pi", 2 * math.pi),
        ("PI", math.pi),
        (" pi / 2 ", math.pi / 2),
        ("0.25", 0.25),
        ("-1", -1.0),
    ],
)
def test_parse_angle_accepts_radians_and_pi_fractions(token, expected):
    assert parse_angle(token) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("token", ["abc", "pi/0", "inf", "nan", "", "pi/8/2"])
def test_parse_angle_rejects_malformed_text(token):
    with pytest.raises(ValueError, match="Angle"):
        parse_angle(token)


def test_parse_angle_list_skips_blank_entries():
    assert parse_angle_list("pi/4, 0 ,pi/8,-pi/8,") == [
        math.pi / 4,
        0.0,
        math.pi / 8,
        -math.pi / 8,
    ]


def test_parse_float_list():
    assert parse_float_list("0, 0.6,-0.3") == [0.0, 0.6, -0.3]


def test_default_angles_resolve_to_pi_over_eight_spacing(pi8_settings):
    assert ChshCommand().chsh_settings == pi8_settings


@pytest.mark.parametrize("angles", ["0,1,2", "0,1,2,3,4", "0,x,1,2"])
def test_angles_must_be_four_parsable_values(angles):
    with pytest.raises(pydantic.ValidationError):
        ChshCommand(angles=angles)


def test_simulate_rejects_noise_rate_outside_unit_interval():
    with pytest.raises(pydantic.ValidationError):
        SimulateCommand(epsilon=1.5)


@pytest.fixture
def isolated_settings(monkeypatch, tmp_path):
    """Run parsing in an empty directory with no ``BELL_`` variables set."""
    for name in ("BELL_SEED", "BELL_WORKERS", "BELL_EPSILON", "BELL_DEBUG"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)

    return tmp_path


@pytest.mark.usefixtures("isolated_settings")
def test_root_options_precede_the_subcommand():
    settings = pydantic_settings.CliApp.run(
        Configurations, cli_args=["--seed", "7", "--workers", "2", "frames", "--beta", "0.3"]
    )
    command = resolve_command(settings)

    assert settings.seed == 7
    assert settings.workers == 2
    assert isinstance(command, FramesCommand)
    assert command.beta == 0.3
    assert command.distance == 1.0


@pytest.mark.usefixtures("isolated_settings")
def test_kebab_case_flags_and_negative_values():
    settings = pydantic_settings.CliApp.run(
        Configurations,
        cli_args=["simulate", "--angles=0,pi/4,pi/8,-pi/8", "--trials", "40", "--seed", "3"],
    )
    command = resolve_command(settings)

    assert isinstance(command, SimulateCommand)
    assert command.trials == 40
    assert command.seed == 3
    assert command.chsh_settings.theta_b_prime == -math.pi / 8


def test_settings_file_supplies_defaults(isolated_settings):
    (isolated_settings / "bell.env").write_text("BELL_SEED=11\nBELL_WORKERS=3\n", encoding="utf-8")

    settings = pydantic_settings.CliApp.run(Configurations, cli_args=["chsh"])

    assert settings.seed == 11
    assert settings.workers == 3


def test_settings_file_accepts_plain_keys(isolated_settings):
    (isolated_settings / "bell.env").write_text("seed = 7\nworkers = 2\n", encoding="utf-8")

    settings = pydantic_settings.CliApp.run(Configurations, cli_args=["chsh"])

    assert settings.seed == 7
    assert settings.workers == 2


def test_prefixed_key_wins_over_plain_key(isolated_settings):
    (isolated_settings / "bell.env").write_text("seed = 7\nBELL_SEED = 9\n", encoding="utf-8")

    settings = pydantic_settings.CliApp.run(Configurations, cli_args=["chsh"])

    assert settings.seed == 9


def test_environment_overrides_plain_key(isolated_settings, monkeypatch):
    (isolated_settings / "bell.env").write_text("seed = 7\n", encoding="utf-8")
    monkeypatch.setenv("BELL_SEED", "4")

    settings = pydantic_settings.CliApp.run(Configurations, cli_args=["chsh"])

    assert settings.seed == 4


def test_flags_override_the_settings_file(isolated_settings):
    (isolated_settings / "bell.env").write_text("BELL_SEED=11\n", encoding="utf-8")

    settings = pydantic_settings.CliApp.run(Configurations, cli_args=["--seed", "5", "chsh"])

    assert settings.seed == 5


@pytest.mark.usefixtures("isolated_settings")
def test_unknown_subcommand_is_a_settings_error():
    with pytest.raises(pydantic_settings.SettingsError):
        pydantic_settings.CliApp.run(Configurations, cli_args=["teleport"])
