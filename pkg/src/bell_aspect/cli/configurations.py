"""Define configurations and the command tree of the ``bell`` command-line interface."""

import math
import re
import typing

import pydantic
import pydantic_settings

from ..domain import ChshSettings
from ..experiment_sim import RECORDS_SOURCE
from ..lhv_models import DEFAULT_NOISE_RATE
from ..lhv_optimizer import OptimizationMethod
from ..logging_bootstrap import LogLevel, RuntimeEnvironment

SETTINGS_FILE = "bell.env"
SETTINGS_FILE_ENCODING = "utf-8"
SETTINGS_PREFIX = "BELL_"

DEFAULT_ANGLES = "pi/4,0,pi/8,-pi/8"

PI_FRACTION_PATTERN = re.compile(
    r"^(?P<sign>[+-]?)(?P<numerator>\d+(?:\.\d*)?)?\*?pi(?:/(?P<denominator>\d+(?:\.\d*)?))?$"
)


def parse_angle(token: str) -> float:
    """Parse decimal radians or a fraction of π such as ``pi/8``, ``-3pi/4`` or ``2*pi``.

    Parameters
    ----------
    token : str
        text to parse

    Returns
    -------
    float
        angle in radians

    Raises
    ------
    ValueError
        if the text is neither a finite number nor a fraction of π

    Examples
    --------
    .. code-block:: pycon

        >>> import math
        >>> from bell_aspect.cli.configurations import parse_angle
        >>> parse_angle("-pi/8") == -math.pi / 8
        True
        >>> parse_angle("0.25")
        0.25
    """
    compact = token.strip().replace(" ", "").lower()

    if match := PI_FRACTION_PATTERN.match(compact):
        sign = -1 if match["sign"] == "-" else 1
        numerator = float(match["numerator"]) if match["numerator"] else 1
        denominator = float(match["denominator"]) if match["denominator"] else 1
        if denominator == 0:
            raise ValueError(f"Angle {token!r} divides by zero.")

        return sign * numerator * math.pi / denominator

    try:
        value = float(compact)
    except ValueError as error:
        raise ValueError(f"Angle {token!r} is neither radians nor a fraction of pi.") from error

    if not math.isfinite(value):
        raise ValueError(f"Angle {token!r} is not finite.")

    return value


def parse_angle_list(text: str) -> list[float]:
    """Parse a comma-separated list of angles.

    Parameters
    ----------
    text : str
        comma-separated angles

    Returns
    -------
    list[float]
        angles in radians
    """
    return [parse_angle(token) for token in text.split(",") if token.strip()]


def parse_float_list(text: str) -> list[float]:
    """Parse a comma-separated list of plain numbers.

    Parameters
    ----------
    text : str
        comma-separated numbers

    Returns
    -------
    list[float]
        parsed values
    """
    return [float(token) for token in text.split(",") if token.strip()]


def validate_angle(value: str) -> str:
    """Validate that a flag value parses as an angle."""
    parse_angle(value)

    return value


def validate_angles(value: str) -> str:
    """Validate that a flag value parses as exactly four angles."""
    if len(parse_angle_list(value)) != 4:  # noqa: PLR2004
        raise ValueError(f"Expected four angles a,a',b,b' but got {value!r}.")

    return value


def validate_angle_list(value: str) -> str:
    """Validate that a flag value parses as a list of angles."""
    parse_angle_list(value)

    return value


def validate_float_list(value: str) -> str:
    """Validate that a flag value parses as a list of numbers."""
    parse_float_list(value)

    return value


AngleText = typing.Annotated[str, pydantic.AfterValidator(validate_angle)]
AnglesText = typing.Annotated[str, pydantic.AfterValidator(validate_angles)]
AngleListText = typing.Annotated[str, pydantic.AfterValidator(validate_angle_list)]
FloatListText = typing.Annotated[str, pydantic.AfterValidator(validate_float_list)]


class OutputOptions(pydantic.BaseModel):
    """Define where a command writes its result."""

    output: str | None = None


class SeededOptions(OutputOptions):
    """Define options of commands that draw random numbers."""

    seed: pydantic.NonNegativeInt | None = None


class ModelOptions(SeededOptions):
    """Define options of commands that evaluate a named hidden-variable model."""

    model: str = "bell_sign"
    epsilon: float | None = pydantic.Field(default=None, ge=0, le=1)


class SettingsOptions(pydantic.BaseModel):
    """Define the four CHSH angles as ``a,a',b,b'``."""

    angles: AnglesText = DEFAULT_ANGLES

    @property
    def chsh_settings(self: typing.Self) -> ChshSettings:
        """Resolve the angle text into CHSH settings."""
        theta_a, theta_a_prime, theta_b, theta_b_prime = parse_angle_list(self.angles)

        return ChshSettings(
            theta_a=theta_a,
            theta_a_prime=theta_a_prime,
            theta_b=theta_b,
            theta_b_prime=theta_b_prime,
        )


class PredictCommand(OutputOptions):
    """Print the exact quantum joint distribution for one angle pair."""

    theta_l: AngleText = "0"
    theta_r: AngleText = "0"


class CurveCommand(OutputOptions):
    """Print the correlation as a function of the angle difference as CSV."""

    points: int = pydantic.Field(default=181, ge=2)
    model: str | None = None


class ChshCommand(SettingsOptions, OutputOptions):
    """Print the exact quantum CHSH result."""


class SimulateCommand(SettingsOptions, SeededOptions):
    """Simulate trials and print the summary, or the trial stream with ``--format csv``."""

    source: str = "qm"
    trials: int = 100_000
    epsilon: float | None = pydantic.Field(default=None, ge=0, le=1)
    export_trials: str | None = None
    format: str = "json"


class EstimateCommand(SettingsOptions, SeededOptions):
    """Recompute the summary of an exported trial CSV.

    The trial stream carries no metadata, so the seed and source of the original run are
    passed as options and echoed in the summary.
    """

    trials: str
    source: str = RECORDS_SOURCE


class LhvEnumerateCommand(SettingsOptions, OutputOptions):
    """Print the 16 deterministic strategies with their CHSH values as CSV."""


class LhvMixturesCommand(SettingsOptions, SeededOptions):
    """Search random convex mixtures of deterministic strategies."""

    count: int = 10_000


class LhvOptimizeCommand(SettingsOptions, SeededOptions):
    """Search a local model family for the largest estimated CHSH value."""

    family: str = "bell_sign_offset"
    iterations: int = 16
    samples: int = 20_000
    method: OptimizationMethod = OptimizationMethod.GRID


class LhvCommand(pydantic.BaseModel):
    """Explore the local bound with deterministic strategies and model families."""

    enumerate: pydantic_settings.CliSubCommand[LhvEnumerateCommand]
    mixtures: pydantic_settings.CliSubCommand[LhvMixturesCommand]
    optimize: pydantic_settings.CliSubCommand[LhvOptimizeCommand]


class CheckNoSignalingCommand(ModelOptions):
    """Check that the right marginal does not depend on the left angle."""

    theta_r: AngleText = "0"
    theta_l_list: AngleListText = "0,pi/8,pi/4"
    n: int = 100_000
    sigma_threshold: float = pydantic.Field(default=4.0, ge=0)


class CheckCoincidenceCommand(ModelOptions):
    """Check that equal angles never give equal readings."""

    theta: AngleText = "0"
    n: int = 100_000


class CheckDetectorIndependenceCommand(ModelOptions):
    """Check that redrawing detector variables never changes a reading."""

    theta_l: AngleText = "0"
    theta_r: AngleText = "pi/8"
    n: int = 10_000
    resamples: int = 8


class CheckFrameIndependenceCommand(SeededOptions):
    """Check that the outcome partition does not depend on the observing frame."""

    frame_coupling: float = 0.0
    betas: FloatListText = "0,0.6"
    theta: AngleText = "0"
    n: int = 100_000


class CheckCommand(pydantic.BaseModel):
    """Run a locality check on a hidden-variable model."""

    no_signaling: pydantic_settings.CliSubCommand[CheckNoSignalingCommand] = pydantic.Field(
        alias="no-signaling"
    )
    coincidence: pydantic_settings.CliSubCommand[CheckCoincidenceCommand]
    detector_independence: pydantic_settings.CliSubCommand[CheckDetectorIndependenceCommand] = (
        pydantic.Field(alias="detector-independence")
    )
    frame_independence: pydantic_settings.CliSubCommand[CheckFrameIndependenceCommand] = (
        pydantic.Field(alias="frame-independence")
    )


class FramesCommand(OutputOptions):
    """Print detection times, time gap and detection orders for a frame velocity."""

    distance: float = 1.0
    beta: float = 0.6


class ModelsCommand(OutputOptions):
    """List the built-in models and parametric families."""


class RuntimeConfigurations(pydantic_settings.BaseSettings):
    """Define runtime configurations of the command-line interface."""

    debug: pydantic_settings.CliImplicitFlag[bool] = False
    runtime_environment: RuntimeEnvironment = RuntimeEnvironment.LOCAL
    log_level: LogLevel | None = None
    log_file: str | None = None


class SimulationConfigurations(pydantic_settings.BaseSettings):
    """Define defaults shared by every simulation command."""

    seed: pydantic.NonNegativeInt = 0
    workers: pydantic.PositiveInt = 1
    epsilon: float = pydantic.Field(default=DEFAULT_NOISE_RATE, ge=0, le=1)


class CommandConfigurations(pydantic_settings.BaseSettings):
    """Define the subcommands of ``bell``."""

    predict: pydantic_settings.CliSubCommand[PredictCommand]
    curve: pydantic_settings.CliSubCommand[CurveCommand]
    chsh: pydantic_settings.CliSubCommand[ChshCommand]
    simulate: pydantic_settings.CliSubCommand[SimulateCommand]
    estimate: pydantic_settings.CliSubCommand[EstimateCommand]
    lhv: pydantic_settings.CliSubCommand[LhvCommand]
    check: pydantic_settings.CliSubCommand[CheckCommand]
    frames: pydantic_settings.CliSubCommand[FramesCommand]
    models: pydantic_settings.CliSubCommand[ModelsCommand]


class Configurations(CommandConfigurations, SimulationConfigurations, RuntimeConfigurations):
    """Aggregate all configurations of the command-line interface."""

    model_config = pydantic_settings.SettingsConfigDict(
        env_file=SETTINGS_FILE,
        env_file_encoding=SETTINGS_FILE_ENCODING,
        env_prefix=SETTINGS_PREFIX,
        extra="ignore",
        cli_prog_name="bell",
        cli_kebab_case=True,
        cli_exit_on_error=False,
        cli_avoid_json=True,
        cli_use_class_docs_for_groups=True,
    )

    @classmethod
    def settings_customise_sources(  # noqa: PLR0913
        cls: type[pydantic_settings.BaseSettings],
        settings_cls: type[pydantic_settings.BaseSettings],
        init_settings: pydantic_settings.PydanticBaseSettingsSource,
        env_settings: pydantic_settings.PydanticBaseSettingsSource,
        dotenv_settings: pydantic_settings.PydanticBaseSettingsSource,
        file_secret_settings: pydantic_settings.PydanticBaseSettingsSource,
    ) -> tuple[pydantic_settings.PydanticBaseSettingsSource, ...]:
        """Read the settings file both with and without the ``BELL_`` prefix.

        Plain ``seed = 7`` lines are read after prefixed ones, so ``BELL_SEED`` wins when a
        file holds both. Environment variables are only read with the prefix.
        """
        plain_dotenv_settings = pydantic_settings.DotEnvSettingsSource(
            settings_cls,
            env_file=SETTINGS_FILE,
            env_file_encoding=SETTINGS_FILE_ENCODING,
            env_prefix="",
        )

        return (
            init_settings,
            env_settings,
            dotenv_settings,
            plain_dotenv_settings,
            file_secret_settings,
        )


__all__ = [
    "DEFAULT_ANGLES",
    "SETTINGS_FILE",
    "SETTINGS_FILE_ENCODING",
    "SETTINGS_PREFIX",
    "CheckCoincidenceCommand",
    "CheckCommand",
    "CheckDetectorIndependenceCommand",
    "CheckFrameIndependenceCommand",
    "CheckNoSignalingCommand",
    "ChshCommand",
    "CommandConfigurations",
    "Configurations",
    "CurveCommand",
    "EstimateCommand",
    "FramesCommand",
    "LhvCommand",
    "LhvEnumerateCommand",
    "LhvMixturesCommand",
    "LhvOptimizeCommand",
    "ModelsCommand",
    "PredictCommand",
    "RuntimeConfigurations",
    "SimulateCommand",
    "SimulationConfigurations",
    "parse_angle",
    "parse_angle_list",
    "parse_float_list",
]
