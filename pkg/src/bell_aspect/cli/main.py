"""Dispatch the ``bell`` command-line interface."""

import logging
import math
import pathlib
import sys
import typing

import numpy as np
import pydantic
import pydantic_settings

from ..chsh_analysis import exact_chsh
from ..errors import InvalidInputError, UnknownNameError
from ..experiment_sim import (
    QUANTUM_SOURCE,
    estimate_from_records,
    read_trial_csv,
    run_experiment,
    write_trial_csv,
)
from ..lhv_models import (
    LhvModel,
    available_families,
    available_models,
    builtin_model,
    check_detector_independence,
    check_frame_independence,
    check_no_signaling,
    check_surface_coincidence,
    correlation_by_quadrature,
    parametric_family,
)
from ..lhv_optimizer import enumerate_deterministic, max_mixture_chsh, optimize_parametric
from ..logging_bootstrap import LoggingBootstrapSettings, initiate_logging
from ..quantum_predictions import correlation, exact_distribution
from ..relativity import ExperimentGeometry, frames_report
from .configurations import (
    CheckCoincidenceCommand,
    CheckDetectorIndependenceCommand,
    CheckFrameIndependenceCommand,
    CheckNoSignalingCommand,
    ChshCommand,
    Configurations,
    CurveCommand,
    EstimateCommand,
    FramesCommand,
    LhvEnumerateCommand,
    LhvMixturesCommand,
    LhvOptimizeCommand,
    ModelOptions,
    ModelsCommand,
    OutputOptions,
    PredictCommand,
    SeededOptions,
    SimulateCommand,
    parse_angle,
    parse_angle_list,
    parse_float_list,
)
from .console import emit_result, report_error
from .serialization import (
    OutputFormat,
    parse_output_format,
    render_csv,
    render_envelope,
    serialize_summary,
)

LOGGER = logging.getLogger(__name__)

HELP_MESSAGE = """
usage: bell [global options] <command> [options]

commands:
  predict --theta-l <r> --theta-r <r>
      Exact joint distribution for one angle pair.
  curve --points <n> [--model <name>]
      CSV delta,E of the correlation over [0, pi].
  chsh --angles <a,a',b,b'>
      Exact quantum CHSH result.
  simulate --source <qm|model> --angles <...> --trials <n> --seed <s> [--export-trials <path>]
      Simulated summary as JSON, or the trial stream with --format csv.
  estimate --trials <path> --angles <...>
      Summary recomputed from an exported trial CSV.
  lhv enumerate|mixtures|optimize --angles <...>
      Deterministic strategies, random mixtures, or a parametric family search.
  check no-signaling|coincidence|detector-independence|frame-independence --model <name>
      Locality checks of a hidden-variable model.
  frames --distance <d> --beta <v>
      Detection times, time gap and detection orders.
  models
      Built-in models and parametric families.

Angles accept decimal radians or fractions of pi such as pi/8 or -3pi/4; pass negative values
as --flag=-pi/8. Run `bell <command> --help` for every option.
"""

INPUT_ERRORS = (
    InvalidInputError,
    UnknownNameError,
    pydantic.ValidationError,
    pydantic_settings.SettingsError,
)

COMMAND_NAMES: dict[type[pydantic.BaseModel], str] = {
    PredictCommand: "predict",
    CurveCommand: "curve",
    ChshCommand: "chsh",
    SimulateCommand: "simulate",
    EstimateCommand: "estimate",
    LhvEnumerateCommand: "lhv enumerate",
    LhvMixturesCommand: "lhv mixtures",
    LhvOptimizeCommand: "lhv optimize",
    CheckNoSignalingCommand: "check no-signaling",
    CheckCoincidenceCommand: "check coincidence",
    CheckDetectorIndependenceCommand: "check detector-independence",
    CheckFrameIndependenceCommand: "check frame-independence",
    FramesCommand: "frames",
    ModelsCommand: "models",
}

EXIT_SUCCESS = 0
EXIT_INVALID_INPUT = 1
EXIT_INTERNAL_ERROR = 2


class CommandContext:
    """Resolve effective options of one invocation from its command and the root settings.

    Parameters
    ----------
    settings : Configurations
        parsed root settings
    command : OutputOptions
        selected leaf command
    """

    def __init__(self: typing.Self, settings: Configurations, command: OutputOptions) -> None:
        self.settings = settings
        self.command = command
        self.name = COMMAND_NAMES[type(command)]

    @property
    def seed(self: typing.Self) -> int:
        """Use the command's seed when given, else the configured one."""
        seed = getattr(self.command, "seed", None)

        return self.settings.seed if seed is None else seed

    @property
    def epsilon(self: typing.Self) -> float:
        """Use the command's noise rate when given, else the configured one."""
        epsilon = getattr(self.command, "epsilon", None)

        return self.settings.epsilon if epsilon is None else epsilon

    @property
    def inputs(self: typing.Self) -> dict[str, typing.Any]:
        """Echo the command options together with the effective shared options."""
        echoed = self.command.model_dump(mode="json", exclude={"output"})
        echoed.update(workers=self.settings.workers)
        if isinstance(self.command, SeededOptions):
            echoed.update(seed=self.seed)
        if isinstance(self.command, ModelOptions | SimulateCommand):
            echoed.update(epsilon=self.epsilon)

        return echoed

    def model(self: typing.Self, name: str) -> LhvModel:
        """Build a built-in model with the effective noise rate."""
        return builtin_model(name, epsilon=self.epsilon)

    def envelope(self: typing.Self, result: object) -> str:
        """Wrap a result in the JSON envelope of this invocation."""
        return render_envelope(self.name, self.inputs, self.seed, result)


def run_curve(context: CommandContext, command: CurveCommand) -> str:
    """Tabulate the correlation against the angle difference."""
    deltas = np.linspace(0, math.pi, command.points).tolist()

    if command.model is None:
        values = [correlation(delta, 0.0) for delta in deltas]
    else:
        model = context.model(command.model)
        values = [correlation_by_quadrature(model, delta, 0.0) for delta in deltas]

    return render_csv(("delta", "E"), zip(deltas, values, strict=True))


def run_simulate(context: CommandContext, command: SimulateCommand) -> str:
    """Simulate trials and serialize the summary or the trial stream."""
    output_format = parse_output_format(command.format)
    source = QUANTUM_SOURCE if command.source == QUANTUM_SOURCE else context.model(command.source)

    summary = run_experiment(
        source,
        command.chsh_settings,
        command.trials,
        context.seed,
        keep_records=command.export_trials is not None or output_format == OutputFormat.CSV,
        workers=context.settings.workers,
    )

    if command.export_trials is not None and summary.records is not None:
        pathlib.Path(command.export_trials).write_text(
            write_trial_csv(summary.records), encoding="utf-8"
        )

    if output_format == OutputFormat.CSV:
        return serialize_summary(summary, output_format)

    return context.envelope(summary)


def run_estimate(context: CommandContext, command: EstimateCommand) -> str:
    """Recompute a summary from an exported trial CSV."""
    try:
        text = pathlib.Path(command.trials).read_text(encoding="utf-8")
    except OSError as error:
        raise InvalidInputError("trials", f"cannot read {command.trials!r}: {error}") from error

    summary = estimate_from_records(
        read_trial_csv(text), command.chsh_settings, seed=context.seed, source=command.source
    )

    return context.envelope(summary)


def run_enumerate(command: LhvEnumerateCommand) -> str:
    """Tabulate the deterministic strategies."""
    header = ("a_at_theta_a", "a_at_theta_a_prime", "b_at_theta_b", "b_at_theta_b_prime")

    return render_csv(
        (*header, "s_value"),
        (
            (*(f"{int(getattr(report.strategy, name)):+d}" for name in header), report.s_value)
            for report in enumerate_deterministic(command.chsh_settings)
        ),
    )


def run_models(context: CommandContext) -> str:
    """List the built-in models and parametric families."""
    return context.envelope(
        {
            "models": available_models(),
            "families": {
                name: [parameter.model_dump() for parameter in parametric_family(name).parameters]
                for name in available_families()
            },
        }
    )


def execute_command(context: CommandContext) -> str:  # noqa: C901
    """Run the selected command and serialize its result.

    Parameters
    ----------
    context : CommandContext
        resolved invocation

    Returns
    -------
    str
        serialized result
    """
    seed = context.seed
    workers = context.settings.workers

    match context.command:
        case PredictCommand() as command:
            return context.envelope(
                exact_distribution(parse_angle(command.theta_l), parse_angle(command.theta_r))
            )
        case CurveCommand() as command:
            return run_curve(context, command)
        case ChshCommand() as command:
            return context.envelope(exact_chsh(command.chsh_settings))
        case SimulateCommand() as command:
            return run_simulate(context, command)
        case EstimateCommand() as command:
            return run_estimate(context, command)
        case LhvEnumerateCommand() as command:
            return run_enumerate(command)
        case LhvMixturesCommand() as command:
            return context.envelope(max_mixture_chsh(command.chsh_settings, command.count, seed))
        case LhvOptimizeCommand() as command:
            return context.envelope(
                optimize_parametric(
                    command.family,
                    command.chsh_settings,
                    command.iterations,
                    command.samples,
                    seed,
                    method=command.method,
                    workers=workers,
                )
            )
        case CheckNoSignalingCommand() as command:
            return context.envelope(
                check_no_signaling(
                    context.model(command.model),
                    parse_angle(command.theta_r),
                    parse_angle_list(command.theta_l_list),
                    command.n,
                    seed,
                    sigma_threshold=command.sigma_threshold,
                )
            )
        case CheckCoincidenceCommand() as command:
            return context.envelope(
                check_surface_coincidence(
                    context.model(command.model), parse_angle(command.theta), command.n, seed
                )
            )
        case CheckDetectorIndependenceCommand() as command:
            return context.envelope(
                check_detector_independence(
                    context.model(command.model),
                    parse_angle(command.theta_l),
                    parse_angle(command.theta_r),
                    command.n,
                    resamples=command.resamples,
                    seed=seed,
                )
            )
        case CheckFrameIndependenceCommand() as command:
            return context.envelope(
                check_frame_independence(
                    command.frame_coupling,
                    parse_angle(command.theta),
                    parse_float_list(command.betas),
                    command.n,
                    seed,
                )
            )
        case FramesCommand() as command:
            return context.envelope(
                frames_report(ExperimentGeometry(d=command.distance), command.beta)
            )
        case ModelsCommand():
            return run_models(context)
        case _:
            raise TypeError(f"Unsupported command {type(context.command).__name__}.")


def resolve_command(settings: Configurations) -> OutputOptions:
    """Descend the subcommand tree to the selected leaf command.

    Parameters
    ----------
    settings : Configurations
        parsed root settings

    Returns
    -------
    OutputOptions
        leaf command

    Raises
    ------
    pydantic_settings.SettingsError
        if no subcommand was given at some level
    """
    command: pydantic.BaseModel = settings
    while not isinstance(command, OutputOptions):
        command = pydantic_settings.get_subcommand(
            command, is_required=True, cli_exit_on_error=False
        )

    return command


def handle_command(context: CommandContext) -> None:
    """Run a command, log its life cycle and emit its result.

    Parameters
    ----------
    context : CommandContext
        resolved invocation
    """
    LOGGER.info(
        f"CLI command received: {context.name}.",
        extra={
            "event.group": "interaction",
            "event.type": "command",
            "event.action": "handle",
            "event.status": "started",
            "cli.command.name": context.name,
        },
    )

    try:
        text = execute_command(context)
        emit_result(text, context.command.output)
    except Exception:
        LOGGER.warning(
            f"CLI command failed: {context.name}.",
            extra={
                "event.group": "interaction",
                "event.type": "command",
                "event.action": "handle",
                "event.status": "failed",
                "cli.command.name": context.name,
            },
        )

        raise

    LOGGER.info(
        f"CLI command completed: {context.name}.",
        extra={
            "event.group": "interaction",
            "event.type": "command",
            "event.action": "handle",
            "event.status": "succeeded",
            "cli.command.name": context.name,
        },
    )


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run the selected command and map the outcome to an exit code.

    Parameters
    ----------
    argv : list[str] | None, optional
        command-line arguments without the program name, by default the process arguments

    Returns
    -------
    int
        0 on success, 1 on invalid input, 2 on internal error
    """
    try:
        settings = pydantic_settings.CliApp.run(
            Configurations, cli_args=sys.argv[1:] if argv is None else argv
        )
        initiate_logging(
            LoggingBootstrapSettings(
                debug=settings.debug,
                runtime_environment=settings.runtime_environment,
                log_level=settings.log_level,
                log_file=settings.log_file,
            )
        )
        context = CommandContext(settings, resolve_command(settings))
    except (*INPUT_ERRORS, ValueError) as error:
        report_error(str(error), usage=HELP_MESSAGE)

        return EXIT_INVALID_INPUT

    try:
        handle_command(context)
    except INPUT_ERRORS as error:
        report_error(str(error))

        return EXIT_INVALID_INPUT
    except Exception as error:
        LOGGER.exception(
            f"Internal error while running {context.name}.",
            exc_info=True,
            extra={
                "event.group": "runtime",
                "event.type": "lifecycle",
                "event.action": "run",
                "event.status": "failed",
                "cli.command.name": context.name,
            },
        )
        report_error(f"internal error: {error}")

        return EXIT_INTERNAL_ERROR

    return EXIT_SUCCESS


def cli_main() -> None:
    """Define the console script entry point."""
    sys.exit(main())


__all__ = ["HELP_MESSAGE", "cli_main", "main"]
