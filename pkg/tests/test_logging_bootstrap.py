import json
import logging

import pytest

from bell_aspect.logging_bootstrap import (
    POLICY_MATRIX,
    LoggingBootstrapSettings,
    LoggingComponent,
    LogLevel,
    PolicyKey,
    RuntimeEnvironment,
    build_handlers,
    get_dated_log_file,
    initiate_logging,
    resolve_effective_file_path,
)


def policy_for(settings: LoggingBootstrapSettings):
    return POLICY_MATRIX[
        PolicyKey(
            component=settings.component,
            runtime_environment=settings.runtime_environment,
            debug=settings.debug,
        )
    ]


def test_local_policy_streams_warnings_to_stderr_only():
    settings = LoggingBootstrapSettings(debug=False)
    handlers, root_handlers = build_handlers(settings, policy_for(settings))

    assert root_handlers == ["stream"]
    assert handlers["stream"]["level"] == LogLevel.WARNING
    assert handlers["stream"]["stream"] == "ext://sys.stderr"
    assert "file" not in handlers


def test_explicit_level_enables_dated_file_locally():
    settings = LoggingBootstrapSettings(debug=False, log_level=LogLevel.INFO)
    handlers, root_handlers = build_handlers(settings, policy_for(settings))

    assert root_handlers == ["stream", "file"]
    assert handlers["stream"]["level"] == LogLevel.INFO
    assert handlers["file"]["filename"] == get_dated_log_file(LoggingComponent.BELL_CLI)


def test_debug_policy_logs_everything():
    settings = LoggingBootstrapSettings(debug=True, log_level=LogLevel.ERROR)
    handlers, _ = build_handlers(settings, policy_for(settings))

    assert handlers["stream"]["level"] == LogLevel.DEBUG
    assert handlers["file"]["level"] == LogLevel.DEBUG
    assert handlers["file"]["filename"].startswith("bell_cli_")


def test_production_policy_is_structured_without_file():
    settings = LoggingBootstrapSettings(
        debug=False, runtime_environment=RuntimeEnvironment.PRODUCTION
    )
    handlers, root_handlers = build_handlers(settings, policy_for(settings))

    assert root_handlers == ["stream"]
    assert handlers["stream"]["formatter"] == "structured"


def test_log_file_conflict_fails_in_production():
    settings = LoggingBootstrapSettings(
        debug=False, runtime_environment=RuntimeEnvironment.PRODUCTION, log_file="run.log"
    )

    with pytest.raises(ValueError, match="file logging is disabled"):
        resolve_effective_file_path(settings, policy_for(settings))


def test_log_file_conflict_warns_locally():
    settings = LoggingBootstrapSettings(debug=False, log_file="run.log")
    policy = policy_for(settings)
    policy = type(policy)(
        stream_formatter=policy.stream_formatter,
        stream_level=policy.stream_level,
        file_formatter=None,
        file_level=None,
    )

    with pytest.warns(UserWarning, match="file logging is disabled"):
        assert resolve_effective_file_path(settings, policy) is None


@pytest.mark.usefixtures("restore_logging")
def test_initiate_logging_writes_structured_file(tmp_path):
    log_file = tmp_path / "bell.log"
    initiate_logging(LoggingBootstrapSettings(debug=False, log_file=str(log_file)))

    logging.getLogger("bell_aspect.probe").info(
        "Probe record.", extra={"event.group": "probe", "cli.command.name": "chsh"}
    )
    for handler in logging.getLogger().handlers:
        handler.flush()

    entry = json.loads(log_file.read_text(encoding="utf-8").splitlines()[-1])

    assert entry["message"] == "Probe record."
    assert entry["event.group"] == "probe"
    assert entry["event.status"] == "succeeded"
    assert entry["cli.command.name"] == "chsh"
    assert entry["service.name"] == "bell_cli"
    assert entry["deployment.environment"] == "local"
