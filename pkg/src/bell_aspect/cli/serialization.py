"""Serialize command results as JSON envelopes and CSV tables."""

import collections.abc
import csv
import enum
import importlib.metadata
import io
import json
import math
import typing

import pydantic

from ..errors import InvalidInputError
from ..experiment_sim import ExperimentSummary, write_trial_csv

DISTRIBUTION_NAME = "bell-aspect"
UNKNOWN_VERSION = "0+unknown"
FLOAT_FORMAT = ".17g"
JSON_INDENT = 2


@enum.unique
class OutputFormat(enum.StrEnum):
    """Define the supported serialization formats."""

    JSON = "json"
    CSV = "csv"


def library_version() -> str:
    """Look up the installed version of the package.

    Returns
    -------
    str
        distribution version, or ``0+unknown`` when the package metadata is unavailable
    """
    try:
        return importlib.metadata.version(DISTRIBUTION_NAME)
    except importlib.metadata.PackageNotFoundError:
        return UNKNOWN_VERSION


class OutputEnvelope(pydantic.BaseModel):
    """Define the JSON document printed by every command."""

    model_config = pydantic.ConfigDict(frozen=True, ser_json_inf_nan="strings")

    command: str
    inputs: dict[str, typing.Any]
    seed: int | None
    version: str = pydantic.Field(default_factory=library_version)
    result: typing.Any


def parse_output_format(output_format: str) -> OutputFormat:
    """Resolve a format name.

    Raises
    ------
    InvalidInputError
        if the format is not supported
    """
    try:
        return OutputFormat(output_format.lower())
    except ValueError as error:
        raise InvalidInputError(
            "format", f"{output_format!r} is not one of {[str(member) for member in OutputFormat]}"
        ) from error


def render_envelope(
    command: str, inputs: dict[str, typing.Any], seed: int | None, result: object
) -> str:
    """Render a command result inside the standard JSON envelope.

    Parameters
    ----------
    command : str
        command path, e.g. ``lhv optimize``
    inputs : dict[str, typing.Any]
        echoed inputs
    seed : int | None
        effective seed
    result : object
        serializable result block

    Returns
    -------
    str
        indented JSON followed by a newline
    """
    envelope = OutputEnvelope(command=command, inputs=inputs, seed=seed, result=result)

    return render_json(envelope.model_dump(mode="json")) + "\n"


def format_float(value: float) -> str:
    """Render a float with 17 significant digits."""
    return format(value, FLOAT_FORMAT)


def format_json_float(value: float) -> str:
    """Render a float as a JSON number with 17 significant digits.

    Non-finite values become the strings ``"Infinity"``, ``"-Infinity"`` and ``"NaN"``.
    """
    if math.isfinite(value):
        return format_float(value)

    return json.dumps("NaN" if math.isnan(value) else ("Infinity" if value > 0 else "-Infinity"))


def render_json(document: object, indent: int = JSON_INDENT, depth: int = 0) -> str:
    """Render JSON-compatible data, printing floats with 17 significant digits.

    Parameters
    ----------
    document : object
        nested dictionaries, lists and scalars, e.g. from ``model_dump(mode="json")``
    indent : int, optional
        spaces per nesting level, by default 2
    depth : int, optional
        current nesting level, by default 0

    Returns
    -------
    str
        indented JSON text without a trailing newline

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.cli.serialization import render_json
        >>> print(render_json({"s_value": 0.1, "passed": True}))
        {
          "s_value": 0.10000000000000001,
          "passed": true
        }
    """
    inner = "\n" + " " * indent * (depth + 1)
    outer = "\n" + " " * indent * depth

    match document:
        case float():
            return format_json_float(document)
        case dict() if document:
            members = (
                f"{inner}{json.dumps(str(key), ensure_ascii=False)}: "
                f"{render_json(value, indent, depth + 1)}"
                for key, value in document.items()
            )
            return "{" + ",".join(members) + outer + "}"
        case list() | tuple() if document:
            items = (f"{inner}{render_json(item, indent, depth + 1)}" for item in document)
            return "[" + ",".join(items) + outer + "]"
        case dict():
            return "{}"
        case list() | tuple():
            return "[]"
        case _:
            return json.dumps(document, ensure_ascii=False)


def render_csv(
    header: collections.abc.Sequence[str], rows: collections.abc.Iterable[collections.abc.Sequence]
) -> str:
    """Render rows as CSV, printing floats with 17 significant digits.

    Parameters
    ----------
    header : collections.abc.Sequence[str]
        column names
    rows : collections.abc.Iterable[collections.abc.Sequence]
        table rows

    Returns
    -------
    str
        CSV text with ``\\n`` line endings
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(
        [format_float(cell) if isinstance(cell, float) else cell for cell in row] for row in rows
    )

    return buffer.getvalue()


def serialize_summary(summary: ExperimentSummary, output_format: str) -> str:
    """Serialize an experiment summary.

    Parameters
    ----------
    summary : ExperimentSummary
        summary to serialize
    output_format : str
        ``json`` for the summary fields, ``csv`` for the attached trial stream

    Returns
    -------
    str
        serialized text

    Raises
    ------
    InvalidInputError
        if the format is unsupported, or CSV is requested for a summary without records
    """
    match parse_output_format(output_format):
        case OutputFormat.JSON:
            return render_json(summary.model_dump(mode="json")) + "\n"
        case OutputFormat.CSV:
            if summary.records is None:
                raise InvalidInputError("summary", "CSV output needs the trial records")

            return write_trial_csv(summary.records)


__all__ = [
    "OutputEnvelope",
    "OutputFormat",
    "format_float",
    "format_json_float",
    "library_version",
    "parse_output_format",
    "render_csv",
    "render_envelope",
    "render_json",
    "serialize_summary",
]
