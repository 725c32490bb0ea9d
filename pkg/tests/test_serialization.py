import json
import math

import pytest

from bell_aspect.cli.serialization import (
    OutputFormat,
    format_float,
    library_version,
    parse_output_format,
    render_csv,
    render_envelope,
    render_json,
    serialize_summary,
)
from bell_aspect.errors import InvalidInputError
from bell_aspect.experiment_sim import run_experiment


def test_parse_output_format_ignores_case():
    assert parse_output_format("CSV") is OutputFormat.CSV
    assert parse_output_format("json") is OutputFormat.JSON


def test_parse_output_format_rejects_unknown_names():
    with pytest.raises(InvalidInputError, match="xml"):
        parse_output_format("xml")


def test_envelope_carries_command_inputs_seed_and_version():
    text = render_envelope("chsh", {"angles": "0,0,0,0"}, 42, {"s_value": 2.0})
    document = json.loads(text)

    assert text.endswith("\n")
    assert document == {
        "command": "chsh",
        "inputs": {"angles": "0,0,0,0"},
        "seed": 42,
        "version": library_version(),
        "result": {"s_value": 2.0},
    }


@pytest.mark.parametrize(
    ("value", "expected"),
    [(0.1, "0.10000000000000001"), (1.0, "1"), (-0.5, "-0.5"), (2**0.5, "1.4142135623730951")],
)
def test_format_float_keeps_seventeen_significant_digits(value, expected):
    assert format_float(value) == expected


def test_render_csv_formats_only_float_cells():
    text = render_csv(("delta", "E", "label"), [(0.5, -1.0, "x"), (1, 0.25, "+1")])

    assert text == "delta,E,label\n0.5,-1,x\n1,0.25,+1\n"


def test_serialize_summary_as_json_omits_records(pi8_settings):
    summary = run_experiment("qm", pi8_settings, 16, 4, keep_records=True)
    document = json.loads(serialize_summary(summary, "json"))

    assert document["n_trials"] == 16
    assert document["seed"] == 4
    assert "records" not in document


def test_serialize_summary_as_csv_writes_trial_stream(pi8_settings):
    summary = run_experiment("qm", pi8_settings, 16, 4, keep_records=True)
    lines = serialize_summary(summary, "csv").splitlines()

    assert lines[0] == "trial,pair,out_l,out_r"
    assert len(lines) == 17


def test_serialize_summary_as_csv_needs_records(pi8_settings):
    summary = run_experiment("qm", pi8_settings, 16, 4)

    with pytest.raises(InvalidInputError, match="records"):
        serialize_summary(summary, "csv")


def test_render_json_prints_seventeen_significant_digits():
    text = render_json({"value": 0.1, "values": [1.0, 2**0.5], "label": "θ", "empty": []})

    assert text == (
        "{\n"
        '  "value": 0.10000000000000001,\n'
        '  "values": [\n'
        "    1,\n"
        "    1.4142135623730951\n"
        "  ],\n"
        '  "label": "θ",\n'
        '  "empty": []\n'
        "}"
    )
    assert json.loads(text)["value"] == 0.1


@pytest.mark.parametrize(
    ("value", "expected"),
    [(math.inf, '"Infinity"'), (-math.inf, '"-Infinity"'), (math.nan, '"NaN"')],
)
def test_non_finite_floats_become_strings(value, expected):
    assert render_json(value) == expected


def test_envelope_floats_keep_seventeen_significant_digits():
    text = render_envelope("chsh", {}, 0, {"s_value": 0.1, "passed": True, "missing": None})

    assert '"s_value": 0.10000000000000001,' in text
    assert '"passed": true,' in text
    assert '"missing": null' in text


def test_summary_json_floats_read_back_exactly(pi8_settings):
    summary = run_experiment("qm", pi8_settings, 400, 4)
    document = json.loads(serialize_summary(summary, "json"))

    assert document["chsh"]["s_value"] == summary.chsh.s_value
    assert document["chsh"]["standard_error"] == summary.chsh.standard_error
