"""Simulate Bell-type experiments and test local hidden-variable models against them."""

from .chsh_analysis import ChshResult, Verdict, exact_chsh
from .cli import cli_main
from .domain import ChshSettings, Correlation, JointDistribution, Outcome, SettingPair, Side
from .errors import InvalidInputError, UnknownNameError
from .experiment_sim import ExperimentSummary, estimate_from_records, run_experiment
from .quantum_predictions import correlation, exact_distribution
from .relativity import frames_report

__all__ = [
    "ChshResult",
    "ChshSettings",
    "Correlation",
    "ExperimentSummary",
    "InvalidInputError",
    "JointDistribution",
    "Outcome",
    "SettingPair",
    "Side",
    "UnknownNameError",
    "Verdict",
    "cli_main",
    "correlation",
    "estimate_from_records",
    "exact_chsh",
    "exact_distribution",
    "frames_report",
    "run_experiment",
]
