"""Simulate the two-photon experiment trial by trial and estimate the CHSH statistic.

Every trial draws one of the four setting pairs and then a pair of readings, either from the
quantum joint distribution or from a hidden-variable model. Pairs are drawn as shuffled
blocks of four, so each trial's pair is uniform and every pair appears once four trials have
run.
"""

import csv
import io
import logging
import typing

import numpy as np
import pydantic

from .chsh_analysis import (
    ChshResult,
    chsh_from_correlations,
    correlation_from_distribution,
    violation_sigmas,
)
from .domain import ChshSettings, Correlation, JointDistribution, Outcome, SettingPair
from .errors import InvalidInputError
from .lhv_models import LhvModel, distribution_from_counts, respond_batch, sample_lambda
from .quantum_predictions import exact_distribution
from .random_streams import (
    CHUNK_SIZE,
    GENERATOR_NAME,
    Chunk,
    Seed,
    StreamPurpose,
    plan_chunks,
    run_chunks,
    substream,
)

LOGGER = logging.getLogger(__name__)

QUANTUM_SOURCE = "qm"
RECORDS_SOURCE = "records"
SETTING_SELECTION = "uniform_shuffled_blocks_of_four"
MINIMUM_TRIALS = len(SettingPair)
TRIAL_CSV_HEADER = ("trial", "pair", "out_l", "out_r")

SETTING_PAIRS = tuple(SettingPair)

TrialArrays = tuple[np.ndarray, np.ndarray, np.ndarray]


class TrialRecord(pydantic.BaseModel):
    """Define one trial: which setting pair was used and what both detectors read."""

    model_config = pydantic.ConfigDict(frozen=True)

    trial_index: pydantic.NonNegativeInt
    setting_pair: SettingPair
    outcome_l: Outcome
    outcome_r: Outcome


class ExperimentSummary(pydantic.BaseModel):
    """Define the statistics of a simulated or recorded run.

    The trial records themselves are kept only on request and never serialized with the
    summary.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    n_trials: pydantic.PositiveInt
    pair_counts: dict[SettingPair, pydantic.PositiveInt]
    distributions: dict[SettingPair, JointDistribution]
    correlations: dict[SettingPair, Correlation]
    chsh: ChshResult
    violation_sigmas: float | None
    seed: Seed | None
    source: str
    settings: ChshSettings
    generator: str = GENERATOR_NAME
    chunk_size: pydantic.PositiveInt = CHUNK_SIZE
    setting_selection: str = SETTING_SELECTION
    records: list[TrialRecord] | None = pydantic.Field(default=None, exclude=True, repr=False)

    @pydantic.model_validator(mode="after")
    def validate_pair_counts(self: typing.Self) -> typing.Self:
        """Validate that the per-pair counts add up to the number of trials.

        Raises
        ------
        ValueError
            if the counts and `n_trials` disagree

        Returns
        -------
        ExperimentSummary
            validated summary
        """
        if sum(self.pair_counts.values()) != self.n_trials:
            raise ValueError(f"Pair counts {self.pair_counts} do not sum to {self.n_trials}.")

        return self


def draw_setting_pairs(seed: int, chunk: Chunk) -> np.ndarray:
    """Draw setting-pair indices for one chunk as shuffled blocks of the four pairs.

    Parameters
    ----------
    seed : int
        root seed
    chunk : Chunk
        chunk whose settings substream is used

    Returns
    -------
    np.ndarray
        indices into `SETTING_PAIRS`, one per trial
    """
    generator = substream(seed, chunk.index, StreamPurpose.SETTINGS)
    n_blocks = -(-chunk.size // MINIMUM_TRIALS)
    blocks = np.tile(np.arange(MINIMUM_TRIALS), (n_blocks, 1))

    return generator.permuted(blocks, axis=1).reshape(-1)[: chunk.size]


def readings_from_cells(cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split cell indices ``0..3`` of ``(++, +−, −+, −−)`` into left and right readings."""
    left = np.where(cells < 2, 1, -1).astype(np.int8)  # noqa: PLR2004
    right = np.where(cells % 2 == 0, 1, -1).astype(np.int8)

    return left, right


def quantum_trials(settings: ChshSettings, seed: int, chunk: Chunk) -> TrialArrays:
    """Draw one chunk of trials from the quantum joint distributions.

    Parameters
    ----------
    settings : ChshSettings
        the four detector angles
    seed : int
        root seed
    chunk : Chunk
        chunk to draw

    Returns
    -------
    TrialArrays
        setting-pair indices, left readings and right readings
    """
    pair_index = draw_setting_pairs(seed, chunk)

    cumulative = np.array(
        [
            np.cumsum([distribution.p_pp, distribution.p_pm, distribution.p_mp])
            for distribution in (
                exact_distribution(*settings.angles(setting_pair))
                for setting_pair in SETTING_PAIRS
            )
        ]
    )
    uniform = substream(seed, chunk.index, StreamPurpose.OUTCOMES).random(chunk.size)
    cells = np.sum(uniform[:, np.newaxis] >= cumulative[pair_index], axis=1)

    return pair_index, *readings_from_cells(cells)


def model_trials(model: LhvModel, settings: ChshSettings, seed: int, chunk: Chunk) -> TrialArrays:
    """Draw one chunk of trials by sampling hidden variables and applying the responses.

    Parameters
    ----------
    model : LhvModel
        hidden-variable model
    settings : ChshSettings
        the four detector angles
    seed : int
        root seed
    chunk : Chunk
        chunk to draw

    Returns
    -------
    TrialArrays
        setting-pair indices, left readings and right readings
    """
    pair_index = draw_setting_pairs(seed, chunk)

    angles = np.array([settings.angles(setting_pair) for setting_pair in SETTING_PAIRS])
    batch = sample_lambda(
        model, chunk.size, seed, chunk.index, angles[pair_index, 0], angles[pair_index, 1]
    )

    left = np.empty(chunk.size, dtype=np.int8)
    right = np.empty(chunk.size, dtype=np.int8)
    for index, setting_pair in enumerate(SETTING_PAIRS):
        mask = pair_index == index
        if np.any(mask):
            theta_l, theta_r = settings.angles(setting_pair)
            left[mask], right[mask] = respond_batch(model, batch.select(mask), theta_l, theta_r)

    return pair_index, left, right


def tally_trials(pair_index: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Count trials per setting pair and outcome cell.

    Returns
    -------
    np.ndarray
        counts of shape ``(4, 4)``, rows by setting pair, columns ``(++, +−, −+, −−)``
    """
    cells = 2 * (left < 0).astype(np.int64) + (right < 0).astype(np.int64)
    flat = pair_index.astype(np.int64) * 4 + cells

    return np.bincount(flat, minlength=16).reshape(4, 4)


def summarize_tallies(
    counts: np.ndarray,
    settings: ChshSettings,
    seed: int | None,
    source: str,
    records: list[TrialRecord] | None = None,
) -> ExperimentSummary:
    """Assemble the summary statistics from per-pair outcome counts.

    Parameters
    ----------
    counts : np.ndarray
        counts of shape ``(4, 4)`` as returned by `tally_trials`
    settings : ChshSettings
        the four detector angles
    seed : int | None
        root seed of the run, if known
    source : str
        name of the trial source
    records : list[TrialRecord] | None, optional
        trial records to attach, by default None

    Returns
    -------
    ExperimentSummary
        per-pair distributions, correlations and the CHSH result

    Raises
    ------
    InvalidInputError
        if a setting pair has no trials
    """
    for index, setting_pair in enumerate(SETTING_PAIRS):
        if counts[index].sum() == 0:
            raise InvalidInputError("records", f"setting pair {setting_pair} has no trials")

    distributions = {
        setting_pair: distribution_from_counts(counts[index])
        for index, setting_pair in enumerate(SETTING_PAIRS)
    }
    correlations = {
        setting_pair: correlation_from_distribution(distribution)
        for setting_pair, distribution in distributions.items()
    }
    chsh = chsh_from_correlations(*correlations.values())

    sigmas = None
    if chsh.standard_error:
        sigmas = violation_sigmas(chsh.s_value, chsh.standard_error)

    return ExperimentSummary(
        n_trials=int(counts.sum()),
        pair_counts={
            setting_pair: int(counts[index].sum())
            for index, setting_pair in enumerate(SETTING_PAIRS)
        },
        distributions=distributions,
        correlations=correlations,
        chsh=chsh,
        violation_sigmas=sigmas,
        seed=seed,
        source=source,
        settings=settings,
        records=records,
    )


def records_from_arrays(
    pair_index: np.ndarray, left: np.ndarray, right: np.ndarray
) -> list[TrialRecord]:
    """Convert trial arrays into records numbered from zero."""
    return [
        TrialRecord(
            trial_index=trial_index,
            setting_pair=SETTING_PAIRS[pair],
            outcome_l=Outcome(out_l),
            outcome_r=Outcome(out_r),
        )
        for trial_index, (pair, out_l, out_r) in enumerate(
            zip(pair_index.tolist(), left.tolist(), right.tolist(), strict=True)
        )
    ]


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def run_experiment(  # noqa: PLR0913
    source: typing.Literal["qm"] | LhvModel,
    settings: ChshSettings,
    n_trials: int,
    seed: Seed,
    keep_records: bool = False,  # noqa: FBT001, FBT002
    workers: pydantic.PositiveInt = 1,
) -> ExperimentSummary:
    """Simulate a run of the experiment and estimate its CHSH statistic.

    Parameters
    ----------
    source : typing.Literal["qm"] | LhvModel
        ``"qm"`` for the quantum distribution, or a hidden-variable model
    settings : ChshSettings
        the four detector angles
    n_trials : int
        number of trials, at least 4
    seed : Seed
        root seed
    keep_records : bool, optional
        attach the full trial stream to the summary, by default False
    workers : pydantic.PositiveInt, optional
        threads used to process chunks, by default 1

    Returns
    -------
    ExperimentSummary
        statistics of the run, identical for identical inputs

    Raises
    ------
    InvalidInputError
        if `n_trials` is smaller than 4
    """
    if n_trials < MINIMUM_TRIALS:
        raise InvalidInputError(
            "n_trials",
            f"{n_trials} trials cannot populate all four setting pairs, "
            f"at least {MINIMUM_TRIALS} are required",
        )

    source_name = QUANTUM_SOURCE if isinstance(source, str) else source.name
    LOGGER.info(
        f"Simulating {n_trials} trials from {source_name}.",
        extra={
            "event.group": "simulation",
            "event.type": "experiment",
            "event.action": "run_experiment",
            "event.status": "started",
            "simulation.source": source_name,
            "simulation.n_trials": n_trials,
        },
    )

    def draw(chunk: Chunk) -> TrialArrays:
        if isinstance(source, str):
            return quantum_trials(settings, seed, chunk)

        return model_trials(source, settings, seed, chunk)

    pair_index, left, right = (
        np.concatenate(parts)
        for parts in zip(*run_chunks(draw, plan_chunks(n_trials), workers=workers), strict=True)
    )

    summary = summarize_tallies(
        tally_trials(pair_index, left, right),
        settings,
        seed,
        source_name,
        records=records_from_arrays(pair_index, left, right) if keep_records else None,
    )

    LOGGER.info(
        f"Simulated S={summary.chsh.s_value!r} from {source_name}.",
        extra={
            "event.group": "simulation",
            "event.type": "experiment",
            "event.action": "run_experiment",
            "event.status": "succeeded",
            "simulation.source": source_name,
            "simulation.n_trials": n_trials,
        },
    )

    return summary


@pydantic.validate_call(validate_return=True)
def estimate_from_records(
    records: list[TrialRecord],
    settings: ChshSettings,
    seed: Seed | None = None,
    source: str = RECORDS_SOURCE,
) -> ExperimentSummary:
    """Recompute the summary statistics of a stored trial stream.

    Parameters
    ----------
    records : list[TrialRecord]
        trials covering every setting pair
    settings : ChshSettings
        the four detector angles the trials were taken at
    seed : Seed | None, optional
        root seed of the original run to echo, by default None
    source : str, optional
        name of the original source to echo, by default "records"

    Returns
    -------
    ExperimentSummary
        the statistics `run_experiment` reports for the same trials

    Raises
    ------
    InvalidInputError
        if a setting pair has no trials
    """
    pair_position = {setting_pair: index for index, setting_pair in enumerate(SETTING_PAIRS)}
    pair_index = np.array([pair_position[record.setting_pair] for record in records], dtype=int)
    left = np.array([record.outcome_l for record in records], dtype=np.int8)
    right = np.array([record.outcome_r for record in records], dtype=np.int8)

    return summarize_tallies(
        tally_trials(pair_index, left, right), settings, seed, source, records=records
    )


def format_outcome(outcome: Outcome) -> str:
    """Render a reading as ``+1`` or ``-1``."""
    return f"{int(outcome):+d}"


def write_trial_csv(records: list[TrialRecord]) -> str:
    """Render trial records as CSV with header ``trial,pair,out_l,out_r``.

    Parameters
    ----------
    records : list[TrialRecord]
        trials to export

    Returns
    -------
    str
        CSV text with ``\\n`` line endings
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRIAL_CSV_HEADER)
    writer.writerows(
        (
            record.trial_index,
            record.setting_pair.value,
            format_outcome(record.outcome_l),
            format_outcome(record.outcome_r),
        )
        for record in records
    )

    return buffer.getvalue()


def read_trial_csv(text: str) -> list[TrialRecord]:
    """Parse a CSV trial stream written by `write_trial_csv`.

    Parameters
    ----------
    text : str
        CSV text

    Returns
    -------
    list[TrialRecord]
        parsed trials

    Raises
    ------
    InvalidInputError
        if the header differs or a row cannot be parsed
    """
    reader = csv.reader(io.StringIO(text))

    header = next(reader, None)
    if header is None or tuple(header) != TRIAL_CSV_HEADER:
        raise InvalidInputError("trials", f"header {header} differs from {TRIAL_CSV_HEADER}")

    records = []
    for line_number, row in enumerate(reader, start=2):
        if not row:
            continue

        try:
            trial, pair, out_l, out_r = row
            records.append(
                TrialRecord(
                    trial_index=int(trial),
                    setting_pair=SettingPair(pair),
                    outcome_l=Outcome(int(out_l)),
                    outcome_r=Outcome(int(out_r)),
                )
            )
        except (ValueError, pydantic.ValidationError) as error:
            raise InvalidInputError("trials", f"line {line_number} {row} is malformed") from error

    return records


__all__ = [
    "MINIMUM_TRIALS",
    "QUANTUM_SOURCE",
    "SETTING_SELECTION",
    "TRIAL_CSV_HEADER",
    "ExperimentSummary",
    "TrialRecord",
    "estimate_from_records",
    "read_trial_csv",
    "run_experiment",
    "write_trial_csv",
]
