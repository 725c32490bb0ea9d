"""Check hidden-variable models against the locality and surface conditions.

Each check returns a `CheckReport` whose verdict is ``statistic ≤ threshold``.
"""

import collections.abc
import itertools
import logging
import math
import typing

import numpy as np
import pydantic

from ..domain import Angle
from ..errors import InvalidInputError
from ..random_streams import Chunk, Seed, plan_chunks, run_chunks
from .builtins import parametric_family
from .estimation import estimate_distribution
from .framework import (
    LambdaBatch,
    LhvModel,
    angle_column,
    respond_batch,
    sample_detectors,
    sample_lambda,
    sample_photon,
)

LOGGER = logging.getLogger(__name__)

DEFAULT_SIGMA_THRESHOLD = 4.0
DEFAULT_RESAMPLES = 8


class CheckReport(pydantic.BaseModel):
    """Define the outcome of one model check."""

    model_config = pydantic.ConfigDict(frozen=True, ser_json_inf_nan="strings")

    check_name: str
    model_name: str
    statistic: float
    threshold: float
    n_samples: pydantic.PositiveInt
    details: str

    @pydantic.computed_field
    @property
    def passed(self: typing.Self) -> bool:
        """Pass exactly when the statistic does not exceed the threshold."""
        return self.statistic <= self.threshold


def require_draws(n: int) -> None:
    """Reject non-positive draw counts.

    Raises
    ------
    InvalidInputError
        if `n` is smaller than 1
    """
    if n < 1:
        raise InvalidInputError("n", f"{n} draws requested, at least 1 is required")


def log_report(report: CheckReport) -> CheckReport:
    """Log a finished check and hand the report back."""
    LOGGER.info(
        f"Check {report.check_name} on {report.model_name}: {report.statistic!r}.",
        extra={
            "event.group": "checks",
            "event.type": "check",
            "event.action": report.check_name,
            "event.status": "succeeded",
            "check.name": report.check_name,
            "check.passed": report.passed,
        },
    )

    return report


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def check_no_signaling(  # noqa: PLR0913
    model: LhvModel,
    theta_r: Angle,
    theta_l_list: collections.abc.Sequence[Angle],
    n: int,
    seed: Seed,
    sigma_threshold: pydantic.NonNegativeFloat = DEFAULT_SIGMA_THRESHOLD,
) -> CheckReport:
    """Test whether the right marginal depends on the left detector angle.

    Every left angle is estimated with the same seed, so for local models the right readings
    are identical draw by draw.

    Parameters
    ----------
    model : LhvModel
        model to check
    theta_r : Angle
        right detector angle
    theta_l_list : collections.abc.Sequence[Angle]
        at least two left detector angles
    n : int
        draws per left angle
    seed : Seed
        root seed shared by all left angles
    sigma_threshold : pydantic.NonNegativeFloat, optional
        largest acceptable difference in pooled standard errors, by default 4.0

    Returns
    -------
    CheckReport
        statistic is the largest pairwise marginal difference over its pooled standard error

    Raises
    ------
    InvalidInputError
        if fewer than two left angles are given or `n` is smaller than 1
    """
    if len(theta_l_list) < 2:  # noqa: PLR2004
        raise InvalidInputError("theta_l_list", "at least two left angles are required")
    require_draws(n)

    marginals = [
        estimate_distribution(model, theta_l, theta_r, n, seed).right_plus
        for theta_l in theta_l_list
    ]

    statistic = 0.0
    for first, second in itertools.combinations(marginals, 2):
        difference = abs(first - second)
        pooled_error = math.sqrt((first * (1 - first) + second * (1 - second)) / n)
        if pooled_error > 0:
            statistic = max(statistic, difference / pooled_error)
        elif difference > 0:
            statistic = math.inf

    return log_report(
        CheckReport(
            check_name="no_signaling",
            model_name=model.name,
            statistic=statistic,
            threshold=sigma_threshold,
            n_samples=n,
            details=(
                f"Right marginals P(+1) at theta_r={theta_r!r} under {len(marginals)} left "
                f"angles: {marginals}. The model is tagged {model.locality_tag}. Passing shows "
                "only that the right marginal does not depend on the left angle; it does not "
                "certify that the model is local."
            ),
        )
    )


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def check_surface_coincidence(model: LhvModel, theta: Angle, n: int, seed: Seed) -> CheckReport:
    """Measure how often equal angles give equal readings.

    Parameters
    ----------
    model : LhvModel
        model to check
    theta : Angle
        common angle of both detectors
    n : int
        number of draws
    seed : Seed
        root seed

    Returns
    -------
    CheckReport
        statistic is the sampled mass of ``Ω++ ∪ Ω−−``, passing only when it is zero

    Raises
    ------
    InvalidInputError
        if `n` is smaller than 1
    """
    require_draws(n)

    distribution = estimate_distribution(model, theta, theta, n, seed)

    return log_report(
        CheckReport(
            check_name="surface_coincidence",
            model_name=model.name,
            statistic=distribution.p_pp + distribution.p_mm,
            threshold=0.0,
            n_samples=n,
            details=(
                f"Equal readings at theta_l = theta_r = {theta!r}: p_pp={distribution.p_pp!r}, "
                f"p_mm={distribution.p_mm!r}. Zero means the sampled left and right surfaces "
                "coincide."
            ),
        )
    )


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def check_detector_independence(  # noqa: PLR0913
    model: LhvModel,
    theta_l: Angle,
    theta_r: Angle,
    n: int,
    resamples: int = DEFAULT_RESAMPLES,
    seed: Seed = 0,
) -> CheckReport:
    """Measure how often redrawing detector variables changes a reading.

    Photon variables are held fixed while both detectors' variables are redrawn `resamples`
    times from independent substreams.

    Parameters
    ----------
    model : LhvModel
        model to check
    theta_l : Angle
        left detector angle
    theta_r : Angle
        right detector angle
    n : int
        number of photon draws
    resamples : int, optional
        detector redraws per photon draw, by default 8
    seed : Seed, optional
        root seed, by default 0

    Returns
    -------
    CheckReport
        statistic is the fraction of photon draws whose readings change, passing only at zero

    Raises
    ------
    InvalidInputError
        if `n` is smaller than 1 or `resamples` smaller than 2
    """
    require_draws(n)
    if resamples < 2:  # noqa: PLR2004
        raise InvalidInputError("resamples", f"{resamples} redraws, at least 2 are required")

    def count_changes(chunk: Chunk) -> int:
        photon_vars = sample_photon(model, chunk.size, seed, chunk.index)
        angles_l = angle_column(theta_l, chunk.size)
        angles_r = angle_column(theta_r, chunk.size)

        readings = []
        for resample in range(resamples):
            detector_l_vars, detector_r_vars = sample_detectors(
                model, chunk.size, seed, chunk.index, angles_l, angles_r, resample=resample
            )
            batch = LambdaBatch(
                photon_vars=photon_vars,
                detector_l_vars=detector_l_vars,
                detector_r_vars=detector_r_vars,
            )
            readings.append(respond_batch(model, batch, theta_l, theta_r))

        left = np.stack([left for left, _ in readings])
        right = np.stack([right for _, right in readings])
        changed = np.any(left != left[0], axis=0) | np.any(right != right[0], axis=0)

        return int(np.count_nonzero(changed))

    changes = sum(run_chunks(count_changes, plan_chunks(n)))

    return log_report(
        CheckReport(
            check_name="detector_independence",
            model_name=model.name,
            statistic=changes / n,
            threshold=0.0,
            n_samples=n,
            details=(
                f"{changes} of {n} photon draws changed a reading across {resamples} detector "
                f"redraws at ({theta_l!r}, {theta_r!r}); the model has "
                f"{model.detector_l_dim} left and {model.detector_r_dim} right detector "
                "variables."
            ),
        )
    )


@pydantic.validate_call(validate_return=True)
def check_frame_independence(
    frame_coupling: float,
    theta: Angle,
    betas: collections.abc.Sequence[float],
    n: int,
    seed: Seed,
) -> CheckReport:
    """Test whether equal-angle anticorrelation survives a change of observing frame.

    The ``bell_sign_frame_shift`` family is built at every velocity in `betas`. Each member
    runs `check_surface_coincidence`, and all members are evaluated on one common sample of
    hidden variables to count draws whose pair of readings differs from the first velocity.

    Parameters
    ----------
    frame_coupling : float
        rotation of the surfaces per unit of frame velocity
    theta : Angle
        common angle of both detectors
    betas : collections.abc.Sequence[float]
        at least two frame velocities
    n : int
        number of draws
    seed : Seed
        root seed

    Returns
    -------
    CheckReport
        statistic is the largest coincidence statistic or partition change, passing at zero

    Raises
    ------
    InvalidInputError
        if fewer than two velocities are given, `n` is smaller than 1 or a parameter is out
        of bounds
    """
    if len(betas) < 2:  # noqa: PLR2004
        raise InvalidInputError("betas", "at least two frame velocities are required")
    require_draws(n)

    family = parametric_family("bell_sign_frame_shift")
    models = [family.create({"frame_coupling": frame_coupling, "beta": beta}) for beta in betas]

    coincidences = [
        check_surface_coincidence(model, theta, n, seed).statistic for model in models
    ]

    def count_changes(chunk: Chunk) -> int:
        batch = sample_lambda(models[0], chunk.size, seed, chunk.index, theta, theta)
        readings = [respond_batch(model, batch, theta, theta) for model in models]
        reference_left, reference_right = readings[0]

        changed = np.zeros(chunk.size, dtype=bool)
        for left, right in readings[1:]:
            changed |= (left != reference_left) | (right != reference_right)

        return int(np.count_nonzero(changed))

    partition_change = sum(run_chunks(count_changes, plan_chunks(n))) / n

    return log_report(
        CheckReport(
            check_name="frame_independence",
            model_name=family.name,
            statistic=max(*coincidences, partition_change),
            threshold=0.0,
            n_samples=n,
            details=(
                f"frame_coupling={frame_coupling!r}, betas={list(betas)}: equal-reading mass "
                f"{coincidences} and partition change {partition_change!r} at theta={theta!r}. "
                "Zero everywhere means the outcome partition does not depend on the frame."
            ),
        )
    )


__all__ = [
    "DEFAULT_RESAMPLES",
    "DEFAULT_SIGMA_THRESHOLD",
    "CheckReport",
    "check_detector_independence",
    "check_frame_independence",
    "check_no_signaling",
    "check_surface_coincidence",
]
