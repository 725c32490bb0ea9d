"""Estimate joint outcome probabilities of hidden-variable models."""

import logging

import numpy as np
import pydantic
from scipy import integrate, optimize

from ..domain import Angle, JointDistribution
from ..errors import InvalidInputError
from ..random_streams import Chunk, Seed, plan_chunks, run_chunks
from .framework import LambdaBatch, LhvModel, LocalityTag, respond_batch, sample_lambda

LOGGER = logging.getLogger(__name__)

QUADRATURE_GRID_SIZE = 4_097
"""Number of points scanned for outcome jumps before refinement."""

QUADRATURE_XTOL = 1e-14


def outcome_cells(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Tally readings into the cells ``(++, +−, −+, −−)``.

    Parameters
    ----------
    left : np.ndarray
        ±1 readings of the left detector
    right : np.ndarray
        ±1 readings of the right detector

    Returns
    -------
    np.ndarray
        four counts in the order ``p_pp, p_pm, p_mp, p_mm``
    """
    cell_index = 2 * (left < 0).astype(np.int64) + (right < 0).astype(np.int64)

    return np.bincount(cell_index, minlength=4)


def distribution_from_counts(counts: np.ndarray) -> JointDistribution:
    """Turn cell counts into relative frequencies with binomial standard errors.

    Parameters
    ----------
    counts : np.ndarray
        four counts in the order ``p_pp, p_pm, p_mp, p_mm``

    Returns
    -------
    JointDistribution
        frequencies with ``se = sqrt(p(1 − p)/n)`` and `n_samples` set

    Raises
    ------
    InvalidInputError
        if no draws were counted
    """
    n_samples = int(counts.sum())
    if n_samples < 1:
        raise InvalidInputError("counts", "no draws were counted")

    p_pp, p_pm, p_mp, p_mm = (int(count) / n_samples for count in counts)

    def standard_error(probability: float) -> float:
        return float(np.sqrt(probability * (1 - probability) / n_samples))

    return JointDistribution(
        p_pp=p_pp,
        p_pm=p_pm,
        p_mp=p_mp,
        p_mm=p_mm,
        se_pp=standard_error(p_pp),
        se_pm=standard_error(p_pm),
        se_mp=standard_error(p_mp),
        se_mm=standard_error(p_mm),
        n_samples=n_samples,
    )


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def estimate_distribution(  # noqa: PLR0913
    model: LhvModel,
    theta_l: Angle,
    theta_r: Angle,
    n: int,
    seed: Seed,
    workers: pydantic.PositiveInt = 1,
) -> JointDistribution:
    """Estimate the joint distribution of a model by Monte Carlo.

    Draws are cut into fixed-size chunks with their own substreams and tallies are merged
    in chunk order, so the result depends on `seed` only.

    Parameters
    ----------
    model : LhvModel
        model to sample
    theta_l : Angle
        left detector angle
    theta_r : Angle
        right detector angle
    n : int
        number of hidden-variable draws
    seed : Seed
        root seed
    workers : pydantic.PositiveInt, optional
        threads used to process chunks, by default 1

    Returns
    -------
    JointDistribution
        relative frequencies with standard errors

    Raises
    ------
    InvalidInputError
        if `n` is smaller than 1
    """
    if n < 1:
        raise InvalidInputError("n", f"{n} draws requested, at least 1 is required")

    def tally(chunk: Chunk) -> np.ndarray:
        batch = sample_lambda(model, chunk.size, seed, chunk.index, theta_l, theta_r)

        return outcome_cells(*respond_batch(model, batch, theta_l, theta_r))

    counts = np.sum(run_chunks(tally, plan_chunks(n), workers=workers), axis=0)

    LOGGER.debug(
        f"Estimated {model.name} at ({theta_l!r}, {theta_r!r}) from {n} draws.",
        extra={
            "event.group": "simulation",
            "event.type": "estimate",
            "event.action": "estimate_distribution",
            "event.status": "succeeded",
            "simulation.model": model.name,
            "simulation.n_draws": n,
        },
    )

    return distribution_from_counts(counts)


def outcome_product(model: LhvModel, theta_l: float, theta_r: float, uniform: float) -> float:
    """Evaluate ``A·B`` of a one-dimensional model at one point of the unit interval.

    Parameters
    ----------
    model : LhvModel
        local model with a single photon variable and no detector variables
    theta_l : float
        left detector angle
    theta_r : float
        right detector angle
    uniform : float
        point in ``[0, 1)`` mapped through the photon transform

    Returns
    -------
    float
        product of the two readings, ±1
    """
    empty = np.empty((1, 0))
    batch = LambdaBatch(
        photon_vars=model.photon_transform(np.array([[uniform]])),
        detector_l_vars=empty,
        detector_r_vars=empty,
    )
    left, right = respond_batch(model, batch, theta_l, theta_r)

    return float(left[0] * right[0])


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def correlation_by_quadrature(model: LhvModel, theta_l: Angle, theta_r: Angle) -> float:
    """Integrate the outcome product of a one-dimensional model over its photon variable.

    The product is scanned on a uniform grid, each sign change is located with bisection, and
    the constant pieces between consecutive jumps are integrated separately.

    Parameters
    ----------
    model : LhvModel
        local model with photon dimension 1 and no detector variables
    theta_l : Angle
        left detector angle
    theta_r : Angle
        right detector angle

    Returns
    -------
    float
        correlation ``E(θ_L, θ_R)``

    Raises
    ------
    InvalidInputError
        if the model does not have a single photon variable and no detector variables
    """
    if (
        model.photon_dim != 1
        or model.has_detector_variables
        or model.locality_tag != LocalityTag.LOCAL
    ):
        raise InvalidInputError(
            "model",
            f"{model.name} is not local with one photon variable and no detector variables",
        )

    def product(uniform: float) -> float:
        return outcome_product(model, theta_l, theta_r, uniform)

    grid = np.linspace(0, 1, QUADRATURE_GRID_SIZE)
    values = np.array([product(point) for point in grid[:-1]] + [product(np.nextafter(1, 0))])

    breaks = [0.0]
    for index in np.flatnonzero(values[:-1] != values[1:]):
        lower, upper = grid[index], grid[index + 1]
        if upper == 1:
            upper = np.nextafter(1, 0)
        breaks.append(float(optimize.bisect(product, lower, upper, xtol=QUADRATURE_XTOL)))
    breaks.append(1.0)

    pieces = (
        integrate.quad(product, lower, upper)[0]
        for lower, upper in zip(breaks[:-1], breaks[1:], strict=True)
        if upper > lower
    )

    return float(sum(pieces))


__all__ = [
    "correlation_by_quadrature",
    "distribution_from_counts",
    "estimate_distribution",
    "outcome_cells",
]
