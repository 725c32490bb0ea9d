"""Establish the local CHSH bound through enumeration, mixtures and parametric search."""

import collections.abc
import enum
import itertools
import logging
import typing

import numpy as np
import pydantic
from scipy import optimize

from .chsh_analysis import (
    LOCAL_BOUND,
    ChshResult,
    chsh_from_correlations,
    correlation_from_distribution,
)
from .domain import ChshSettings, Outcome, SettingPair
from .errors import InvalidInputError
from .lhv_models import LhvModel, ParametricFamily, estimate_distribution, parametric_family
from .random_streams import Seed, StreamPurpose, derive_seed, substream

LOGGER = logging.getLogger(__name__)

N_STRATEGIES = 16
MIXTURE_TOLERANCE = 1e-12
WEIGHT_SUM_TOLERANCE = 1e-9
BOUND_SIGMAS = 5.0


class DeterministicStrategy(pydantic.BaseModel):
    """Define fixed readings for each of the four local settings."""

    model_config = pydantic.ConfigDict(frozen=True)

    a_at_theta_a: Outcome
    a_at_theta_a_prime: Outcome
    b_at_theta_b: Outcome
    b_at_theta_b_prime: Outcome

    def correlations(self: typing.Self) -> dict[SettingPair, int]:
        """Multiply the fixed readings of each setting pair.

        Returns
        -------
        dict[SettingPair, int]
            outcome product per setting pair
        """
        return {
            SettingPair.AB: self.a_at_theta_a * self.b_at_theta_b,
            SettingPair.AB_PRIME: self.a_at_theta_a * self.b_at_theta_b_prime,
            SettingPair.A_PRIME_B: self.a_at_theta_a_prime * self.b_at_theta_b,
            SettingPair.A_PRIME_B_PRIME: self.a_at_theta_a_prime * self.b_at_theta_b_prime,
        }


class StrategyReport(pydantic.BaseModel):
    """Define a deterministic strategy with its CHSH value."""

    model_config = pydantic.ConfigDict(frozen=True)

    strategy: DeterministicStrategy
    s_value: float


class MixtureSearchResult(pydantic.BaseModel):
    """Define the outcome of a random search over convex mixtures of strategies."""

    model_config = pydantic.ConfigDict(frozen=True)

    max_abs_s: float
    enumeration_max_abs_s: float
    n_mixtures: pydantic.PositiveInt
    seed: Seed

    @pydantic.computed_field
    @property
    def bound_respected(self: typing.Self) -> bool:
        """Check the best mixture against ``|S| ≤ 2``."""
        return self.max_abs_s <= LOCAL_BOUND + MIXTURE_TOLERANCE


@enum.unique
class OptimizationMethod(enum.StrEnum):
    """Define the supported parameter searches."""

    GRID = "grid"
    HILL_CLIMB = "hill_climb"


class OptimizationResult(pydantic.BaseModel):
    """Define the best member of a model family found by a parameter search."""

    model_config = pydantic.ConfigDict(frozen=True)

    family: str
    method: OptimizationMethod
    best_parameters: dict[str, float]
    best_abs_s: float
    standard_error: float
    n_evaluations: pydantic.PositiveInt
    n_samples_per_eval: pydantic.PositiveInt
    seed: Seed

    @pydantic.computed_field
    @property
    def bound_respected(self: typing.Self) -> bool:
        """Check the best estimate against ``|S| ≤ 2`` with a five standard error allowance."""
        return self.best_abs_s <= LOCAL_BOUND + BOUND_SIGMAS * self.standard_error


def all_strategies() -> list[DeterministicStrategy]:
    """List the 16 deterministic strategies in a fixed order.

    Returns
    -------
    list[DeterministicStrategy]
        strategies ordered with +1 before -1 in every position
    """
    return [
        DeterministicStrategy(
            a_at_theta_a=a, a_at_theta_a_prime=a_prime, b_at_theta_b=b, b_at_theta_b_prime=b_prime
        )
        for a, a_prime, b, b_prime in itertools.product(
            (Outcome.PLUS, Outcome.MINUS), repeat=4
        )
    ]


def strategy_chsh(strategy: DeterministicStrategy) -> float:
    """Combine the products of fixed readings into the CHSH statistic.

    Parameters
    ----------
    strategy : DeterministicStrategy
        fixed readings

    Returns
    -------
    float
        either -2 or 2
    """
    correlations = strategy.correlations()

    return float(
        correlations[SettingPair.AB]
        - correlations[SettingPair.AB_PRIME]
        + correlations[SettingPair.A_PRIME_B]
        + correlations[SettingPair.A_PRIME_B_PRIME]
    )


@pydantic.validate_call(validate_return=True)
def enumerate_deterministic(settings: ChshSettings) -> list[StrategyReport]:
    """Evaluate every deterministic local strategy.

    Readings are fixed per setting, so the values do not depend on the angles in `settings`.

    Parameters
    ----------
    settings : ChshSettings
        the four detector angles

    Returns
    -------
    list[StrategyReport]
        16 reports, each with ``S = ±2``

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.domain import ChshSettings
        >>> from bell_aspect.lhv_optimizer import enumerate_deterministic
        >>> settings = ChshSettings(theta_a=0, theta_a_prime=0, theta_b=0, theta_b_prime=0)
        >>> sorted({report.s_value for report in enumerate_deterministic(settings)})
        [-2.0, 2.0]
    """
    LOGGER.debug(
        f"Enumerating deterministic strategies for {settings!r}.",
        extra={
            "event.group": "optimizer",
            "event.type": "enumerate",
            "event.action": "enumerate_deterministic",
            "event.status": "started",
        },
    )

    return [
        StrategyReport(strategy=strategy, s_value=strategy_chsh(strategy))
        for strategy in all_strategies()
    ]


def vertex_chsh_values() -> np.ndarray:
    """Collect the CHSH value of every strategy in enumeration order."""
    return np.array([strategy_chsh(strategy) for strategy in all_strategies()])


@pydantic.validate_call(validate_return=True)
def mixture_chsh(weights: collections.abc.Sequence[pydantic.NonNegativeFloat]) -> float:
    """Compute the CHSH value of a convex mixture of the deterministic strategies.

    Parameters
    ----------
    weights : collections.abc.Sequence[pydantic.NonNegativeFloat]
        16 non-negative weights in `enumerate_deterministic` order, summing to one

    Returns
    -------
    float
        weighted sum of the strategy values

    Raises
    ------
    InvalidInputError
        if there are not 16 weights or they do not sum to one

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.lhv_optimizer import mixture_chsh
        >>> mixture_chsh([1 / 16] * 16)
        0.0
    """
    if len(weights) != N_STRATEGIES:
        raise InvalidInputError("weights", f"{len(weights)} weights given, {N_STRATEGIES} needed")

    if abs(sum(weights) - 1) > WEIGHT_SUM_TOLERANCE:
        raise InvalidInputError("weights", f"weights sum to {sum(weights)!r}, expected 1")

    return float(np.dot(np.asarray(weights, dtype=float), vertex_chsh_values()))


@pydantic.validate_call(validate_return=True)
def max_mixture_chsh(
    settings: ChshSettings, n_random_mixtures: int, seed: Seed
) -> MixtureSearchResult:
    """Search random convex mixtures of deterministic strategies for the largest ``|S|``.

    Weights are drawn from a flat Dirichlet distribution over the 16 strategies.

    Parameters
    ----------
    settings : ChshSettings
        the four detector angles
    n_random_mixtures : int
        number of mixtures to draw
    seed : Seed
        root seed

    Returns
    -------
    MixtureSearchResult
        the largest mixture ``|S|`` next to the enumeration maximum

    Raises
    ------
    InvalidInputError
        if `n_random_mixtures` is smaller than 1
    """
    if n_random_mixtures < 1:
        raise InvalidInputError("n_random_mixtures", f"{n_random_mixtures} is smaller than 1")

    enumeration = enumerate_deterministic(settings)
    vertices = np.array([report.s_value for report in enumeration])

    generator = substream(seed, 0, StreamPurpose.MIXTURE)
    weights = generator.dirichlet(np.ones(N_STRATEGIES), size=n_random_mixtures)

    return MixtureSearchResult(
        max_abs_s=float(np.max(np.abs(weights @ vertices))),
        enumeration_max_abs_s=float(np.max(np.abs(vertices))),
        n_mixtures=n_random_mixtures,
        seed=seed,
    )


def estimate_chsh(  # noqa: PLR0913
    model: LhvModel,
    settings: ChshSettings,
    n_samples: int,
    seed: int,
    workers: int = 1,
) -> ChshResult:
    """Estimate the CHSH statistic of a model from four Monte Carlo distributions.

    Each setting pair uses its own seed derived from `seed`, so repeated calls with the same
    seed share random numbers across models.

    Parameters
    ----------
    model : LhvModel
        model to evaluate
    settings : ChshSettings
        the four detector angles
    n_samples : int
        draws per setting pair
    seed : int
        root seed
    workers : int, optional
        threads per estimate, by default 1

    Returns
    -------
    ChshResult
        estimated statistic with its standard error
    """
    correlations = [
        correlation_from_distribution(
            estimate_distribution(
                model,
                *settings.angles(setting_pair),
                n_samples,
                derive_seed(seed, index),
                workers=workers,
            )
        )
        for index, setting_pair in enumerate(SettingPair)
    ]

    return chsh_from_correlations(*correlations)


def grid_candidates(family: ParametricFamily, iterations: int) -> list[dict[str, float]]:
    """Lay a regular grid of at most `iterations` points over the family's parameter box.

    Parameters
    ----------
    family : ParametricFamily
        family whose bounds are used
    iterations : int
        evaluation budget

    Returns
    -------
    list[dict[str, float]]
        parameter values, just the defaults when the budget allows one point per axis
    """
    points_per_axis = max(1, int(iterations ** (1 / len(family.parameters)) + 1e-9))
    if points_per_axis == 1:
        return [family.defaults]

    axes = [
        np.linspace(parameter.lower, parameter.upper, points_per_axis)
        for parameter in family.parameters
    ]
    names = [parameter.name for parameter in family.parameters]

    return [
        dict(zip(names, (float(value) for value in point), strict=True))
        for point in itertools.product(*axes)
    ]


@pydantic.validate_call(validate_return=True)
def optimize_parametric(  # noqa: PLR0913
    model_family: str,
    settings: ChshSettings,
    iterations: int,
    n_samples_per_eval: int,
    seed: Seed,
    method: OptimizationMethod = OptimizationMethod.GRID,
    workers: pydantic.PositiveInt = 1,
) -> OptimizationResult:
    """Search a local model family for the largest estimated ``|S|``.

    Every candidate is evaluated with the same random numbers, so differences between
    candidates reflect the parameters rather than sampling noise.

    Parameters
    ----------
    model_family : str
        registered family name
    settings : ChshSettings
        the four detector angles
    iterations : int
        grid size budget, or the evaluation limit of the hill climb
    n_samples_per_eval : int
        draws per setting pair and candidate
    seed : Seed
        root seed
    method : OptimizationMethod, optional
        search strategy, by default OptimizationMethod.GRID
    workers : pydantic.PositiveInt, optional
        threads per estimate, by default 1

    Returns
    -------
    OptimizationResult
        best candidate with its estimate and standard error

    Raises
    ------
    InvalidInputError
        if `iterations` or `n_samples_per_eval` is smaller than 1
    UnknownNameError
        if the family is not registered
    """
    if iterations < 1:
        raise InvalidInputError("iterations", f"{iterations} is smaller than 1")
    if n_samples_per_eval < 1:
        raise InvalidInputError("n_samples_per_eval", f"{n_samples_per_eval} is smaller than 1")

    family = parametric_family(model_family)
    evaluations: list[tuple[dict[str, float], ChshResult]] = []

    def evaluate(values: dict[str, float]) -> float:
        result = estimate_chsh(
            family.create(values), settings, n_samples_per_eval, seed, workers=workers
        )
        evaluations.append((values, result))

        return abs(result.s_value)

    match method:
        case OptimizationMethod.GRID:
            for candidate in grid_candidates(family, iterations):
                evaluate(candidate)
        case OptimizationMethod.HILL_CLIMB:
            names = [parameter.name for parameter in family.parameters]
            optimize.minimize(
                lambda point: -evaluate(
                    dict(zip(names, (float(value) for value in point), strict=True))
                ),
                x0=np.array([parameter.default for parameter in family.parameters]),
                method="Nelder-Mead",
                bounds=[(parameter.lower, parameter.upper) for parameter in family.parameters],
                options={"maxfev": iterations},
            )

    best_parameters, best_result = max(evaluations, key=lambda item: abs(item[1].s_value))

    LOGGER.info(
        f"Best |S| of {family.name} after {len(evaluations)} evaluations: "
        f"{abs(best_result.s_value)!r}.",
        extra={
            "event.group": "optimizer",
            "event.type": "optimize",
            "event.action": "optimize_parametric",
            "event.status": "succeeded",
            "optimizer.family": family.name,
            "optimizer.method": str(method),
        },
    )

    return OptimizationResult(
        family=family.name,
        method=method,
        best_parameters=best_parameters,
        best_abs_s=abs(best_result.s_value),
        standard_error=best_result.standard_error or 0.0,
        n_evaluations=len(evaluations),
        n_samples_per_eval=n_samples_per_eval,
        seed=seed,
    )


__all__ = [
    "DeterministicStrategy",
    "MixtureSearchResult",
    "OptimizationMethod",
    "OptimizationResult",
    "StrategyReport",
    "all_strategies",
    "enumerate_deterministic",
    "estimate_chsh",
    "max_mixture_chsh",
    "mixture_chsh",
    "optimize_parametric",
]
