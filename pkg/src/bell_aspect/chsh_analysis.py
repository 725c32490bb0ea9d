"""Compute correlation and CHSH statistics and judge them against the local bound."""

import enum
import math
import typing

import pydantic

from .domain import ChshSettings, Correlation, JointDistribution, SettingPair
from .errors import InvalidInputError
from .quantum_predictions import exact_distribution

LOCAL_BOUND = 2.0
TSIRELSON_BOUND = 2 * math.sqrt(2)
EXACT_TOLERANCE = 1e-12
CORRELATION_TOLERANCE = 1e-9
VIOLATION_SIGMAS = 3.0

CHSH_COEFFICIENTS: dict[SettingPair, int] = {
    SettingPair.AB: 1,
    SettingPair.AB_PRIME: -1,
    SettingPair.A_PRIME_B: 1,
    SettingPair.A_PRIME_B_PRIME: 1,
}


@enum.unique
class Verdict(enum.StrEnum):
    """Define the possible judgements of a CHSH value against ``|S| ≤ 2``."""

    SATISFIES_BOUND = "satisfies_bound"
    VIOLATES_BOUND = "violates_bound"
    INCONCLUSIVE = "inconclusive"


class ChshResult(pydantic.BaseModel):
    """Define a CHSH value together with its inputs and verdict."""

    model_config = pydantic.ConfigDict(frozen=True)

    s_value: float
    standard_error: float | None = None
    correlations: dict[SettingPair, Correlation]
    verdict: Verdict

    @pydantic.computed_field
    @property
    def beyond_tsirelson_bound(self: typing.Self) -> bool:
        """Flag values no quantum correlation set can reach."""
        return abs(self.s_value) > TSIRELSON_BOUND + EXACT_TOLERANCE


def judge(s_value: float, standard_error: float | None) -> Verdict:
    """Judge a CHSH value against the local bound.

    Parameters
    ----------
    s_value : float
        CHSH statistic
    standard_error : float | None
        statistical uncertainty, None for exact values

    Returns
    -------
    Verdict
        exact values violate beyond 1e-12, estimates must clear three standard errors
    """
    excess = abs(s_value) - LOCAL_BOUND

    if standard_error is None:
        if excess > EXACT_TOLERANCE:
            return Verdict.VIOLATES_BOUND

        return Verdict.SATISFIES_BOUND

    if excess > VIOLATION_SIGMAS * standard_error:
        return Verdict.VIOLATES_BOUND

    if excess <= 0:
        return Verdict.SATISFIES_BOUND

    return Verdict.INCONCLUSIVE


@pydantic.validate_call(validate_return=True)
def correlation_from_distribution(dist: JointDistribution) -> Correlation:
    """Compute the expected outcome product of a joint distribution.

    For sampled distributions the product of the readings is ±1 valued, so its standard error
    is ``sqrt((1 − E²)/n)``. When only per-cell standard errors are known they are combined
    in quadrature.

    Parameters
    ----------
    dist : JointDistribution
        exact or estimated joint distribution

    Returns
    -------
    Correlation
        ``P++ + P−− − P+− − P−+`` with its standard error when available

    Raises
    ------
    InvalidInputError
        if the distribution is not normalized

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.chsh_analysis import correlation_from_distribution
        >>> from bell_aspect.domain import JointDistribution
        >>> correlation_from_distribution(JointDistribution(p_pp=0, p_pm=0.5, p_mp=0.5, p_mm=0))
        Correlation(value=-1.0, standard_error=None)
    """
    if not dist.is_normalized:
        raise InvalidInputError("dist", f"probabilities sum to {dist.total!r}")

    value = dist.p_pp + dist.p_mm - dist.p_pm - dist.p_mp

    if dist.n_samples is not None:
        standard_error = math.sqrt(max(1 - value**2, 0) / dist.n_samples)
    elif None not in (errors := (dist.se_pp, dist.se_pm, dist.se_mp, dist.se_mm)):
        standard_error = math.sqrt(sum(error**2 for error in typing.cast("tuple[float]", errors)))
    else:
        standard_error = None

    return Correlation(value=value, standard_error=standard_error)


@pydantic.validate_call(validate_return=True)
def chsh_from_correlations(
    e_ab: Correlation,
    e_ab_prime: Correlation,
    e_a_prime_b: Correlation,
    e_a_prime_b_prime: Correlation,
) -> ChshResult:
    """Combine four correlations into the CHSH statistic.

    Parameters
    ----------
    e_ab : Correlation
        correlation at ``(θ_a, θ_b)``
    e_ab_prime : Correlation
        correlation at ``(θ_a, θ_b')``, entering with a minus sign
    e_a_prime_b : Correlation
        correlation at ``(θ_a', θ_b)``
    e_a_prime_b_prime : Correlation
        correlation at ``(θ_a', θ_b')``

    Returns
    -------
    ChshResult
        ``S`` with its standard error when all four inputs carry one

    Raises
    ------
    InvalidInputError
        if any correlation lies outside ``[−1, 1]``
    """
    correlations = {
        SettingPair.AB: e_ab,
        SettingPair.AB_PRIME: e_ab_prime,
        SettingPair.A_PRIME_B: e_a_prime_b,
        SettingPair.A_PRIME_B_PRIME: e_a_prime_b_prime,
    }

    for setting_pair, term in correlations.items():
        if abs(term.value) > 1 + CORRELATION_TOLERANCE:
            raise InvalidInputError(f"e_{setting_pair}", f"|E| = {abs(term.value)!r} exceeds 1")

    s_value = sum(
        CHSH_COEFFICIENTS[setting_pair] * term.value
        for setting_pair, term in correlations.items()
    )

    errors = [term.standard_error for term in correlations.values()]
    if None in errors:
        standard_error = None
    else:
        standard_error = math.sqrt(sum(error**2 for error in typing.cast("list[float]", errors)))

    return ChshResult(
        s_value=s_value,
        standard_error=standard_error,
        correlations=correlations,
        verdict=judge(s_value, standard_error),
    )


@pydantic.validate_call(validate_return=True)
def exact_chsh(settings: ChshSettings) -> ChshResult:
    """Assemble the exact quantum CHSH result for four detector angles.

    Parameters
    ----------
    settings : ChshSettings
        the four detector angles

    Returns
    -------
    ChshResult
        exact result without standard error
    """
    correlations = [
        correlation_from_distribution(exact_distribution(*settings.angles(setting_pair)))
        for setting_pair in SettingPair
    ]

    return chsh_from_correlations(*correlations)


@pydantic.validate_call(validate_return=True)
def violation_sigmas(s_value: float, standard_error: float) -> float:
    """Measure how far a CHSH value exceeds the local bound in standard errors.

    Parameters
    ----------
    s_value : float
        CHSH statistic
    standard_error : float
        its standard error

    Returns
    -------
    float
        ``(|S| − 2) / se``, negative when the bound is satisfied

    Raises
    ------
    InvalidInputError
        if `standard_error` is not positive

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.chsh_analysis import violation_sigmas
        >>> violation_sigmas(1.9, 0.05)
        -2.0000000000000018
    """
    if not standard_error > 0:
        raise InvalidInputError("standard_error", f"{standard_error!r} is not positive")

    return (abs(s_value) - LOCAL_BOUND) / standard_error


__all__ = [
    "CHSH_COEFFICIENTS",
    "LOCAL_BOUND",
    "TSIRELSON_BOUND",
    "ChshResult",
    "Verdict",
    "chsh_from_correlations",
    "correlation_from_distribution",
    "exact_chsh",
    "judge",
    "violation_sigmas",
]
