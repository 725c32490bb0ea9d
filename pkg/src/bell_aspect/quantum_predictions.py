"""Provide closed-form quantum predictions for the two-photon polarization experiment."""

import math

import pydantic

from .domain import Angle, ChshSettings, JointDistribution, Outcome, SettingPair, Side

SINGLE_PHOTON_PROBABILITY = 0.5


@pydantic.validate_call(validate_return=True)
def singles_probability(side: Side, outcome: Outcome, theta: Angle) -> float:
    """Compute the probability of one reading on one detector.

    Parameters
    ----------
    side : Side
        detector arm
    outcome : Outcome
        polarization reading
    theta : Angle
        rotation of the detector in radians

    Returns
    -------
    float
        probability of `outcome`, always one half

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.quantum_predictions import singles_probability
        >>> singles_probability("left", 1, 0.0)
        0.5
        >>> singles_probability("right", -1, 1.234)
        0.5
    """
    del side, outcome, theta

    return SINGLE_PHOTON_PROBABILITY


@pydantic.validate_call(validate_return=True)
def joint_probability(
    out_l: Outcome, out_r: Outcome, theta_l: Angle, theta_r: Angle
) -> float:
    """Compute the probability of a pair of readings.

    Parameters
    ----------
    out_l : Outcome
        reading on the left detector
    out_r : Outcome
        reading on the right detector
    theta_l : Angle
        rotation of the left detector in radians
    theta_r : Angle
        rotation of the right detector in radians

    Returns
    -------
    float
        ``sin²(θ_L − θ_R)/2`` for equal readings, ``cos²(θ_L − θ_R)/2`` otherwise

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.quantum_predictions import joint_probability
        >>> joint_probability(1, 1, 0.3, 0.3)
        0.0
        >>> joint_probability(1, -1, 0.3, 0.3)
        0.5
    """
    difference = theta_l - theta_r

    if out_l == out_r:
        return math.sin(difference) ** 2 / 2

    return math.cos(difference) ** 2 / 2


@pydantic.validate_call(validate_return=True)
def exact_distribution(theta_l: Angle, theta_r: Angle) -> JointDistribution:
    """Assemble the four joint probabilities for one angle pair.

    Parameters
    ----------
    theta_l : Angle
        rotation of the left detector in radians
    theta_r : Angle
        rotation of the right detector in radians

    Returns
    -------
    JointDistribution
        exact distribution without standard errors
    """
    return JointDistribution(
        p_pp=joint_probability(Outcome.PLUS, Outcome.PLUS, theta_l, theta_r),
        p_pm=joint_probability(Outcome.PLUS, Outcome.MINUS, theta_l, theta_r),
        p_mp=joint_probability(Outcome.MINUS, Outcome.PLUS, theta_l, theta_r),
        p_mm=joint_probability(Outcome.MINUS, Outcome.MINUS, theta_l, theta_r),
    )


@pydantic.validate_call(validate_return=True)
def correlation(theta_l: Angle, theta_r: Angle) -> float:
    """Compute the expected product of the two readings.

    The four-term sum ``P++ + P−− − P+− − P−+`` reduces to ``−cos 2(θ_L − θ_R)``.

    Parameters
    ----------
    theta_l : Angle
        rotation of the left detector in radians
    theta_r : Angle
        rotation of the right detector in radians

    Returns
    -------
    float
        correlation in ``[−1, 1]``

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.quantum_predictions import correlation
        >>> correlation(0.2, 0.2)
        -1.0
    """
    return -math.cos(2 * (theta_l - theta_r))


@pydantic.validate_call(validate_return=True)
def chsh_value(settings: ChshSettings) -> float:
    """Combine the four quantum correlations into the CHSH statistic.

    Parameters
    ----------
    settings : ChshSettings
        the four detector angles

    Returns
    -------
    float
        ``E(a, b) − E(a, b') + E(a', b) + E(a', b')``

    Examples
    --------
    .. code-block:: pycon

        >>> import math
        >>> from bell_aspect.domain import ChshSettings
        >>> from bell_aspect.quantum_predictions import chsh_value
        >>> settings = ChshSettings(
        ...     theta_a=math.pi / 4,
        ...     theta_a_prime=0,
        ...     theta_b=math.pi / 8,
        ...     theta_b_prime=-math.pi / 8,
        ... )
        >>> round(chsh_value(settings), 12)
        -2.828427124746
    """
    correlations = {
        setting_pair: correlation(*settings.angles(setting_pair)) for setting_pair in SettingPair
    }

    return (
        correlations[SettingPair.AB]
        - correlations[SettingPair.AB_PRIME]
        + correlations[SettingPair.A_PRIME_B]
        + correlations[SettingPair.A_PRIME_B_PRIME]
    )


__all__ = [
    "SINGLE_PHOTON_PROBABILITY",
    "chsh_value",
    "correlation",
    "exact_distribution",
    "joint_probability",
    "singles_probability",
]
