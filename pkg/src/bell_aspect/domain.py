"""Define the shared vocabulary of the two-photon polarization experiment."""

import enum
import typing

import pydantic

Angle = pydantic.FiniteFloat
"""Detector rotation in radians; only differences of angles are physically meaningful."""

EXACT_NORMALIZATION_TOLERANCE = 1e-12
ESTIMATED_NORMALIZATION_TOLERANCE = 1e-9


@enum.unique
class Outcome(enum.IntEnum):
    """Define the two polarization readings of a detector."""

    PLUS = 1
    MINUS = -1


@enum.unique
class Side(enum.StrEnum):
    """Define the two arms of the experiment."""

    LEFT = "left"
    RIGHT = "right"


@enum.unique
class SettingPair(enum.StrEnum):
    """Define the four detector-angle pairs entering the CHSH combination.

    The values are the tokens used in exported trial streams.
    """

    AB = "ab"
    AB_PRIME = "abp"
    A_PRIME_B = "apb"
    A_PRIME_B_PRIME = "apbp"


class JointDistribution(pydantic.BaseModel):
    """Define the four joint outcome probabilities for one detector-angle pair.

    Standard errors and the sample count are present only for estimated distributions.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    p_pp: float = pydantic.Field(ge=0, le=1)
    p_pm: float = pydantic.Field(ge=0, le=1)
    p_mp: float = pydantic.Field(ge=0, le=1)
    p_mm: float = pydantic.Field(ge=0, le=1)
    se_pp: float | None = None
    se_pm: float | None = None
    se_mp: float | None = None
    se_mm: float | None = None
    n_samples: pydantic.PositiveInt | None = None

    @property
    def total(self: typing.Self) -> float:
        """Sum the four probabilities.

        Returns
        -------
        float
            total probability mass
        """
        return self.p_pp + self.p_pm + self.p_mp + self.p_mm

    @property
    def normalization_tolerance(self: typing.Self) -> float:
        """Select the tolerance matching how the distribution was constructed.

        Returns
        -------
        float
            allowed deviation of `total` from 1
        """
        if self.n_samples is None:
            return EXACT_NORMALIZATION_TOLERANCE

        return ESTIMATED_NORMALIZATION_TOLERANCE

    @property
    def is_normalized(self: typing.Self) -> bool:
        """Check that the probabilities sum to one.

        Returns
        -------
        bool
            whether `total` is within `normalization_tolerance` of 1
        """
        return abs(self.total - 1) <= self.normalization_tolerance

    @pydantic.model_validator(mode="after")
    def validate_normalization(self: typing.Self) -> typing.Self:
        """Validate that the four probabilities are exhaustive.

        Raises
        ------
        ValueError
            if the probabilities do not sum to one

        Returns
        -------
        JointDistribution
            validated distribution
        """
        if not self.is_normalized:
            raise ValueError(f"Joint probabilities sum to {self.total!r}, expected 1.")

        return self

    def probability(self: typing.Self, outcome_left: Outcome, outcome_right: Outcome) -> float:
        """Look up the probability of one joint outcome.

        Parameters
        ----------
        outcome_left : Outcome
            reading of the left detector
        outcome_right : Outcome
            reading of the right detector

        Returns
        -------
        float
            joint probability of the two readings
        """
        match outcome_left, outcome_right:
            case Outcome.PLUS, Outcome.PLUS:
                return self.p_pp
            case Outcome.PLUS, Outcome.MINUS:
                return self.p_pm
            case Outcome.MINUS, Outcome.PLUS:
                return self.p_mp
            case _:
                return self.p_mm

    def marginal(self: typing.Self, first: float, second: float) -> float:
        """Add two cells into a marginal probability.

        Estimated cells are frequencies ``k/n``, so the sum is rebuilt from the integer count
        ``k₁ + k₂``. Equal counts then give bit-identical marginals however they are split.

        Parameters
        ----------
        first : float
            probability of the first cell
        second : float
            probability of the second cell

        Returns
        -------
        float
            probability of either cell
        """
        if self.n_samples is None:
            return first + second

        return round((first + second) * self.n_samples) / self.n_samples

    @property
    def left_plus(self: typing.Self) -> float:
        """Marginal probability of +1 on the left."""
        return self.marginal(self.p_pp, self.p_pm)

    @property
    def right_plus(self: typing.Self) -> float:
        """Marginal probability of +1 on the right."""
        return self.marginal(self.p_pp, self.p_mp)


class ChshSettings(pydantic.BaseModel):
    """Define the four detector angles of a CHSH configuration.

    Unprimed and primed `a` angles belong to the left detector, `b` angles to the right one.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    theta_a: Angle
    theta_a_prime: Angle
    theta_b: Angle
    theta_b_prime: Angle

    def angles(self: typing.Self, setting_pair: SettingPair) -> tuple[float, float]:
        """Resolve a setting pair into its left and right angles.

        Parameters
        ----------
        setting_pair : SettingPair
            one of the four CHSH pairs

        Returns
        -------
        tuple[float, float]
            left angle and right angle
        """
        match setting_pair:
            case SettingPair.AB:
                return self.theta_a, self.theta_b
            case SettingPair.AB_PRIME:
                return self.theta_a, self.theta_b_prime
            case SettingPair.A_PRIME_B:
                return self.theta_a_prime, self.theta_b
            case SettingPair.A_PRIME_B_PRIME:
                return self.theta_a_prime, self.theta_b_prime


class Correlation(pydantic.BaseModel):
    """Define an outcome-product expectation with its optional standard error."""

    model_config = pydantic.ConfigDict(frozen=True)

    value: pydantic.FiniteFloat
    standard_error: pydantic.NonNegativeFloat | None = None


__all__ = [
    "ESTIMATED_NORMALIZATION_TOLERANCE",
    "EXACT_NORMALIZATION_TOLERANCE",
    "Angle",
    "ChshSettings",
    "Correlation",
    "JointDistribution",
    "Outcome",
    "SettingPair",
    "Side",
]
