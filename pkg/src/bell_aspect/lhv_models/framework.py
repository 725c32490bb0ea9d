"""Define hidden-variable models, their samplers and the routing of detector responses.

A model factorizes its density into a photon part and one part per detector. Each part is
an inverse-transform map from the unit cube, and each part draws from its own random
substream. Response functions work on whole batches of hidden variables.

Local models hand each response function only its own detector variables and angle, so a
dependence on the opposite detector cannot be written down. Nonlocal models additionally
receive a `RemoteSide` for the right detector.
"""

import collections.abc
import dataclasses
import enum
import typing

import numpy as np
import pydantic

from ..domain import Angle, Outcome
from ..errors import InvalidInputError
from ..random_streams import StreamPurpose, substream

PhotonTransform = collections.abc.Callable[[np.ndarray], np.ndarray]
DetectorTransform = collections.abc.Callable[[np.ndarray, np.ndarray], np.ndarray]
LocalResponse = collections.abc.Callable[[np.ndarray, np.ndarray, float], np.ndarray]


@enum.unique
class LocalityTag(enum.StrEnum):
    """Define whether a model respects the locality condition by construction."""

    LOCAL = "local"
    NONLOCAL = "nonlocal"


@dataclasses.dataclass(frozen=True, slots=True)
class RemoteSide:
    """Define what a nonlocal right response may see of the left detector.

    Attributes
    ----------
    detector_vars : np.ndarray
        hidden variables of the left detector, shape ``(n, detector_l_dim)``
    theta : float
        rotation of the left detector
    """

    detector_vars: np.ndarray
    theta: float


def unit_cube(uniform: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Use uniform draws on ``[0, 1)`` directly as detector variables.

    Parameters
    ----------
    uniform : np.ndarray
        uniform draws, shape ``(n, dim)``
    theta : np.ndarray
        local detector angle per draw, unused

    Returns
    -------
    np.ndarray
        `uniform` unchanged
    """
    del theta

    return uniform


def identity(uniform: np.ndarray) -> np.ndarray:
    """Use uniform draws on ``[0, 1)`` directly as photon variables.

    Parameters
    ----------
    uniform : np.ndarray
        uniform draws, shape ``(n, dim)``

    Returns
    -------
    np.ndarray
        `uniform` unchanged
    """
    return uniform


def polarization_sign(values: np.ndarray) -> np.ndarray:
    """Map real values to ±1, sending zero to +1.

    Parameters
    ----------
    values : np.ndarray
        values whose sign decides the reading

    Returns
    -------
    np.ndarray
        ``int8`` array of ±1
    """
    return np.where(values >= 0, 1, -1).astype(np.int8)


class LambdaSample(pydantic.BaseModel):
    """Define one draw of all hidden variables."""

    model_config = pydantic.ConfigDict(frozen=True)

    photon_vars: tuple[pydantic.FiniteFloat, ...] = ()
    detector_l_vars: tuple[pydantic.FiniteFloat, ...] = ()
    detector_r_vars: tuple[pydantic.FiniteFloat, ...] = ()


@dataclasses.dataclass(frozen=True, slots=True)
class LambdaBatch:
    """Define many draws of all hidden variables, one row per draw.

    Attributes
    ----------
    photon_vars : np.ndarray
        shape ``(n, photon_dim)``
    detector_l_vars : np.ndarray
        shape ``(n, detector_l_dim)``
    detector_r_vars : np.ndarray
        shape ``(n, detector_r_dim)``
    """

    photon_vars: np.ndarray
    detector_l_vars: np.ndarray
    detector_r_vars: np.ndarray

    def __len__(self: typing.Self) -> int:
        """Count the draws in the batch."""
        return self.photon_vars.shape[0]

    @classmethod
    def from_sample(cls: type[typing.Self], sample: LambdaSample) -> typing.Self:
        """Wrap a single draw as a batch of one.

        Parameters
        ----------
        sample : LambdaSample
            single draw

        Returns
        -------
        LambdaBatch
            batch with one row
        """
        return cls(
            photon_vars=np.asarray(sample.photon_vars, dtype=float).reshape(1, -1),
            detector_l_vars=np.asarray(sample.detector_l_vars, dtype=float).reshape(1, -1),
            detector_r_vars=np.asarray(sample.detector_r_vars, dtype=float).reshape(1, -1),
        )

    def select(self: typing.Self, mask: np.ndarray) -> "LambdaBatch":
        """Keep the rows where `mask` is true.

        Parameters
        ----------
        mask : np.ndarray
            boolean row selector

        Returns
        -------
        LambdaBatch
            filtered batch
        """
        return LambdaBatch(
            photon_vars=self.photon_vars[mask],
            detector_l_vars=self.detector_l_vars[mask],
            detector_r_vars=self.detector_r_vars[mask],
        )


class LhvModel(pydantic.BaseModel):
    """Define a hidden-variable model with a factorized density and ±1 responses.

    `respond_left` is always called as ``respond_left(photon_vars, detector_l_vars, θ_L)``.
    For local models `respond_right` is called as
    ``respond_right(photon_vars, detector_r_vars, θ_R)``; for nonlocal models a fourth
    `RemoteSide` argument is appended.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    photon_dim: pydantic.NonNegativeInt
    detector_l_dim: pydantic.NonNegativeInt = 0
    detector_r_dim: pydantic.NonNegativeInt = 0
    photon_transform: PhotonTransform = identity
    detector_left_transform: DetectorTransform = unit_cube
    detector_right_transform: DetectorTransform = unit_cube
    respond_left: LocalResponse
    respond_right: collections.abc.Callable[..., np.ndarray]
    locality_tag: LocalityTag = LocalityTag.LOCAL
    parameters: dict[str, float] = pydantic.Field(default_factory=dict)

    @property
    def has_detector_variables(self: typing.Self) -> bool:
        """Check whether either detector carries hidden variables."""
        return self.detector_l_dim + self.detector_r_dim > 0


def angle_column(theta: float | np.ndarray, n_draws: int) -> np.ndarray:
    """Broadcast a detector angle to one entry per draw.

    Parameters
    ----------
    theta : float | np.ndarray
        detector angle, scalar or one per draw
    n_draws : int
        number of draws

    Returns
    -------
    np.ndarray
        read-only array of shape ``(n_draws,)``
    """
    return np.broadcast_to(np.asarray(theta, dtype=float), (n_draws,))


def sample_photon(model: LhvModel, n_draws: int, seed: int, chunk_index: int) -> np.ndarray:
    """Draw photon hidden variables from their dedicated substream.

    Parameters
    ----------
    model : LhvModel
        model whose photon density is sampled
    n_draws : int
        number of draws
    seed : int
        root seed
    chunk_index : int
        chunk whose substream is used

    Returns
    -------
    np.ndarray
        photon variables, shape ``(n_draws, photon_dim)``
    """
    generator = substream(seed, chunk_index, StreamPurpose.PHOTON)

    return model.photon_transform(generator.random((n_draws, model.photon_dim)))


def sample_detectors(  # noqa: PLR0913
    model: LhvModel,
    n_draws: int,
    seed: int,
    chunk_index: int,
    theta_l: np.ndarray,
    theta_r: np.ndarray,
    resample: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw detector hidden variables, each detector from its own substream.

    The local angle is handed to each detector's transform, which realises densities of the
    form ``ρ_D(λ_D, θ)``.

    Parameters
    ----------
    model : LhvModel
        model whose detector densities are sampled
    n_draws : int
        number of draws
    seed : int
        root seed
    chunk_index : int
        chunk whose substreams are used
    theta_l : np.ndarray
        left angle per draw
    theta_r : np.ndarray
        right angle per draw
    resample : int, optional
        index of an independent redraw for the same photons, by default 0

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        left and right detector variables
    """
    left_generator = substream(seed, chunk_index, StreamPurpose.DETECTOR_LEFT, resample)
    right_generator = substream(seed, chunk_index, StreamPurpose.DETECTOR_RIGHT, resample)

    detector_l_vars = model.detector_left_transform(
        left_generator.random((n_draws, model.detector_l_dim)), theta_l
    )
    detector_r_vars = model.detector_right_transform(
        right_generator.random((n_draws, model.detector_r_dim)), theta_r
    )

    return detector_l_vars, detector_r_vars


def sample_lambda(  # noqa: PLR0913
    model: LhvModel,
    n_draws: int,
    seed: int,
    chunk_index: int,
    theta_l: float | np.ndarray,
    theta_r: float | np.ndarray,
) -> LambdaBatch:
    """Draw a batch of hidden variables from the factorized density.

    Parameters
    ----------
    model : LhvModel
        model to sample
    n_draws : int
        number of draws
    seed : int
        root seed
    chunk_index : int
        chunk whose substreams are used
    theta_l : float | np.ndarray
        left angle, scalar or one per draw
    theta_r : float | np.ndarray
        right angle, scalar or one per draw

    Returns
    -------
    LambdaBatch
        sampled hidden variables
    """
    photon_vars = sample_photon(model, n_draws, seed, chunk_index)
    detector_l_vars, detector_r_vars = sample_detectors(
        model,
        n_draws,
        seed,
        chunk_index,
        angle_column(theta_l, n_draws),
        angle_column(theta_r, n_draws),
    )

    return LambdaBatch(
        photon_vars=photon_vars, detector_l_vars=detector_l_vars, detector_r_vars=detector_r_vars
    )


def as_outcomes(values: np.ndarray, n_draws: int, side: str) -> np.ndarray:
    """Validate response values and convert them to ``int8``.

    Parameters
    ----------
    values : np.ndarray
        raw response values
    n_draws : int
        expected number of values
    side : str
        which response produced them, for error messages

    Returns
    -------
    np.ndarray
        ``int8`` array of ±1

    Raises
    ------
    InvalidInputError
        if the shape is wrong or a value is not ±1
    """
    raw = np.asarray(values).reshape(-1)

    if raw.shape[0] != n_draws:
        raise InvalidInputError(
            f"respond_{side}", f"returned {raw.shape[0]} values for {n_draws} draws"
        )

    if not np.all(np.isin(raw, (-1, 1))):
        raise InvalidInputError(f"respond_{side}", "returned values other than +1 and -1")

    return raw.astype(np.int8)


def respond_batch(
    model: LhvModel, batch: LambdaBatch, theta_l: float, theta_r: float
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate both detector responses for a batch of hidden variables.

    Parameters
    ----------
    model : LhvModel
        model whose responses are evaluated
    batch : LambdaBatch
        hidden variables
    theta_l : float
        left detector angle
    theta_r : float
        right detector angle

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        left and right readings as ``int8`` arrays of ±1
    """
    left = model.respond_left(batch.photon_vars, batch.detector_l_vars, theta_l)

    match model.locality_tag:
        case LocalityTag.LOCAL:
            right = model.respond_right(batch.photon_vars, batch.detector_r_vars, theta_r)
        case LocalityTag.NONLOCAL:
            right = model.respond_right(
                batch.photon_vars,
                batch.detector_r_vars,
                theta_r,
                RemoteSide(detector_vars=batch.detector_l_vars, theta=theta_l),
            )

    return as_outcomes(left, len(batch), "left"), as_outcomes(right, len(batch), "right")


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def respond(
    model: LhvModel, lambda_sample: LambdaSample, theta_l: Angle, theta_r: Angle
) -> tuple[Outcome, Outcome]:
    """Evaluate both detector responses for a single draw of hidden variables.

    Parameters
    ----------
    model : LhvModel
        model whose responses are evaluated
    lambda_sample : LambdaSample
        hidden variables
    theta_l : Angle
        left detector angle
    theta_r : Angle
        right detector angle

    Returns
    -------
    tuple[Outcome, Outcome]
        readings of the left and right detectors

    Raises
    ------
    InvalidInputError
        if the sample dimensions do not match the model
    """
    dimensions = {
        "photon_vars": (len(lambda_sample.photon_vars), model.photon_dim),
        "detector_l_vars": (len(lambda_sample.detector_l_vars), model.detector_l_dim),
        "detector_r_vars": (len(lambda_sample.detector_r_vars), model.detector_r_dim),
    }
    for field_name, (found, expected) in dimensions.items():
        if found != expected:
            raise InvalidInputError(
                field_name, f"{model.name} expects dimension {expected}, found {found}"
            )

    left, right = respond_batch(model, LambdaBatch.from_sample(lambda_sample), theta_l, theta_r)

    return Outcome(int(left[0])), Outcome(int(right[0]))


__all__ = [
    "DetectorTransform",
    "LambdaBatch",
    "LambdaSample",
    "LhvModel",
    "LocalResponse",
    "LocalityTag",
    "PhotonTransform",
    "RemoteSide",
    "angle_column",
    "as_outcomes",
    "identity",
    "polarization_sign",
    "respond",
    "respond_batch",
    "sample_detectors",
    "sample_lambda",
    "sample_photon",
    "unit_cube",
]
