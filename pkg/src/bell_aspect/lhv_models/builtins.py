"""Provide the built-in hidden-variable models and parametric model families."""

import collections.abc
import functools
import math
import typing

import numpy as np
import pydantic

from ..errors import InvalidInputError, UnknownNameError
from .framework import LhvModel, LocalityTag, RemoteSide, polarization_sign

DEFAULT_NOISE_RATE = 0.1
MAXIMUM_FRAME_BETA = 0.99

NoiseRate = typing.Annotated[float, pydantic.Field(ge=0, le=1)]


def uniform_polarization_angle(uniform: np.ndarray) -> np.ndarray:
    """Map the first uniform coordinate to a polarization angle on ``[0, 2π)``.

    Remaining coordinates are passed through.

    Parameters
    ----------
    uniform : np.ndarray
        uniform draws, shape ``(n, dim)`` with ``dim ≥ 1``

    Returns
    -------
    np.ndarray
        photon variables with the angle in column 0
    """
    photon_vars = uniform.copy()
    photon_vars[:, 0] *= 2 * math.pi

    return photon_vars


def sign_response(
    photon_vars: np.ndarray,
    detector_vars: np.ndarray,
    theta: float,
    *,
    polarity: int = 1,
    offset: float = 0.0,
) -> np.ndarray:
    """Read ``polarity · sign(cos 2(φ − θ − offset))`` off the photon angle.

    Parameters
    ----------
    photon_vars : np.ndarray
        photon variables with the angle ``φ`` in column 0
    detector_vars : np.ndarray
        detector variables, unused
    theta : float
        detector angle
    polarity : int, optional
        +1 for the left detector, -1 for the right one, by default 1
    offset : float, optional
        rotation added to the detector angle, by default 0.0

    Returns
    -------
    np.ndarray
        ±1 readings
    """
    del detector_vars

    return polarity * polarization_sign(np.cos(2 * (photon_vars[:, 0] - theta - offset)))


def noisy_sign_response(
    photon_vars: np.ndarray, detector_vars: np.ndarray, theta: float, *, epsilon: float
) -> np.ndarray:
    """Flip the right-hand sign reading whenever the detector variable falls below `epsilon`.

    Parameters
    ----------
    photon_vars : np.ndarray
        photon variables with the angle ``φ`` in column 0
    detector_vars : np.ndarray
        right detector variables, a single uniform column
    theta : float
        right detector angle
    epsilon : float
        flip rate

    Returns
    -------
    np.ndarray
        ±1 readings
    """
    readings = sign_response(photon_vars, detector_vars, theta, polarity=-1)
    flips = np.where(detector_vars[:, 0] < epsilon, -1, 1).astype(np.int8)

    return readings * flips


def threshold_response(
    photon_vars: np.ndarray,
    detector_vars: np.ndarray,
    theta: float,
    *,
    polarity: int,
    cutoff: float,
) -> np.ndarray:
    """Read `polarity` when ``cos 2(φ − θ)`` reaches `cutoff`, its opposite otherwise.

    Parameters
    ----------
    photon_vars : np.ndarray
        photon variables with the angle ``φ`` in column 0
    detector_vars : np.ndarray
        detector variables, unused
    theta : float
        detector angle
    polarity : int
        reading above the cutoff
    cutoff : float
        threshold on ``cos 2(φ − θ)``

    Returns
    -------
    np.ndarray
        ±1 readings
    """
    del detector_vars

    above = np.cos(2 * (photon_vars[:, 0] - theta)) >= cutoff

    return np.where(above, polarity, -polarity).astype(np.int8)


def mimic_right_response(
    photon_vars: np.ndarray, detector_vars: np.ndarray, theta: float, remote: RemoteSide
) -> np.ndarray:
    """Oppose the left reading with probability ``cos²(θ_L − θ_R)``, using the left angle.

    Parameters
    ----------
    photon_vars : np.ndarray
        photon angle ``φ`` in column 0, uniform ``u`` in column 1
    detector_vars : np.ndarray
        right detector variables, unused
    theta : float
        right detector angle
    remote : RemoteSide
        left detector angle and variables

    Returns
    -------
    np.ndarray
        ±1 readings
    """
    del detector_vars

    left = sign_response(photon_vars, np.empty((photon_vars.shape[0], 0)), remote.theta)
    opposite = photon_vars[:, 1] < math.cos(remote.theta - theta) ** 2

    return np.where(opposite, -left, left).astype(np.int8)


def bell_sign_model(
    offset_left: float = 0.0, offset_right: float = 0.0, *, name: str = "bell_sign"
) -> LhvModel:
    """Build the sign model with perfect anticorrelation at equal angles.

    Parameters
    ----------
    offset_left : float, optional
        rotation added to the left angle, by default 0.0
    offset_right : float, optional
        rotation added to the right angle, by default 0.0
    name : str, optional
        model name, by default "bell_sign"

    Returns
    -------
    LhvModel
        local model with one photon angle and no detector variables
    """
    return LhvModel(
        name=name,
        photon_dim=1,
        photon_transform=uniform_polarization_angle,
        respond_left=functools.partial(sign_response, polarity=1, offset=offset_left),
        respond_right=functools.partial(sign_response, polarity=-1, offset=offset_right),
        parameters={"offset_left": offset_left, "offset_right": offset_right},
    )


def bell_sign_detector_noise_model(epsilon: float = DEFAULT_NOISE_RATE) -> LhvModel:
    """Build the sign model whose right reading flips at rate `epsilon`.

    Parameters
    ----------
    epsilon : float, optional
        flip rate driven by the right detector variable, by default DEFAULT_NOISE_RATE

    Returns
    -------
    LhvModel
        local model with one right detector variable
    """
    return LhvModel(
        name="bell_sign_detector_noise",
        photon_dim=1,
        detector_r_dim=1,
        photon_transform=uniform_polarization_angle,
        respond_left=functools.partial(sign_response, polarity=1),
        respond_right=functools.partial(noisy_sign_response, epsilon=epsilon),
        parameters={"epsilon": epsilon},
    )


def qm_mimic_nonlocal_model() -> LhvModel:
    """Build the nonlocal model that reproduces the quantum joint probabilities.

    Returns
    -------
    LhvModel
        nonlocal model whose right response reads the left angle
    """
    return LhvModel(
        name="qm_mimic_nonlocal",
        photon_dim=2,
        photon_transform=uniform_polarization_angle,
        respond_left=functools.partial(sign_response, polarity=1),
        respond_right=mimic_right_response,
        locality_tag=LocalityTag.NONLOCAL,
    )


def threshold_model(cutoff_left: float = 0.0, cutoff_right: float = 0.0) -> LhvModel:
    """Build the model whose readings switch at a cutoff on ``cos 2(φ − θ)``.

    Parameters
    ----------
    cutoff_left : float, optional
        cutoff of the left detector, by default 0.0
    cutoff_right : float, optional
        cutoff of the right detector, by default 0.0

    Returns
    -------
    LhvModel
        local model, equal to `bell_sign_model` at zero cutoffs
    """
    return LhvModel(
        name="threshold",
        photon_dim=1,
        photon_transform=uniform_polarization_angle,
        respond_left=functools.partial(threshold_response, polarity=1, cutoff=cutoff_left),
        respond_right=functools.partial(threshold_response, polarity=-1, cutoff=cutoff_right),
        parameters={"cutoff_left": cutoff_left, "cutoff_right": cutoff_right},
    )


def bell_sign_frame_shift_model(frame_coupling: float = 0.0, beta: float = 0.0) -> LhvModel:
    """Build a sign model whose surfaces depend on the velocity of the observing frame.

    The right surface is judged from frame A moving with ``+β`` and the left surface from
    frame B moving with ``−β``; each is rotated by ``frame_coupling`` times its frame velocity.

    Parameters
    ----------
    frame_coupling : float, optional
        rotation per unit of frame velocity, by default 0.0
    beta : float, optional
        speed of frames A and B as a fraction of c, by default 0.0

    Returns
    -------
    LhvModel
        local model
    """
    return LhvModel(
        name="bell_sign_frame_shift",
        photon_dim=1,
        photon_transform=uniform_polarization_angle,
        respond_left=functools.partial(sign_response, polarity=1, offset=-frame_coupling * beta),
        respond_right=functools.partial(
            sign_response, polarity=-1, offset=frame_coupling * beta
        ),
        parameters={"frame_coupling": frame_coupling, "beta": beta},
    )


BUILTIN_MODELS: dict[str, collections.abc.Callable[[float], LhvModel]] = {
    "bell_sign": lambda _: bell_sign_model(),
    "bell_sign_detector_noise": bell_sign_detector_noise_model,
    "qm_mimic_nonlocal": lambda _: qm_mimic_nonlocal_model(),
}


def available_models() -> list[str]:
    """List the names accepted by `builtin_model`.

    Returns
    -------
    list[str]
        sorted model names
    """
    return sorted(BUILTIN_MODELS)


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def builtin_model(name: str, epsilon: NoiseRate = DEFAULT_NOISE_RATE) -> LhvModel:
    """Look up a built-in model by name.

    Parameters
    ----------
    name : str
        one of `available_models`
    epsilon : NoiseRate, optional
        flip rate used by ``bell_sign_detector_noise``, by default DEFAULT_NOISE_RATE

    Returns
    -------
    LhvModel
        the named model

    Raises
    ------
    UnknownNameError
        if `name` is not registered
    """
    try:
        factory = BUILTIN_MODELS[name]
    except KeyError as error:
        raise UnknownNameError("model", name, BUILTIN_MODELS) from error

    return factory(epsilon)


class ParameterSpec(pydantic.BaseModel):
    """Define one tunable parameter of a model family."""

    model_config = pydantic.ConfigDict(frozen=True)

    name: str
    lower: float
    upper: float
    default: float


class ParametricFamily(pydantic.BaseModel):
    """Define a family of local models indexed by a parameter vector."""

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    parameters: tuple[ParameterSpec, ...]
    build: collections.abc.Callable[..., LhvModel]

    @property
    def defaults(self: typing.Self) -> dict[str, float]:
        """Collect the default parameter values."""
        return {parameter.name: parameter.default for parameter in self.parameters}

    def create(self: typing.Self, values: collections.abc.Mapping[str, float]) -> LhvModel:
        """Build the member of the family at `values`.

        Missing parameters take their defaults.

        Parameters
        ----------
        values : collections.abc.Mapping[str, float]
            parameter values by name

        Returns
        -------
        LhvModel
            family member

        Raises
        ------
        InvalidInputError
            if a name is unknown or a value lies outside its bounds
        """
        unknown = set(values) - set(self.defaults)
        if unknown:
            raise InvalidInputError("values", f"{self.name} has no parameters {sorted(unknown)}")

        resolved = self.defaults | dict(values)
        for parameter in self.parameters:
            value = resolved[parameter.name]
            if not parameter.lower <= value <= parameter.upper:
                raise InvalidInputError(
                    parameter.name, f"{value!r} outside [{parameter.lower}, {parameter.upper}]"
                )

        model = self.build(**resolved)
        if model.locality_tag != LocalityTag.LOCAL:
            raise InvalidInputError("family", f"{self.name} produced a nonlocal model")

        return model


PARAMETRIC_FAMILIES: dict[str, ParametricFamily] = {
    family.name: family
    for family in (
        ParametricFamily(
            name="bell_sign_offset",
            parameters=(
                ParameterSpec(name="offset_left", lower=0, upper=math.pi / 2, default=0),
                ParameterSpec(name="offset_right", lower=0, upper=math.pi / 2, default=0),
            ),
            build=functools.partial(bell_sign_model, name="bell_sign_offset"),
        ),
        ParametricFamily(
            name="threshold",
            parameters=(
                ParameterSpec(name="cutoff_left", lower=-1, upper=1, default=0),
                ParameterSpec(name="cutoff_right", lower=-1, upper=1, default=0),
            ),
            build=threshold_model,
        ),
        ParametricFamily(
            name="bell_sign_frame_shift",
            parameters=(
                ParameterSpec(name="frame_coupling", lower=-1, upper=1, default=0),
                ParameterSpec(
                    name="beta", lower=-MAXIMUM_FRAME_BETA, upper=MAXIMUM_FRAME_BETA, default=0
                ),
            ),
            build=bell_sign_frame_shift_model,
        ),
    )
}


def available_families() -> list[str]:
    """List the names accepted by `parametric_family`.

    Returns
    -------
    list[str]
        sorted family names
    """
    return sorted(PARAMETRIC_FAMILIES)


@pydantic.validate_call(
    validate_return=True, config=pydantic.ConfigDict(arbitrary_types_allowed=True)
)
def parametric_family(name: str) -> ParametricFamily:
    """Look up a registered local model family.

    Parameters
    ----------
    name : str
        one of `available_families`

    Returns
    -------
    ParametricFamily
        the named family

    Raises
    ------
    UnknownNameError
        if `name` is not registered
    """
    try:
        return PARAMETRIC_FAMILIES[name]
    except KeyError as error:
        raise UnknownNameError("family", name, PARAMETRIC_FAMILIES) from error


__all__ = [
    "BUILTIN_MODELS",
    "DEFAULT_NOISE_RATE",
    "PARAMETRIC_FAMILIES",
    "ParameterSpec",
    "ParametricFamily",
    "available_families",
    "available_models",
    "bell_sign_detector_noise_model",
    "bell_sign_frame_shift_model",
    "bell_sign_model",
    "builtin_model",
    "parametric_family",
    "qm_mimic_nonlocal_model",
    "threshold_model",
]
