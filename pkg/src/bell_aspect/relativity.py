"""Transform the events of the experiment between inertial frames moving along the flight axis.

Natural units are used throughout: ``c = 1``, times in seconds and distances in
light-seconds. Frame A moves with ``+β`` towards the right detector, frame B with ``−β``.
"""

import enum
import math
import typing

import pydantic

FrameVelocity = typing.Annotated[float, pydantic.Field(gt=-1, lt=1, allow_inf_nan=False)]
"""Velocity of a frame as a fraction of the speed of light."""


@enum.unique
class EventLabel(enum.StrEnum):
    """Define the three events of one emission."""

    EMISSION = "emission"
    DETECT_RIGHT = "detect_right"
    DETECT_LEFT = "detect_left"


@enum.unique
class Frame(enum.StrEnum):
    """Define the frames in which detection order is judged."""

    A = "A"
    B = "B"
    SOURCE = "source"


@enum.unique
class DetectionOrder(enum.StrEnum):
    """Define the possible time orders of the two detections."""

    RIGHT_FIRST = "right_first"
    LEFT_FIRST = "left_first"
    SIMULTANEOUS = "simultaneous"


class SpacetimeEvent(pydantic.BaseModel):
    """Define an event by its time, position along the flight axis and label."""

    model_config = pydantic.ConfigDict(frozen=True)

    t: pydantic.FiniteFloat
    x: pydantic.FiniteFloat
    label: EventLabel | str = ""


class ExperimentGeometry(pydantic.BaseModel):
    """Define the source-to-detector distance, equal on both sides."""

    model_config = pydantic.ConfigDict(frozen=True)

    d: pydantic.PositiveFloat = pydantic.Field(allow_inf_nan=False)


class EventTimes(pydantic.BaseModel):
    """Define the detection times seen from frames A and B.

    Index 1 is the right detection and index 2 the left one.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    t_A_1: float
    t_A_2: float
    t_B_1: float
    t_B_2: float


class FramesReport(pydantic.BaseModel):
    """Define everything the frame arithmetic says about one geometry and velocity."""

    model_config = pydantic.ConfigDict(frozen=True)

    geometry: ExperimentGeometry
    beta: float
    gamma: float
    event_times: EventTimes
    time_gap: float
    orderings: dict[Frame, DetectionOrder]
    detection_interval: float

    @pydantic.computed_field
    @property
    def detection_spacelike(self: typing.Self) -> bool:
        """Check whether the two detections are spacelike separated."""
        return self.detection_interval < 0


@pydantic.validate_call(validate_return=True)
def gamma(beta: FrameVelocity) -> float:
    """Compute the Lorentz factor ``1/sqrt(1 − β²)``.

    Parameters
    ----------
    beta : FrameVelocity
        frame velocity, strictly between -1 and 1

    Returns
    -------
    float
        factor of at least 1

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.relativity import gamma
        >>> gamma(0.6)
        1.25
    """
    return 1 / math.sqrt(1 - beta**2)


@pydantic.validate_call(validate_return=True)
def lorentz_transform(event: SpacetimeEvent, beta: FrameVelocity) -> SpacetimeEvent:
    """Boost an event into the frame moving with `beta`.

    Parameters
    ----------
    event : SpacetimeEvent
        event in the original frame
    beta : FrameVelocity
        velocity of the new frame

    Returns
    -------
    SpacetimeEvent
        ``(γ(t − βx), γ(x − βt))`` with the label kept
    """
    factor = gamma(beta)

    return SpacetimeEvent(
        t=factor * (event.t - beta * event.x),
        x=factor * (event.x - beta * event.t),
        label=event.label,
    )


@pydantic.validate_call(validate_return=True)
def experiment_events(
    geometry: ExperimentGeometry,
) -> tuple[SpacetimeEvent, SpacetimeEvent, SpacetimeEvent]:
    """Place the three events of one emission in the source frame.

    Parameters
    ----------
    geometry : ExperimentGeometry
        detector distance

    Returns
    -------
    tuple[SpacetimeEvent, SpacetimeEvent, SpacetimeEvent]
        emission at the origin, then the right and left detections at ``t = d``
    """
    return (
        SpacetimeEvent(t=0, x=0, label=EventLabel.EMISSION),
        SpacetimeEvent(t=geometry.d, x=geometry.d, label=EventLabel.DETECT_RIGHT),
        SpacetimeEvent(t=geometry.d, x=-geometry.d, label=EventLabel.DETECT_LEFT),
    )


@pydantic.validate_call(validate_return=True)
def event_times(geometry: ExperimentGeometry, beta: FrameVelocity) -> EventTimes:
    """Compute when each detection happens in frames A and B.

    Parameters
    ----------
    geometry : ExperimentGeometry
        detector distance
    beta : FrameVelocity
        speed of both frames, A moving with ``+β`` and B with ``−β``

    Returns
    -------
    EventTimes
        the four detection times, with ``t_A_1 = t_B_2`` and ``t_A_2 = t_B_1``
    """
    factor = gamma(beta)
    earlier = factor * (geometry.d - beta * geometry.d)
    later = factor * (geometry.d + beta * geometry.d)

    return EventTimes(t_A_1=earlier, t_A_2=later, t_B_1=later, t_B_2=earlier)


@pydantic.validate_call(validate_return=True)
def time_gap(geometry: ExperimentGeometry, beta: FrameVelocity) -> float:
    """Compute the time between the two detections in frame A.

    Parameters
    ----------
    geometry : ExperimentGeometry
        detector distance
    beta : FrameVelocity
        frame velocity

    Returns
    -------
    float
        ``2γβd``, equal to ``t_A_2 − t_A_1``

    Examples
    --------
    .. code-block:: pycon

        >>> from bell_aspect.relativity import ExperimentGeometry, time_gap
        >>> time_gap(ExperimentGeometry(d=1), 0.6)
        1.5
    """
    times = event_times(geometry, beta)

    return times.t_A_2 - times.t_A_1


@pydantic.validate_call(validate_return=True)
def detection_order(
    geometry: ExperimentGeometry, beta: FrameVelocity, frame: Frame
) -> DetectionOrder:
    """Decide which detection happens first in a frame.

    Parameters
    ----------
    geometry : ExperimentGeometry
        detector distance
    beta : FrameVelocity
        speed of frames A and B
    frame : Frame
        frame in which the order is judged

    Returns
    -------
    DetectionOrder
        order of the right and left detections
    """
    if frame == Frame.SOURCE:
        return DetectionOrder.SIMULTANEOUS

    times = event_times(geometry, beta)
    right, left = (
        (times.t_A_1, times.t_A_2) if frame == Frame.A else (times.t_B_1, times.t_B_2)
    )

    if right < left:
        return DetectionOrder.RIGHT_FIRST

    if left < right:
        return DetectionOrder.LEFT_FIRST

    return DetectionOrder.SIMULTANEOUS


@pydantic.validate_call(validate_return=True)
def invariant_interval(e1: SpacetimeEvent, e2: SpacetimeEvent) -> float:
    """Compute the squared interval ``(Δt)² − (Δx)²`` between two events.

    Parameters
    ----------
    e1 : SpacetimeEvent
        first event
    e2 : SpacetimeEvent
        second event

    Returns
    -------
    float
        negative for spacelike, zero for lightlike and positive for timelike separation
    """
    return (e2.t - e1.t) ** 2 - (e2.x - e1.x) ** 2


@pydantic.validate_call(validate_return=True)
def frames_report(geometry: ExperimentGeometry, beta: FrameVelocity) -> FramesReport:
    """Collect the detection times, time gap and orderings for one velocity.

    Parameters
    ----------
    geometry : ExperimentGeometry
        detector distance
    beta : FrameVelocity
        speed of frames A and B

    Returns
    -------
    FramesReport
        frame arithmetic of the experiment
    """
    _, detect_right, detect_left = experiment_events(geometry)

    return FramesReport(
        geometry=geometry,
        beta=beta,
        gamma=gamma(beta),
        event_times=event_times(geometry, beta),
        time_gap=time_gap(geometry, beta),
        orderings={frame: detection_order(geometry, beta, frame) for frame in Frame},
        detection_interval=invariant_interval(detect_right, detect_left),
    )


__all__ = [
    "DetectionOrder",
    "EventLabel",
    "EventTimes",
    "ExperimentGeometry",
    "Frame",
    "FrameVelocity",
    "FramesReport",
    "SpacetimeEvent",
    "detection_order",
    "event_times",
    "experiment_events",
    "frames_report",
    "gamma",
    "invariant_interval",
    "lorentz_transform",
    "time_gap",
]
