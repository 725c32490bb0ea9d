"""Define exceptions shared across the simulation modules."""

import collections.abc
import typing


class InvalidInputError(ValueError):
    """Raised when an operation receives inputs outside its domain.

    Parameters
    ----------
    parameter : str
        name of the offending input
    reason : str
        explanation of why the input is rejected
    """

    def __init__(self: typing.Self, parameter: str, reason: str) -> None:
        self.parameter = parameter
        self.reason = reason

        super().__init__(f"Invalid input for {parameter=}: {reason}.")


class UnknownNameError(LookupError):
    """Raised when a registry lookup fails.

    Parameters
    ----------
    kind : str
        kind of registry entry that was requested, e.g. ``model``
    name : str
        requested name
    available : collections.abc.Iterable[str]
        names registered for that kind
    """

    def __init__(
        self: typing.Self, kind: str, name: str, available: collections.abc.Iterable[str]
    ) -> None:
        self.kind = kind
        self.name = name
        self.available = tuple(sorted(available))

        super().__init__(f"Unknown {kind} {name=}, expected one of {self.available}.")


__all__ = ["InvalidInputError", "UnknownNameError"]
