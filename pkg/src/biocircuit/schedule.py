#
# Copyright (c) 2021 Carsten Igel.
#
# This file is part of biocircuit.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this program. If not, see <http://www.gnu.org/licenses/>.
#
""" Definition of disturbance signals.

    Disturbances are piecewise-constant schedules: a finite list of
    (switch_time, value) pairs with increasing switch times. The value is
    right-continuous and the first value also applies before the first
    switch time. Continuous signals exist for experiments only.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
import logging
from typing import Callable, Iterable, Sequence, Tuple, Union

import numpy as np

from .error import ParameterError

_logger = logging.getLogger(__name__)


class Signal(ABC):
    """A scalar input signal of time."""

    @abstractmethod
    def value(self, t: float) -> float:
        """Evaluates the signal.

        Args:
            t (float): The time.

        Returns:
            float: The signal value.
        """

    @property
    @abstractmethod
    def breakpoints(self) -> Tuple[float, ...]:
        """The switch times of the signal."""

    @abstractmethod
    def bounds(self) -> Tuple[float, float]:
        """The smallest and the largest value taken."""

    def __call__(self, t: float) -> float:
        return self.value(t)


class Schedule(Signal):
    """A piecewise-constant, right-continuous schedule."""

    def __init__(self, points: Iterable[Tuple[float, float]]) -> None:
        """Creates a new instance.

        Args:
            points (Iterable[Tuple[float, float]]): (switch_time, value)
                pairs with strictly increasing switch times.

        Raises:
            ParameterError: If no pair is given, a number is not finite or
                the times do not increase.
        """
        pairs = [(float(t), float(v)) for t, v in points]
        if len(pairs) == 0:
            raise ParameterError("A schedule needs at least one point")
        times = np.array([t for t, _ in pairs])
        values = np.array([v for _, v in pairs])
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise ParameterError("Schedule entries must be finite")
        if np.any(np.diff(times) <= 0):
            raise ParameterError("Schedule switch times must increase")
        self.__times = times
        self.__values = values

    @classmethod
    def constant(cls, value: float) -> "Schedule":
        """Creates a schedule without switches."""
        return cls([(0.0, value)])

    @property
    def points(self) -> Tuple[Tuple[float, float], ...]:
        """The (switch_time, value) pairs."""
        return tuple(zip(self.__times.tolist(), self.__values.tolist()))

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(self.__times[1:].tolist())

    @property
    def is_constant(self) -> bool:
        """True if the schedule never changes its value."""
        return bool(np.all(self.__values == self.__values[0]))

    def value(self, t: float) -> float:
        index = int(np.searchsorted(self.__times, t, side="right")) - 1
        return float(self.__values[max(index, 0)])

    def bounds(self) -> Tuple[float, float]:
        return float(self.__values.min()), float(self.__values.max())

    def scaled(self, factor: float) -> "Schedule":
        """A copy with all values multiplied by factor."""
        return Schedule((t, v * factor) for t, v in self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Schedule):
            return NotImplemented
        return self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return "Schedule({!r})".format(list(self.points))


class ContinuousSignal(Signal):
    """A continuous time-varying signal.

    Experimental: the steady-state analyses of this package assume
    piecewise-constant inputs.
    """

    def __init__(
        self,
        function: Callable[[float], float],
        bounds: Tuple[float, float],
        label: str = "signal",
    ) -> None:
        """Creates a new instance.

        Args:
            function (Callable[[float], float]): The signal.
            bounds (Tuple[float, float]): Known lower and upper bound.
            label (str, optional): A label used in log records.
        """
        _logger.warning(
            "Continuous disturbance '%s' is experimental", label
        )
        self.__function = function
        self.__bounds = (float(bounds[0]), float(bounds[1]))

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return ()

    def value(self, t: float) -> float:
        return float(self.__function(t))

    def bounds(self) -> Tuple[float, float]:
        return self.__bounds


SignalLike = Union[float, Signal, Sequence[Tuple[float, float]]]


def as_signal(value: SignalLike) -> Signal:
    """Coerces a number or a list of pairs into a schedule.

    Args:
        value (SignalLike): A number, a list of (time, value) pairs or a
            signal.

    Returns:
        Signal: The signal.
    """
    if isinstance(value, Signal):
        return value
    if isinstance(value, (int, float)):
        return Schedule.constant(float(value))
    return Schedule(value)


@dataclass(frozen=True)
class DisturbanceInputs:
    """The disturbance channels acting on a gene expression cassette.

    H_GRN and r are additive production terms of mRNA and protein. d1 and d2
    multiply transcription and translation. decay multiplies the mRNA decay
    rate, e.g. a perturbation by an endogenous microRNA.
    """

    H_GRN: Signal = field(default_factory=lambda: Schedule.constant(0.0))
    r: Signal = field(default_factory=lambda: Schedule.constant(0.0))
    d1: Signal = field(default_factory=lambda: Schedule.constant(1.0))
    d2: Signal = field(default_factory=lambda: Schedule.constant(1.0))
    decay: Signal = field(default_factory=lambda: Schedule.constant(1.0))

    def __post_init__(self) -> None:
        for name in ("H_GRN", "r", "d1", "d2", "decay"):
            object.__setattr__(self, name, as_signal(getattr(self, name)))
        if self.H_GRN.bounds()[0] < 0:
            raise ParameterError("H_GRN must be nonnegative")
        for name in ("d1", "d2", "decay"):
            if not getattr(self, name).bounds()[0] > 0:
                raise ParameterError("{} must be positive".format(name))

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        """The union of all switch times."""
        times = set()
        for name in ("H_GRN", "r", "d1", "d2", "decay"):
            times.update(getattr(self, name).breakpoints)
        return tuple(sorted(times))

    def at(self, t: float) -> Tuple[float, float, float, float, float]:
        """All channel values (H_GRN, r, d1, d2, decay) at time t."""
        return (
            self.H_GRN(t),
            self.r(t),
            self.d1(t),
            self.d2(t),
            self.decay(t),
        )
