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
""" Definition of the value types of the ODE core: the system contract, the
    integrator configuration, trajectories and equilibria.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from .error import ParameterError
from .protocol import STABILITY_MARGIN

RightHandSide = Callable[[float, np.ndarray], np.ndarray]


def stack_components(*components) -> np.ndarray:
    """Stacks the derivative components of a right-hand side.

    Components may be scalars or arrays of a common shape, so a right-hand
    side written with this helper evaluates a single state of shape (dim,)
    as well as a batch of states of shape (dim, n).

    Returns:
        np.ndarray: The derivative of shape (dim,) or (dim, n).
    """
    return np.stack(np.broadcast_arrays(*components)).astype(float)


class OdeSystem:
    """A smooth autonomous-or-driven system x' = f(t, x) with named
    coordinates.

    The right-hand side must be deterministic and must accept a batch of
    states (dim, n) in addition to a single state (dim,).
    """

    def __init__(
        self,
        names: Sequence[str],
        rhs: RightHandSide,
        breakpoints: Iterable[float] = (),
        output: Optional[int] = None,
        label: str = "",
    ) -> None:
        """Creates a new instance.

        Args:
            names (Sequence[str]): The coordinate labels, one per dimension.
            rhs (RightHandSide): The right-hand side f(t, x).
            breakpoints (Iterable[float], optional): Times at which a driving
                input switches. Defaults to none.
            output (Optional[int], optional): Index of the output coordinate
                y = h(x). Defaults to the last coordinate.
            label (str, optional): A human readable label.

        Raises:
            ParameterError: If no coordinate is given or the output index is
                out of range.
        """
        if len(names) == 0:
            raise ParameterError("A system needs at least one coordinate")
        self.__names: Tuple[str, ...] = tuple(names)
        self.__rhs = rhs
        self.__breakpoints: Tuple[float, ...] = tuple(
            sorted(set(float(b) for b in breakpoints))
        )
        self.__output = len(names) - 1 if output is None else int(output)
        if not 0 <= self.__output < len(names):
            raise ParameterError("Output index out of range")
        self.__label = label

    @property
    def dim(self) -> int:
        """The dimension of the state space."""
        return len(self.__names)

    @property
    def names(self) -> Tuple[str, ...]:
        """The coordinate labels."""
        return self.__names

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        """The sorted switch times of the driving inputs."""
        return self.__breakpoints

    @property
    def output(self) -> int:
        """The index of the output coordinate."""
        return self.__output

    @property
    def label(self) -> str:
        """The label of this system."""
        return self.__label

    @property
    def settled_time(self) -> float:
        """The time from which on all driving inputs are constant."""
        return self.__breakpoints[-1] if self.__breakpoints else 0.0

    def index(self, name: str) -> int:
        """Looks up a coordinate by its label.

        Args:
            name (str): The coordinate label.

        Returns:
            int: The coordinate index.
        """
        return self.__names.index(name)

    def rhs(self, t: float, x: np.ndarray) -> np.ndarray:
        """Evaluates the right-hand side.

        Args:
            t (float): The time.
            x (np.ndarray): A state (dim,) or a batch of states (dim, n).

        Returns:
            np.ndarray: The derivative, shaped like x.
        """
        value = np.asarray(self.__rhs(t, x), dtype=float)
        if value.shape != np.shape(x):
            raise ParameterError(
                "Right-hand side of '{}' returned shape {} for a state of "
                "shape {}".format(self.__label, value.shape, np.shape(x))
            )
        return value

    def residual(self, x: np.ndarray, t: float = 0.0) -> float:
        """The infinity norm of the right-hand side at x."""
        return float(np.max(np.abs(self.rhs(t, np.asarray(x, dtype=float)))))


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances, step bounds and the steady-state criterion."""

    rtol: float = 1e-8
    atol: float = 1e-10
    h_init: Optional[float] = None
    h_max: float = np.inf
    h_min: float = 1e-12
    t_max: float = 1000.0
    ss_tol: float = 1e-9
    ss_window: int = 5
    max_steps: int = 2_000_000

    def __post_init__(self) -> None:
        for name in ("rtol", "atol", "h_max", "h_min", "t_max", "ss_tol"):
            if not getattr(self, name) > 0:
                raise ParameterError(
                    "Integrator setting '{}' must be positive".format(name)
                )
        if self.h_init is not None and not self.h_init > 0:
            raise ParameterError(
                "Integrator setting 'h_init' must be positive"
            )
        if self.ss_window < 1:
            raise ParameterError("Integrator setting 'ss_window' must be >= 1")
        if self.max_steps < 1:
            raise ParameterError("Integrator setting 'max_steps' must be >= 1")


class Trajectory:
    """An immutable time series of states."""

    def __init__(
        self, times: Sequence[float], states: np.ndarray, names: Sequence[str]
    ) -> None:
        """Creates a new instance.

        Args:
            times (Sequence[float]): Strictly increasing sample times.
            states (np.ndarray): The states, one row per sample time.
            names (Sequence[str]): The coordinate labels.

        Raises:
            ParameterError: If the arrays do not line up.
        """
        times_array = np.array(times, dtype=float)
        states_array = np.array(states, dtype=float).reshape(
            len(times_array), len(names)
        )
        if len(times_array) == 0:
            raise ParameterError("A trajectory needs at least one sample")
        if np.any(np.diff(times_array) <= 0):
            raise ParameterError("Trajectory times must strictly increase")
        if not np.all(np.isfinite(states_array)):
            raise ParameterError("Trajectory states must be finite")
        times_array.setflags(write=False)
        states_array.setflags(write=False)
        self.__times = times_array
        self.__states = states_array
        self.__names = tuple(names)

    @property
    def times(self) -> np.ndarray:
        """The sample times."""
        return self.__times

    @property
    def states(self) -> np.ndarray:
        """The states, shape (len(times), dim)."""
        return self.__states

    @property
    def names(self) -> Tuple[str, ...]:
        """The coordinate labels."""
        return self.__names

    @property
    def final_time(self) -> float:
        """The last sample time."""
        return float(self.__times[-1])

    @property
    def final_state(self) -> np.ndarray:
        """The last state."""
        return self.__states[-1]

    def column(self, name: str) -> np.ndarray:
        """All samples of one coordinate.

        Args:
            name (str): The coordinate label.

        Returns:
            np.ndarray: The samples.
        """
        return self.__states[:, self.__names.index(name)]

    def __len__(self) -> int:
        return len(self.__times)


class Stability(str, Enum):
    """Linear stability class of an equilibrium."""

    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"

    @staticmethod
    def classify(
        real_parts: Sequence[float], margin: float = STABILITY_MARGIN
    ) -> "Stability":
        """Classifies by the real parts of the Jacobian's eigenvalues.

        Args:
            real_parts (Sequence[float]): The eigenvalue real parts.
            margin (float, optional): The dead band around zero.

        Returns:
            Stability: The stability class.
        """
        parts = np.asarray(real_parts, dtype=float)
        if np.all(parts < -margin):
            return Stability.STABLE
        if np.any(parts > margin):
            return Stability.UNSTABLE
        return Stability.MARGINAL


@dataclass(frozen=True)
class Equilibrium:
    """An equilibrium point with its linear stability."""

    point: Tuple[float, ...]
    residual: float
    stability: Stability
    eigen_real_parts: Tuple[float, ...]

    @property
    def is_stable(self) -> bool:
        """True if all eigenvalues lie strictly in the left half plane."""
        return self.stability is Stability.STABLE

    def as_array(self) -> np.ndarray:
        """The point as an array."""
        return np.array(self.point, dtype=float)
