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
""" A lumped two-gene pluripotency network.

    x_O lumps the Oct4/Sox2 heterodimer, x_N is Nanog. x_O activates itself,
    the complex c = x_O x_N activates both genes, and high x_O represses
    Nanog. All regulation uses rational Hill terms, so each production term
    is bounded by the sum of its amplitudes.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .base import PositiveParameters
from .error import ParameterError
from .schedule import Signal
from .system import OdeSystem, stack_components


class Control(str, Enum):
    """The input acting on x_O."""

    OPEN = "open"
    HIGHGAIN = "highgain"


@dataclass(frozen=True)
class GrnParams(PositiveParameters):
    """Hill coefficients, decay and controller settings of the network."""

    NONNEGATIVE = ("u_i", "G", "x_star")

    a0: float = 0.05
    a_self: float = 40.0
    K_self: float = 20.0
    n_self: float = 2.0
    a_cplx: float = 1.5
    K_cplx: float = 1.0
    n_cplx: float = 2.0
    b0: float = 0.1
    b_cplx: float = 10.0
    K_cplxN: float = 4.0
    K_rep: float = 100.0
    n_rep: float = 2.0
    gamma_grn: float = 1.0
    u_i: float = 0.0
    G: float = 1000.0
    x_star: float = 3.0

    @property
    def D(self) -> float:
        """Certified upper bound of H_O over the positive orthant."""
        return grn_bound(self)[0]


def _activation(x, amplitude: float, constant: float, n: float):
    power = np.maximum(x, 0.0) ** n
    return amplitude * power / (constant ** n + power)


def _repression(x, constant: float, n: float):
    return constant ** n / (constant ** n + np.maximum(x, 0.0) ** n)


def grn_production(g: GrnParams, x_o, x_n) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluates the production terms (H_O, H_N).

    Negative arguments are treated as zero.
    """
    complex_ = np.maximum(x_o, 0.0) * np.maximum(x_n, 0.0)
    h_o = (
        g.a0
        + _activation(x_o, g.a_self, g.K_self, g.n_self)
        + _activation(complex_, g.a_cplx, g.K_cplx, g.n_cplx)
    )
    h_n = g.b0 + _activation(
        complex_, g.b_cplx, g.K_cplxN, g.n_cplx
    ) * _repression(x_o, g.K_rep, g.n_rep)
    return h_o, h_n


def grn_bound(g: GrnParams) -> Tuple[float, float]:
    """Certified bounds (D_O, D_N) of H_O and H_N.

    Every activating Hill term is below its amplitude and the repression
    factor is below one, so the sums of the amplitudes bound the terms.
    """
    return g.a0 + g.a_self + g.a_cplx, g.b0 + g.b_cplx


def build_grn(
    g: GrnParams,
    control: Control = Control.OPEN,
    u_signal: Optional[Signal] = None,
) -> OdeSystem:
    """Builds the network (x_O, x_N) with its input on x_O.

    Args:
        g (GrnParams): The network constants.
        control (Control, optional): OPEN adds u_i, HIGHGAIN adds
            G (x_star - x_O).
        u_signal (Signal, optional): A time-varying overexpression that
            replaces u_i in OPEN mode.

    Raises:
        ParameterError: If u_signal is given in HIGHGAIN mode or is negative.

    Returns:
        OdeSystem: The system with output x_O.
    """
    control = Control(control)
    if u_signal is not None:
        if control is not Control.OPEN:
            raise ParameterError("A u_i schedule needs open control")
        if u_signal.bounds()[0] < 0:
            raise ParameterError("u_i must be nonnegative")
    overexpression = u_signal.value if u_signal else (lambda _: g.u_i)

    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        x_o, x_n = x
        h_o, h_n = grn_production(g, x_o, x_n)
        if control is Control.OPEN:
            u = overexpression(t)
        else:
            u = g.G * (g.x_star - x_o)
        return stack_components(
            h_o - g.gamma_grn * x_o + u, h_n - g.gamma_grn * x_n
        )

    return OdeSystem(
        ("x_O", "x_N"),
        rhs,
        breakpoints=u_signal.breakpoints if u_signal else (),
        output=0,
        label="grn-{}".format(control.value),
    )


def highgain_envelope(t, G: float, gamma: float, x_star: float, D: float):
    """Bounds x_O(t) under high-gain feedback from x_O(0) = 0.

    Args:
        t: Time or array of times.
        G (float): The feedback gain.
        gamma (float): The decay rate.
        x_star (float): The reference.
        D (float): The bound of the production term.

    Raises:
        ParameterError: If a constant is negative or G + gamma vanishes.

    Returns:
        The lower and the upper bound.
    """
    if min(G, gamma, D) < 0 or G + gamma <= 0:
        raise ParameterError("G, gamma and D must be nonnegative")
    rate = gamma + G
    rise = -np.expm1(-rate * np.asarray(t, dtype=float))
    return G * x_star / rate * rise, (D + G * x_star) / rate * rise
