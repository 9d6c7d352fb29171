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
""" Quasi-integral feedback control through a phosphorylation cycle.

    The controller species u is the phosphorylated form of a protein with
    constant total amount u_tot. A kinase at level v phosphorylates, a
    phosphatase at level w dephosphorylates; closing the loop means w = X.
    Both enzymatic steps follow Michaelis-Menten kinetics. When both
    substrates saturate their enzymes (zero-order regime) the cycle acts as
    a leaky integrator of v - w with gain 1 / epsilon, epsilon = gamma_u/k2.
"""

from dataclasses import dataclass
from enum import Enum
import logging
from typing import Optional
import warnings

import numpy as np

from .base import PositiveParameters
from .error import ZeroOrderViolated
from .integrator import simulate_to_steady_state
from .plant import PlantParams
from .schedule import DisturbanceInputs
from .system import IntegratorConfig, OdeSystem, Trajectory, stack_components

_logger = logging.getLogger(__name__)

ZERO_ORDER_FACTOR = 10.0
ZERO_ORDER_FRACTION = 0.1


class Loop(str, Enum):
    """The controller wiring."""

    CLOSED = "closed"
    OPEN = "open"


@dataclass(frozen=True)
class QicParams(PositiveParameters):
    """Constants of the phosphorylation cycle and of the activation alpha(u).

    gamma_u may be zero to study the pure enzymatic balance.
    """

    NONNEGATIVE = ("gamma_u",)

    k1: float = 100.0
    k2: float = 100.0
    K1: float = 0.005
    K2: float = 0.005
    gamma_u: float = 1.0
    v: float = 1.0
    u_tot: float = 0.5
    K_act: float = 1.0
    a_act: float = 1.0
    n_act: float = 1.0
    w_open: float = 1.0

    @property
    def epsilon(self) -> float:
        """The time scale separation gamma_u / k2."""
        return qic_epsilon(self)

    @property
    def gain(self) -> float:
        """The static gain k1 / k2 of the ideal controller."""
        return self.k1 / self.k2

    def activation(self, u):
        """The activating Hill function alpha(u)."""
        power = np.maximum(u, 0.0) ** self.n_act
        return self.a_act * power / (power + self.K_act ** self.n_act)


def qic_epsilon(q: QicParams) -> float:
    """Returns epsilon = gamma_u / k2."""
    return q.gamma_u / q.k2


def mm_cycle_rate(q: QicParams, u0, u, w):
    """The rate of change of the phosphorylated form u.

    Args:
        q (QicParams): The cycle constants.
        u0: The unmodified form.
        u: The modified form.
        w: The phosphatase level.

    Returns:
        The rate k1 v u0/(u0+K1) - k2 w u/(u+K2) - gamma_u u.
    """
    return (
        q.k1 * q.v * u0 / (u0 + q.K1)
        - q.k2 * w * u / (u + q.K2)
        - q.gamma_u * u
    )


def qic_reduced_rate(q: QicParams, u, w):
    """The zero-order limit (gamma/epsilon)((k1/k2) v - w) - gamma u."""
    return q.k1 * q.v - q.k2 * w - q.gamma_u * u


def build_qic(
    q: QicParams,
    p: PlantParams,
    dist: DisturbanceInputs,
    loop: Loop = Loop.CLOSED,
) -> OdeSystem:
    """Builds the three state system (m, X, u).

    The transcription rate of the cassette is alpha(u) * R_TX * d1; the
    plant's own alpha is not used. The unmodified form is u_tot - u.

    Args:
        q (QicParams): The controller constants.
        p (PlantParams): The cassette constants.
        dist (DisturbanceInputs): The disturbance channels.
        loop (Loop, optional): CLOSED uses w = X, OPEN uses w = w_open.

    Returns:
        OdeSystem: The system with output X.
    """
    loop = Loop(loop)

    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        h_grn, r, d1, d2, decay = dist.at(t)
        m, protein, u = x
        w = protein if loop is Loop.CLOSED else q.w_open
        u_free = np.maximum(q.u_tot - u, 0.0)
        u_mod = np.maximum(u, 0.0)
        return stack_components(
            q.activation(u) * p.R_TX * d1 - p.delta * decay * m + h_grn,
            p.kappa * d2 * m - p.gamma * protein + r,
            mm_cycle_rate(q, u_free, u_mod, np.maximum(w, 0.0)),
        )

    return OdeSystem(
        ("m", "X", "u"),
        rhs,
        breakpoints=dist.breakpoints,
        output=1,
        label="qic-{}".format(loop.value),
    )


def qic_initial_state(q: QicParams, p: PlantParams) -> np.ndarray:
    """The state at which the cassette delivers the ideal output.

    X = gain v, m = gamma X / kappa and u solves alpha(u) R_TX = delta m
    under nominal disturbances. When alpha cannot reach that level, u
    starts at u_tot.
    """
    target = q.gain * q.v
    m = p.gamma * target / p.kappa
    level = p.delta * m / p.R_TX
    if level >= q.a_act:
        u = q.u_tot
    else:
        u = q.K_act * (level / (q.a_act - level)) ** (1.0 / q.n_act)
    return np.array([m, target, min(u, q.u_tot)])


@dataclass(frozen=True)
class ZeroOrderReport:
    """Zero-order diagnostics along a trajectory."""

    violating_fraction: float
    holds: bool
    full_rate: np.ndarray
    reduced_rate: Optional[np.ndarray]


def check_zero_order(
    q: QicParams, trajectory: Trajectory, loop: Loop = Loop.CLOSED
) -> ZeroOrderReport:
    """Checks the zero-order premise along a QIC trajectory.

    The premise is violated at a sample where u_tot - u < 10 K1 or
    u < 10 K2. If more than 10% of the samples violate it, a
    ZeroOrderViolated warning is issued and no reduced overlay is reported.

    Args:
        q (QicParams): The controller constants.
        trajectory (Trajectory): A trajectory of build_qic.
        loop (Loop, optional): The wiring the trajectory was produced with.

    Returns:
        ZeroOrderReport: The diagnostics.
    """
    u = trajectory.column("u")
    w = trajectory.column("X") if Loop(loop) is Loop.CLOSED else q.w_open
    u_free = q.u_tot - u
    violating = (u_free < ZERO_ORDER_FACTOR * q.K1) | (
        u < ZERO_ORDER_FACTOR * q.K2
    )
    fraction = float(np.mean(violating))
    full = mm_cycle_rate(
        q, np.maximum(u_free, 0.0), np.maximum(u, 0.0), np.maximum(w, 0.0)
    )
    holds = fraction <= ZERO_ORDER_FRACTION
    if not holds:
        warnings.warn(
            "Zero-order premise violated at {:.1%} of the samples".format(
                fraction
            ),
            ZeroOrderViolated,
            stacklevel=2,
        )
    reduced = qic_reduced_rate(q, u, w) * np.ones_like(u) if holds else None
    return ZeroOrderReport(fraction, holds, full, reduced)


def calibrate_open_loop(
    q: QicParams,
    p: PlantParams,
    config: Optional[IntegratorConfig] = None,
) -> QicParams:
    """Chooses w_open so that the open loop matches the closed loop.

    The closed loop is simulated to steady state under nominal disturbances
    and w_open is set to its output. The open-loop cycle then sees the same
    phosphatase level and settles at the same u and X.

    Returns:
        QicParams: A copy of q with w_open calibrated.
    """
    system = build_qic(q, p, DisturbanceInputs(), Loop.CLOSED)
    equilibrium, _ = simulate_to_steady_state(
        system, qic_initial_state(q, p), config
    )
    w_open = equilibrium.point[system.output]
    _logger.debug("Calibrated w_open = %r", w_open)
    return q.with_values(w_open=w_open)
