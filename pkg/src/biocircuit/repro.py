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
""" Reprogramming controller combining copy-number feedforward with
    microRNA feedback.

    A synthetic construct at G copies per unit disturbance d transcribes the
    target mRNA m_i (rate alpha) together with a microRNA mu (rate beta)
    that degrades m_i. For large G the microRNA pins m_i at
    m_inf = alpha delta_bar / (c beta), independently of d and of the
    endogenous production H_i.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .base import PositiveParameters
from .error import ParameterError
from .grn import GrnParams, grn_production
from .schedule import Schedule, Signal
from .system import OdeSystem, stack_components


@dataclass(frozen=True)
class ReproParams(PositiveParameters):
    """Constants of the reprogramming construct."""

    G: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    c: float = 1.0
    delta: float = 1.0
    delta_bar: float = 1.0
    kappa: float = 1.0
    gamma: float = 1.0
    d: float = 1.0


@dataclass(frozen=True)
class ReproSteadyState:
    """Closed-form steady state with its high-gain limits and bounds."""

    m_i: float
    mu: float
    x_i: float
    m_inf: float
    x_inf: float
    m_tilde: float
    x_tilde: float

    def as_tuple(self) -> Tuple[float, float, float]:
        """The state (m_i, mu, x_i)."""
        return self.m_i, self.mu, self.x_i


def repro_limits(r: ReproParams) -> Tuple[float, float]:
    """The G -> infinity limits (m_inf, x_inf).

    x_inf = kappa alpha delta_bar / (gamma c beta) carries the protein decay
    gamma; it is the limit of x_i for the dynamics x_i' = kappa m_i -
    gamma x_i.
    """
    m_inf = r.alpha * r.delta_bar / (r.c * r.beta)
    return m_inf, r.kappa * m_inf / r.gamma


def residual_bounds(r: ReproParams, D: float) -> Tuple[float, float]:
    """The residual bounds (m_tilde, x_tilde) for |H_i| <= D.

    Args:
        r (ReproParams): The constants.
        D (float): The bound of the endogenous production.

    Returns:
        Tuple[float, float]: D / (c G beta d / delta_bar) and
            kappa D / (gamma c G beta d / delta_bar).
    """
    if D < 0:
        raise ParameterError("D must be nonnegative")
    repression = r.c * r.G * r.beta * r.d / r.delta_bar
    return D / repression, r.kappa * D / (r.gamma * repression)


def repro_steady_state(r: ReproParams, H_const: float) -> ReproSteadyState:
    """The steady state of the standalone construct under constant H_i.

    Args:
        r (ReproParams): The constants.
        H_const (float): The endogenous production, also used as the bound D
            of the residuals.

    Raises:
        ParameterError: If H_const is negative.

    Returns:
        ReproSteadyState: The state, the limits and the residual bounds.
    """
    if H_const < 0:
        raise ParameterError("H_const must be nonnegative")
    mu = r.d * r.G * r.beta / r.delta_bar
    m_i = (H_const + r.G * r.alpha * r.d) / (
        r.delta + r.c * r.G * r.beta * r.d / r.delta_bar
    )
    m_inf, x_inf = repro_limits(r)
    m_tilde, x_tilde = residual_bounds(r, H_const)
    return ReproSteadyState(
        m_i=m_i,
        mu=mu,
        x_i=r.kappa * m_i / r.gamma,
        m_inf=m_inf,
        x_inf=x_inf,
        m_tilde=m_tilde,
        x_tilde=x_tilde,
    )


def build_repro(
    r: ReproParams,
    H_i: Union[Signal, GrnParams],
    t_off: Optional[float] = None,
) -> OdeSystem:
    """Builds the construct, standalone or coupled to the network.

    Standalone (H_i a signal): states (m_i, mu, x_i). Coupled (H_i the
    network constants): states (m_i, mu, x_O, x_N), where x_i is x_O and the
    endogenous production is H_O(x). With t_off given, the construct is
    removed (G = 0) from t_off on.

    Args:
        r (ReproParams): The constants.
        H_i (Union[Signal, GrnParams]): The endogenous production.
        t_off (float, optional): The removal time.

    Raises:
        ParameterError: If t_off is not positive.

    Returns:
        OdeSystem: The system with output x_i (x_O).
    """
    if t_off is not None and not t_off > 0:
        raise ParameterError("t_off must be positive")
    switch = Schedule(
        [(0.0, 1.0)] if t_off is None else [(0.0, 1.0), (t_off, 0.0)]
    )

    def construct(t: float, m, mu):
        copies = r.d * r.G * switch(t)
        return (
            copies * r.alpha - r.delta * m - r.c * m * mu,
            copies * r.beta - r.delta_bar * mu,
        )

    if isinstance(H_i, GrnParams):
        grn = H_i

        def rhs(t: float, x: np.ndarray) -> np.ndarray:
            m, mu, x_o, x_n = x
            h_o, h_n = grn_production(grn, x_o, x_n)
            dm, dmu = construct(t, m, mu)
            return stack_components(
                dm + h_o,
                dmu,
                r.kappa * m - r.gamma * x_o,
                h_n - grn.gamma_grn * x_n,
            )

        return OdeSystem(
            ("m_i", "mu", "x_O", "x_N"),
            rhs,
            breakpoints=switch.breakpoints,
            output=2,
            label="repro-coupled",
        )

    production = H_i

    def standalone(t: float, x: np.ndarray) -> np.ndarray:
        m, mu, protein = x
        dm, dmu = construct(t, m, mu)
        return stack_components(
            dm + production(t), dmu, r.kappa * m - r.gamma * protein
        )

    return OdeSystem(
        ("m_i", "mu", "x_i"),
        standalone,
        breakpoints=tuple(production.breakpoints) + switch.breakpoints,
        output=2,
        label="repro",
    )


def repro_initial_state(
    r: ReproParams, grn_point: Sequence[float]
) -> np.ndarray:
    """The coupled state of an untreated cell at a network state.

    The construct is absent (mu = 0) and m_i carries the endogenous mRNA
    that sustains x_O.
    """
    x_o, x_n = grn_point
    return np.array([r.gamma * x_o / r.kappa, 0.0, x_o, x_n])
