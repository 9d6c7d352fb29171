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
""" Incoherent feedforward control through an RNA-degrading species.

    The controller gene shares the resources of the regulated gene, so a
    drop of transcription (d1) or translation (d2) lowers the production of
    the degrading species together with the production of the target mRNA.
    The ERN variant translates an endoribonuclease E; the microRNA variant
    produces the degrading species mu directly by transcription and
    therefore does not compensate translational disturbances.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from .base import PositiveParameters
from .error import ParameterError
from .schedule import DisturbanceInputs
from .system import OdeSystem, stack_components


class Variant(str, Enum):
    """The controller species."""

    ERN = "ern"
    MICRORNA = "microrna"


@dataclass(frozen=True)
class FfwdParams(PositiveParameters):
    """Constants of controller (barred) and regulated gene.

    delta = 0 is the perfect adaptation limit, g = 0 switches the controller
    off and yields the unregulated comparator.
    """

    NONNEGATIVE = ("delta", "g")

    alpha_bar: float = 1.0
    delta_bar: float = 1.0
    beta_bar: float = 1.0
    gamma_bar: float = 1.0
    g: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    delta: float = 1.0
    gamma: float = 1.0
    variant: Variant = Variant.ERN

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant(self.variant))
        super().__post_init__()
        if self.delta == 0 and self.g == 0:
            raise ParameterError(
                "delta and g must not both vanish: the mRNA would not decay"
            )

    @property
    def theta(self) -> float:
        """The ERN compensation strength g beta_bar alpha_bar /
        (gamma_bar delta_bar)."""
        return (
            self.g
            * self.beta_bar
            * self.alpha_bar
            / (self.gamma_bar * self.delta_bar)
        )

    @property
    def theta_mirna(self) -> float:
        """The microRNA analogue g alpha_bar / delta_bar."""
        return self.g * self.alpha_bar / self.delta_bar

    @property
    def compensation(self) -> float:
        """theta or theta_mirna, depending on the variant."""
        if self.variant is Variant.ERN:
            return self.theta
        return self.theta_mirna


def build_ffwd(f: FfwdParams, dist: DisturbanceInputs) -> OdeSystem:
    """Builds the feedforward system.

    ERN: (m_E, E, m, X); microRNA: (mu, m, X). The output is X.

    Args:
        f (FfwdParams): The constants.
        dist (DisturbanceInputs): The disturbance channels; only d1 and d2
            act on this family.

    Returns:
        OdeSystem: The system.
    """
    if f.variant is Variant.ERN:

        def rhs(t: float, x: np.ndarray) -> np.ndarray:
            d1, d2 = dist.d1(t), dist.d2(t)
            m_e, ern, m, protein = x
            return stack_components(
                f.alpha_bar * d1 - f.delta_bar * m_e,
                f.beta_bar * d2 * m_e - f.gamma_bar * ern,
                f.alpha * d1 - f.delta * m - f.g * m * ern,
                f.beta * d2 * m - f.gamma * protein,
            )

        names = ("m_E", "E", "m", "X")
    else:

        def rhs(t: float, x: np.ndarray) -> np.ndarray:
            d1, d2 = dist.d1(t), dist.d2(t)
            mu, m, protein = x
            return stack_components(
                f.alpha_bar * d1 - f.delta_bar * mu,
                f.alpha * d1 - f.delta * m - f.g * m * mu,
                f.beta * d2 * m - f.gamma * protein,
            )

        names = ("mu", "m", "X")

    return OdeSystem(
        names,
        rhs,
        breakpoints=dist.breakpoints,
        output=len(names) - 1,
        label="ffwd-{}".format(f.variant.value),
    )


def ffwd_steady_state(
    f: FfwdParams, d1: float = 1.0, d2: float = 1.0
) -> Tuple[float, ...]:
    """The steady state under constant disturbances.

    Args:
        f (FfwdParams): The constants.
        d1 (float, optional): The transcriptional disturbance.
        d2 (float, optional): The translational disturbance.

    Raises:
        ParameterError: If d1 or d2 is not positive.

    Returns:
        Tuple[float, ...]: (m_E, E, m, X) or (mu, m, X).
    """
    if not (d1 > 0 and d2 > 0):
        raise ParameterError("d1 and d2 must be positive")
    if f.variant is Variant.ERN:
        m_e = f.alpha_bar * d1 / f.delta_bar
        degrader = f.beta_bar * d2 * m_e / f.gamma_bar
    else:
        degrader = f.alpha_bar * d1 / f.delta_bar
    m = f.alpha * d1 / (f.delta + f.g * degrader)
    protein = f.beta * d2 * m / f.gamma
    if f.variant is Variant.ERN:
        return m_e, degrader, m, protein
    return degrader, m, protein
