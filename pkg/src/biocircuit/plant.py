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
""" The unregulated gene expression cassette.

    mRNA m is transcribed at rate alpha * R_TX and decays at rate delta; the
    protein X is translated at rate beta * R_TL per mRNA and decays at rate
    gamma. The free resource levels R_TX and R_TL are lumped into the
    constants k and kappa.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .base import PositiveParameters
from .schedule import DisturbanceInputs
from .system import OdeSystem, stack_components


@dataclass(frozen=True)
class PlantParams(PositiveParameters):
    """Rate constants of the cassette."""

    alpha: float = 1.0
    beta: float = 1.0
    R_TX: float = 1.0
    R_TL: float = 1.0
    delta: float = 1.0
    gamma: float = 1.0

    @property
    def k(self) -> float:
        """The effective transcription rate alpha * R_TX."""
        return self.alpha * self.R_TX

    @property
    def kappa(self) -> float:
        """The effective translation rate beta * R_TL."""
        return self.beta * self.R_TL


def build_plant(p: PlantParams, dist: DisturbanceInputs) -> OdeSystem:
    """Builds the two state cassette (m, X) with output X.

    Args:
        p (PlantParams): The rate constants.
        dist (DisturbanceInputs): The disturbance channels.

    Returns:
        OdeSystem: The system.
    """

    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        h_grn, r, d1, d2, decay = dist.at(t)
        m, protein = x
        return stack_components(
            p.k * d1 - p.delta * decay * m + h_grn,
            p.kappa * d2 * m - p.gamma * protein + r,
        )

    return OdeSystem(
        ("m", "X"),
        rhs,
        breakpoints=dist.breakpoints,
        output=1,
        label="plant",
    )


def plant_steady_state(
    p: PlantParams,
    h_grn: float = 0.0,
    r: float = 0.0,
    d1: float = 1.0,
    d2: float = 1.0,
    decay: float = 1.0,
) -> Tuple[float, float]:
    """The steady state (m*, X*) under constant disturbances."""
    m = (p.k * d1 + h_grn) / (p.delta * decay)
    return m, (p.kappa * d2 * m + r) / p.gamma
