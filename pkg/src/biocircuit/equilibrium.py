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
""" Equilibrium finding and linear stability classification.

    Equilibria are found by a damped Newton iteration started from
    low-discrepancy seeds inside a box. All seeds are iterated as one batch,
    so right-hand sides are evaluated on arrays of shape (dim, n).
"""

from dataclasses import dataclass
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage
from scipy.stats import qmc

from .error import NotAnEquilibrium, ParameterError
from .protocol import (
    DEDUP_TOLERANCE,
    EQUILIBRIUM_TOLERANCE,
    NEAR_EQUILIBRIUM_TOLERANCE,
    STABILITY_MARGIN,
)
from .system import Equilibrium, OdeSystem, Stability

_logger = logging.getLogger(__name__)

Box = Sequence[Tuple[float, float]]


@dataclass(frozen=True)
class NewtonConfig:
    """Settings of the multi-start Newton search."""

    max_iter: int = 100
    tol: float = 1e-13
    accept: float = EQUILIBRIUM_TOLERANCE
    dedup: float = DEDUP_TOLERANCE
    max_backtrack: int = 40
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_iter < 1 or self.max_backtrack < 1:
            raise ParameterError("Iteration limits must be positive")
        if not (self.tol > 0 and self.accept > 0 and self.dedup > 0):
            raise ParameterError("Newton tolerances must be positive")


def _time(system: OdeSystem, t: Optional[float]) -> float:
    return system.settled_time if t is None else float(t)


def _batched_jacobian(
    system: OdeSystem, t: float, points: np.ndarray
) -> np.ndarray:
    """Central difference Jacobians of a batch of points (dim, n).

    Returns:
        np.ndarray: The Jacobians, shape (n, dim, dim).
    """
    dim, count = points.shape
    result = np.empty((count, dim, dim))
    steps = np.maximum(1e-6, 1e-6 * np.abs(points))
    for i in range(dim):
        upper = points.copy()
        lower = points.copy()
        upper[i] += steps[i]
        lower[i] -= steps[i]
        column = (system.rhs(t, upper) - system.rhs(t, lower)) / (
            upper[i] - lower[i]
        )
        result[:, :, i] = column.T
    return result


def jacobian(
    system: OdeSystem, point: Sequence[float], t: Optional[float] = None
) -> np.ndarray:
    """Estimates the Jacobian by central finite differences.

    The step of coordinate i is max(1e-6, 1e-6 * |x_i|).

    Args:
        system (OdeSystem): The system.
        point (Sequence[float]): The point to linearise at.
        t (float, optional): The time. Defaults to the settled time of the
            system.

    Returns:
        np.ndarray: The Jacobian, shape (dim, dim).
    """
    column = np.asarray(point, dtype=float).reshape(system.dim, 1)
    return _batched_jacobian(system, _time(system, t), column)[0]


def classify_stability(
    system: OdeSystem,
    point: Sequence[float],
    t: Optional[float] = None,
    tolerance: float = NEAR_EQUILIBRIUM_TOLERANCE,
    margin: float = STABILITY_MARGIN,
) -> Equilibrium:
    """Classifies the linear stability of a (near-)equilibrium.

    Args:
        system (OdeSystem): The system.
        point (Sequence[float]): The candidate equilibrium.
        t (float, optional): The time. Defaults to the settled time.
        tolerance (float, optional): The largest admissible residual.
        margin (float, optional): The dead band around zero real part.

    Raises:
        NotAnEquilibrium: If the residual exceeds the tolerance.

    Returns:
        Equilibrium: The point with residual and stability class.
    """
    time = _time(system, t)
    state = np.asarray(point, dtype=float).reshape(system.dim)
    residual = system.residual(state, time)
    if not residual <= tolerance:
        raise NotAnEquilibrium(
            "Residual {!r} of {} exceeds {!r}".format(
                residual, tuple(state), tolerance
            )
        )
    parts = np.sort(np.linalg.eigvals(jacobian(system, state, time)).real)
    return Equilibrium(
        point=tuple(float(v) for v in state),
        residual=residual,
        stability=Stability.classify(parts, margin),
        eigen_real_parts=tuple(float(v) for v in parts),
    )


def _check_box(system: OdeSystem, box: Box) -> Tuple[np.ndarray, np.ndarray]:
    bounds = np.asarray(box, dtype=float).reshape(-1, 2)
    if len(bounds) != system.dim:
        raise ParameterError(
            "Box has {} intervals for dimension {}".format(
                len(bounds), system.dim
            )
        )
    lower, upper = bounds[:, 0], bounds[:, 1]
    if not (np.all(np.isfinite(bounds)) and np.all(lower < upper)):
        raise ParameterError("Box bounds must be finite with lo < hi")
    return lower, upper


def sobol_seeds(
    box: Box, n_starts: int, seed: int = 0
) -> np.ndarray:
    """Draws scrambled Sobol points inside a box.

    Args:
        box (Box): Per coordinate (lo, hi).
        n_starts (int): The number of points.
        seed (int, optional): The scrambling seed.

    Returns:
        np.ndarray: The points, shape (n_starts, dim).
    """
    bounds = np.asarray(box, dtype=float).reshape(-1, 2)
    sampler = qmc.Sobol(d=len(bounds), scramble=True, seed=seed)
    exponent = max(0, int(np.ceil(np.log2(n_starts))))
    sample = sampler.random_base2(exponent)[:n_starts]
    return qmc.scale(sample, bounds[:, 0], bounds[:, 1])


def _newton(
    system: OdeSystem, t: float, points: np.ndarray, config: NewtonConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """Batched damped Newton iteration on points (dim, n).

    The step solves J dx = -F with a pseudo-inverse and is halved until the
    squared residual norm decreases.
    """
    x = points.copy()
    f = system.rhs(t, x)
    stalled = np.zeros(x.shape[1], dtype=bool)
    for _ in range(config.max_iter):
        norm = np.max(np.abs(f), axis=0)
        active = np.flatnonzero(
            np.isfinite(norm) & (norm > config.tol) & ~stalled
        )
        if active.size == 0:
            break
        jac = _batched_jacobian(system, t, x[:, active])
        finite = np.all(np.isfinite(jac), axis=(1, 2))
        stalled[active[~finite]] = True
        active, jac = active[finite], jac[finite]
        if active.size == 0:
            break
        xa, fa = x[:, active], f[:, active]
        step = -np.einsum("nij,jn->in", np.linalg.pinv(jac), fa)
        phi = np.sum(fa * fa, axis=0)

        damping = np.ones(active.size)
        pending = np.ones(active.size, dtype=bool)
        for _ in range(config.max_backtrack):
            index = np.flatnonzero(pending)
            trial = xa[:, index] + damping[index] * step[:, index]
            f_trial = system.rhs(t, trial)
            phi_trial = np.sum(f_trial * f_trial, axis=0)
            ok = np.isfinite(phi_trial) & (
                phi_trial <= (1 - 1e-4 * damping[index]) * phi[index]
            )
            x[:, active[index[ok]]] = trial[:, ok]
            f[:, active[index[ok]]] = f_trial[:, ok]
            pending[index[ok]] = False
            damping[index[~ok]] *= 0.5
            if not pending.any():
                break
        stalled[active[pending]] = True
    return x, np.max(np.abs(f), axis=0)


def _merge(
    candidates: List[Tuple[np.ndarray, float]], tolerance: float
) -> List[np.ndarray]:
    kept: List[Tuple[np.ndarray, float]] = []
    for point, residual in sorted(candidates, key=lambda item: item[1]):
        scale = max(1.0, float(np.max(np.abs(point))))
        if not any(
            np.max(np.abs(point - other)) <= tolerance * scale
            for other, _ in kept
        ):
            kept.append((point, residual))
    return sorted((p for p, _ in kept), key=lambda p: tuple(p))


def find_equilibria(
    system: OdeSystem,
    box: Box,
    n_starts: int,
    config: Optional[NewtonConfig] = None,
    t: Optional[float] = None,
    seeds: Optional[np.ndarray] = None,
) -> List[Equilibrium]:
    """Finds the equilibria of a system inside a box.

    Args:
        system (OdeSystem): The system.
        box (Box): Per coordinate (lo, hi).
        n_starts (int): The number of Sobol seeds.
        config (NewtonConfig, optional): Iteration settings.
        t (float, optional): The time at which the right-hand side is frozen.
            Defaults to the settled time of the system.
        seeds (np.ndarray, optional): Additional start points (k, dim), e.g.
            the equilibria of a neighbouring parameter value.

    Raises:
        ParameterError: If the box or n_starts is invalid.

    Returns:
        List[Equilibrium]: The distinct equilibria, sorted lexicographically.
    """
    config = config or NewtonConfig()
    lower, upper = _check_box(system, box)
    if n_starts < 1:
        raise ParameterError("n_starts must be >= 1")
    time = _time(system, t)

    starts = sobol_seeds(box, n_starts, config.seed)
    if seeds is not None and len(seeds) > 0:
        starts = np.vstack([np.asarray(seeds, dtype=float), starts])
    points, residuals = _newton(system, time, starts.T, config)

    slack = 1e-9 * np.maximum(1.0, np.abs(upper - lower))
    inside = np.all(
        (points >= (lower - slack)[:, None])
        & (points <= (upper + slack)[:, None]),
        axis=0,
    )
    converged = inside & (residuals <= config.accept)
    candidates = [
        (points[:, i], float(residuals[i])) for i in np.flatnonzero(converged)
    ]
    merged = _merge(candidates, config.dedup)
    _logger.debug(
        "%s: %d seeds, %d converged, %d distinct",
        system.label,
        starts.shape[0],
        len(candidates),
        len(merged),
    )
    return [
        classify_stability(system, point, time, tolerance=config.accept)
        for point in merged
    ]


def grid_equilibrium_cells(
    system: OdeSystem,
    box: Box,
    resolution: int = 200,
    t: Optional[float] = None,
) -> np.ndarray:
    """Locates equilibria of a planar system by a nullcline sign scan.

    The box is divided into resolution x resolution cells. A cell is marked
    when both components of the right-hand side change sign over its four
    corners. Touching marked cells are clustered; each cluster is reported
    by its mean cell centre.

    Args:
        system (OdeSystem): A system of dimension 2.
        box (Box): Per coordinate (lo, hi).
        resolution (int, optional): The number of cells per axis.
        t (float, optional): The time. Defaults to the settled time.

    Raises:
        ParameterError: If the system is not planar.

    Returns:
        np.ndarray: The cluster centres, shape (k, 2), sorted
            lexicographically.
    """
    if system.dim != 2:
        raise ParameterError("The grid scan needs a planar system")
    lower, upper = _check_box(system, box)
    xs = np.linspace(lower[0], upper[0], resolution + 1)
    ys = np.linspace(lower[1], upper[1], resolution + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    values = system.rhs(_time(system, t), np.stack([gx.ravel(), gy.ravel()]))
    values = values.reshape(2, resolution + 1, resolution + 1)

    marked = np.ones((resolution, resolution), dtype=bool)
    for component in values:
        corners = np.stack(
            [
                component[:-1, :-1],
                component[1:, :-1],
                component[:-1, 1:],
                component[1:, 1:],
            ]
        )
        marked &= (corners.min(axis=0) <= 0) & (corners.max(axis=0) >= 0)

    labels, count = ndimage.label(marked, structure=np.ones((3, 3)))
    centres_x = 0.5 * (xs[:-1] + xs[1:])
    centres_y = 0.5 * (ys[:-1] + ys[1:])
    clusters = []
    for label in range(1, count + 1):
        rows, cols = np.nonzero(labels == label)
        clusters.append(
            (float(centres_x[rows].mean()), float(centres_y[cols].mean()))
        )
    return np.array(sorted(clusters), dtype=float).reshape(-1, 2)
