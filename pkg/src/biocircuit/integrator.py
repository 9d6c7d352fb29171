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
""" Adaptive explicit integration of OdeSystem values.

    The integrator is the embedded Dormand-Prince 5(4) pair with first same
    as last stage reuse and a proportional-integral step size controller.
    Integration is split at the breakpoints of the system: no step crosses a
    switch of a driving input, stages at the end of a segment see the left
    limit of the inputs, and the first stage of the next segment sees the
    right limit.
"""

import logging
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from .equilibrium import classify_stability
from .error import (
    IntegrationError,
    NoConvergence,
    NonFiniteState,
    ParameterError,
    StepSizeUnderflow,
)
from .protocol import NEAR_EQUILIBRIUM_TOLERANCE
from .system import Equilibrium, IntegratorConfig, OdeSystem, Trajectory

_logger = logging.getLogger(__name__)

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    np.zeros(0),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array(
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]
    ),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
)
# fifth order weights minus embedded fourth order weights
_E = np.array(
    [
        71 / 57600,
        0.0,
        -71 / 16695,
        71 / 1920,
        -17253 / 339200,
        22 / 525,
        -1 / 40,
    ]
)

_BETA = 0.04
_EXPONENT = 0.2 - 0.75 * _BETA
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_SNAP = 1e-10

Step = Tuple[float, np.ndarray, np.ndarray]


def _derivative(system: OdeSystem, t: float, x: np.ndarray) -> np.ndarray:
    value = system.rhs(t, x)
    if not np.all(np.isfinite(value)):
        raise NonFiniteState(
            "Right-hand side is not finite at t = {!r}".format(t)
        )
    return value


def _rms(values: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(values))))


def _initial_step(
    system: OdeSystem,
    t0: float,
    x0: np.ndarray,
    f0: np.ndarray,
    config: IntegratorConfig,
    limit: float,
) -> float:
    scale = config.atol + config.rtol * np.abs(x0)
    d0 = _rms(x0 / scale)
    d1 = _rms(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = system.rhs(min(t0 + h0, limit), x0 + h0 * f0)
    d2 = _rms((f1 - f0) / scale) / h0
    if not np.isfinite(d2):
        return h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, config.h_max)


def _dormand_prince_step(
    system: OdeSystem,
    t: float,
    x: np.ndarray,
    f: np.ndarray,
    h: float,
    limit: float,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    stages = np.empty((7, x.size))
    stages[0] = f
    state = x
    for i in range(1, 7):
        state = x + h * (_A[i] @ stages[:i])
        stages[i] = system.rhs(min(t + _C[i] * h, limit), state)
    return state, stages[6], h * (_E @ stages)


def _march(
    system: OdeSystem,
    x0: np.ndarray,
    t0: float,
    t1: float,
    config: IntegratorConfig,
    stops: Iterable[float] = (),
) -> Iterator[Step]:
    """Yields (t, x, f) after every accepted step.

    The integration lands exactly on every breakpoint of the system inside
    (t0, t1), on every additional stop time and on t1.
    """
    switches = {b for b in system.breakpoints if t0 < b < t1}
    marks = sorted(switches | {s for s in stops if t0 < s < t1} | {t1})

    t, x = t0, x0
    f = _derivative(system, t, x)
    first_limit = (
        np.nextafter(marks[0], -np.inf) if marks[0] in switches else np.inf
    )
    h = config.h_init or _initial_step(system, t, x, f, config, first_limit)
    factor_old = 1e-4
    rejected = False
    steps = accepted = 0

    for mark in marks:
        limit = np.nextafter(mark, -np.inf) if mark in switches else np.inf
        while t < mark:
            if steps >= config.max_steps:
                raise IntegrationError(
                    "Step budget of {} exhausted at t = {!r}".format(
                        config.max_steps, t
                    )
                )
            h = min(h, config.h_max)
            if h < config.h_min:
                raise StepSizeUnderflow(
                    "Step size {!r} below minimum at t = {!r}".format(h, t)
                )
            landing = mark - (t + h) < _SNAP * h
            h_step = mark - t if landing else h
            steps += 1

            x_new, f_new, error = _dormand_prince_step(
                system, t, x, f, h_step, limit
            )
            scale = config.atol + config.rtol * np.maximum(
                np.abs(x), np.abs(x_new)
            )
            err = _rms(error / scale)
            if not (np.isfinite(err) and np.all(np.isfinite(f_new))):
                h = h_step * _MIN_FACTOR
                rejected = True
                if h < config.h_min:
                    raise NonFiniteState(
                        "State became non-finite near t = {!r}".format(t)
                    )
                continue

            fac11 = err ** _EXPONENT
            if err <= 1.0:
                fac = fac11 / factor_old ** _BETA
                fac = max(1 / _MAX_FACTOR, min(1 / _MIN_FACTOR, fac / _SAFETY))
                h_next = h_step / fac
                if rejected:
                    h_next = min(h_next, h_step)
                factor_old = max(err, 1e-4)
                rejected = False
                accepted += 1
                t = mark if landing else t + h_step
                x, f = x_new, f_new
                h = max(h_next, h) if landing else h_next
                yield t, x, f
            else:
                h = h_step / min(1 / _MIN_FACTOR, fac11 / _SAFETY)
                rejected = True

        if mark in switches:
            f = _derivative(system, t, x)

    _logger.debug(
        "%s: %d steps, %d accepted, t = %r", system.label, steps, accepted, t
    )


def _initial_state(system: OdeSystem, x0: Sequence[float]) -> np.ndarray:
    state = np.array(x0, dtype=float).reshape(-1)
    if state.size != system.dim:
        raise ParameterError(
            "Initial state has {} entries, system '{}' has "
            "dimension {}".format(
                state.size, system.label, system.dim
            )
        )
    if not np.all(np.isfinite(state)):
        raise ParameterError("Initial state must be finite")
    return state


def integrate(
    system: OdeSystem,
    x0: Sequence[float],
    t_span: Tuple[float, float],
    config: Optional[IntegratorConfig] = None,
    t_eval: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Integrates a system over a time span.

    Args:
        system (OdeSystem): The system to integrate.
        x0 (Sequence[float]): The initial state.
        t_span (Tuple[float, float]): The start and end time.
        config (IntegratorConfig, optional): Tolerances and step bounds.
        t_eval (Sequence[float], optional): Output times. The integrator lands
            exactly on each of them; t0 and t1 are always part of the output.
            Defaults to every accepted step.

    Raises:
        ParameterError: If the initial state or the time span is invalid.
        StepSizeUnderflow: If the step size dropped below h_min.
        NonFiniteState: If the state became infinite or NaN.

    Returns:
        Trajectory: The trajectory ending at t1.
    """
    config = config or IntegratorConfig()
    state = _initial_state(system, x0)
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (np.isfinite(t0) and np.isfinite(t1) and t1 > t0):
        raise ParameterError("Time span must satisfy t0 < t1")

    times, states = [t0], [state]
    if t_eval is None:
        for t, x, _ in _march(system, state, t0, t1, config):
            times.append(t)
            states.append(x)
    else:
        grid = {float(s) for s in t_eval if t0 < s <= t1} | {t1}
        for t, x, _ in _march(system, state, t0, t1, config, stops=grid):
            if t in grid:
                times.append(t)
                states.append(x)
    return Trajectory(times, np.array(states), system.names)


def simulate_to_steady_state(
    system: OdeSystem,
    x0: Sequence[float],
    config: Optional[IntegratorConfig] = None,
    t0: float = 0.0,
) -> Tuple[Equilibrium, Trajectory]:
    """Integrates until the right-hand side stays below ss_tol.

    The criterion counts consecutive accepted steps with an infinity norm of
    the right-hand side below ss_tol. It is only armed after the last
    breakpoint of the system.

    Args:
        system (OdeSystem): The system to integrate.
        x0 (Sequence[float]): The initial state.
        config (IntegratorConfig, optional): Tolerances and criterion.
        t0 (float, optional): The start time. Defaults to 0.

    Raises:
        NoConvergence: If t0 + t_max is reached first. The error carries the
            trajectory computed so far.

    Returns:
        Tuple[Equilibrium, Trajectory]: The terminal equilibrium with its
            stability and the trajectory leading to it.
    """
    config = config or IntegratorConfig()
    state = _initial_state(system, x0)
    armed_after = max(system.breakpoints, default=-np.inf)

    times, states = [t0], [state]
    below = 0
    t_end = t0
    for t, x, f in _march(system, state, t0, t0 + config.t_max, config):
        times.append(t)
        states.append(x)
        t_end = t
        if t > armed_after and np.max(np.abs(f)) < config.ss_tol:
            below += 1
            if below >= config.ss_window:
                break
        else:
            below = 0

    trajectory = Trajectory(times, np.array(states), system.names)
    if below < config.ss_window:
        raise NoConvergence(
            "No steady state of '{}' within t_max = {!r}".format(
                system.label, config.t_max
            ),
            trajectory,
        )
    equilibrium = classify_stability(
        system,
        trajectory.final_state,
        t=t_end,
        tolerance=max(NEAR_EQUILIBRIUM_TOLERANCE, config.ss_tol),
    )
    return equilibrium, trajectory
