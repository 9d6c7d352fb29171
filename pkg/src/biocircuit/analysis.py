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
""" Higher-order analyses over catalog models: bifurcation sweeps,
    disturbance adaptation curves, hidden-integral diagnostics and
    copy-number ensembles.

    Grid points and samples are evaluated in index order, so every result is
    a deterministic function of its inputs and seed.
"""

from dataclasses import dataclass, replace
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .catalog import ModelSpec
from .equilibrium import Box, NewtonConfig, find_equilibria
from .error import (
    BiocircuitError,
    GridTooCoarse,
    NoConvergence,
    ParameterError,
)
from .ffwd import FfwdParams, Variant
from .integrator import integrate, simulate_to_steady_state
from .schedule import DisturbanceInputs, Signal
from .system import Equilibrium, IntegratorConfig, OdeSystem, Trajectory

_logger = logging.getLogger(__name__)

CHANNELS = ("d", "d1", "d2", "H")
HISTOGRAM_BINS = 32


@dataclass(frozen=True)
class BifurcationEvent:
    """A grid interval over which the number of stable equilibria
    changes."""

    lower: float
    upper: float
    stable_before: int
    stable_after: int


@dataclass(frozen=True)
class BifurcationDiagram:
    """Equilibria over a swept parameter.

    branches[k] holds the equilibria at grid[k], labels[k] the branch label
    of each of them after nearest-neighbour matching.
    """

    param_name: str
    grid: Tuple[float, ...]
    branches: Tuple[Tuple[Equilibrium, ...], ...]
    labels: Tuple[Tuple[int, ...], ...]
    events: Tuple[BifurcationEvent, ...]

    def stable_counts(self) -> Tuple[int, ...]:
        """The number of stable equilibria per grid point."""
        return tuple(
            sum(1 for e in point if e.is_stable) for point in self.branches
        )

    def branch(self, label: int) -> List[Tuple[float, Equilibrium]]:
        """The (grid value, equilibrium) pairs of one matched branch."""
        return [
            (value, equilibrium)
            for value, point, labels in zip(
                self.grid, self.branches, self.labels
            )
            for equilibrium, other in zip(point, labels)
            if other == label
        ]

    @property
    def branch_labels(self) -> Tuple[int, ...]:
        """All branch labels in order of appearance."""
        seen: List[int] = []
        for labels in self.labels:
            seen.extend(label for label in labels if label not in seen)
        return tuple(seen)


def _check_grid(grid: Sequence[float]) -> Tuple[float, ...]:
    values = tuple(float(v) for v in grid)
    if len(values) == 0 or np.any(np.diff(values) <= 0):
        raise ParameterError("The grid must be nonempty and increasing")
    return values


def _match(
    previous: Sequence[Equilibrium],
    previous_labels: Sequence[int],
    current: Sequence[Equilibrium],
    next_label: int,
) -> Tuple[Tuple[int, ...], int]:
    """Nearest-neighbour matching of equilibria of adjacent grid points."""
    pairs = sorted(
        (
            float(np.max(np.abs(a.as_array() - b.as_array()))),
            i,
            j,
        )
        for i, a in enumerate(current)
        for j, b in enumerate(previous)
    )
    labels: List[Optional[int]] = [None] * len(current)
    taken = set()
    for _, i, j in pairs:
        if labels[i] is None and j not in taken:
            labels[i] = previous_labels[j]
            taken.add(j)
    for i, label in enumerate(labels):
        if label is None:
            labels[i] = next_label
            next_label += 1
    return tuple(labels), next_label


def sweep_equilibria(
    build: Callable[[float], OdeSystem],
    param_name: str,
    grid: Sequence[float],
    box: Callable[[float], Box],
    n_starts: int,
    config: Optional[NewtonConfig] = None,
) -> BifurcationDiagram:
    """Sweeps the equilibria of a parameterised system.

    The equilibria of each grid point seed the search at the next one in
    addition to n_starts fresh Sobol seeds.

    Args:
        build (Callable[[float], OdeSystem]): Builds the system at a value.
        param_name (str): The label of the parameter.
        grid (Sequence[float]): Increasing parameter values.
        box (Callable[[float], Box]): The search box at a value.
        n_starts (int): Fresh seeds per grid point.
        config (NewtonConfig, optional): Newton settings.

    Raises:
        BiocircuitError: If no equilibrium is found at a grid point.

    Returns:
        BifurcationDiagram: The diagram.
    """
    values = _check_grid(grid)
    branches: List[Tuple[Equilibrium, ...]] = []
    labels: List[Tuple[int, ...]] = []
    events: List[BifurcationEvent] = []
    next_label = 0
    seeds = None
    for index, value in enumerate(values):
        system = build(value)
        found = tuple(
            find_equilibria(
                system, box(value), n_starts, config, seeds=seeds
            )
        )
        if not found:
            raise BiocircuitError(
                "No equilibrium at {} = {!r}".format(param_name, value)
            )
        if index == 0:
            current = tuple(range(len(found)))
            next_label = len(found)
        else:
            current, next_label = _match(
                branches[-1], labels[-1], found, next_label
            )
            before = sum(1 for e in branches[-1] if e.is_stable)
            after = sum(1 for e in found if e.is_stable)
            if before != after:
                events.append(
                    BifurcationEvent(values[index - 1], value, before, after)
                )
        _logger.debug(
            "%s = %r: %d equilibria, %d stable",
            param_name,
            value,
            len(found),
            sum(1 for e in found if e.is_stable),
        )
        branches.append(found)
        labels.append(current)
        seeds = np.array([e.point for e in found])
    return BifurcationDiagram(
        param_name, values, tuple(branches), tuple(labels), tuple(events)
    )


def bifurcation_sweep(
    spec: ModelSpec,
    param_name: str,
    grid: Sequence[float],
    box: Optional[Box] = None,
    n_starts: Optional[int] = None,
    config: Optional[NewtonConfig] = None,
) -> BifurcationDiagram:
    """Sweeps the equilibria of a catalog model over one parameter.

    Args:
        spec (ModelSpec): The model.
        param_name (str): A parameter of the model.
        grid (Sequence[float]): Increasing parameter values.
        box (Box, optional): A fixed search box. Defaults to the family's box
            at each grid value.
        n_starts (int, optional): Fresh seeds per grid point. Defaults to
            the family's setting.
        config (NewtonConfig, optional): Newton settings.

    Raises:
        ParameterError: If param_name is not a parameter of the model.

    Returns:
        BifurcationDiagram: The diagram.
    """
    if param_name not in spec.values:
        raise ParameterError(
            "'{}' is not a parameter of '{}'".format(param_name, spec.name)
        )

    def at(value: float) -> ModelSpec:
        return spec.with_values(**{param_name: value})

    def search_box(value: float) -> Box:
        if box is not None:
            return box
        return spec.family.box(at(value))

    return sweep_equilibria(
        lambda value: at(value).system(),
        param_name,
        grid,
        search_box,
        n_starts or spec.family.n_starts(spec),
        config,
    )


@dataclass(frozen=True)
class AdaptationCurve:
    """Steady outputs over a grid of constant disturbance values."""

    channel: str
    disturbance_grid: Tuple[float, ...]
    outputs: Tuple[float, ...]
    rejection_index: float


def _nominal(channel: str) -> float:
    return 0.0 if channel == "H" else 1.0


def apply_channel(
    spec: ModelSpec,
    channel: str,
    value: float,
    base: Optional[DisturbanceInputs] = None,
) -> Tuple[ModelSpec, DisturbanceInputs]:
    """Sets one disturbance channel to a constant value.

    The other channels keep their values from base, which defaults to the
    nominal inputs.

    The copy-number channel d is the transcriptional disturbance d1 for most
    families and the parameter d (relative to its reference value) for the
    reprogramming construct.

    Raises:
        ParameterError: If the channel is unknown.
    """
    if channel not in CHANNELS:
        raise ParameterError(
            "Unknown channel '{}', expected one of {}".format(
                channel, ", ".join(CHANNELS)
            )
        )
    if base is None:
        base = DisturbanceInputs()
    if channel == "d":
        channel = spec.family.COPY_NUMBER
        if channel in spec.values:
            return (
                spec.with_values(**{channel: spec.values[channel] * value}),
                base,
            )
    if channel == "H":
        return spec, replace(base, H_GRN=value)
    return spec, replace(base, **{channel: value})


def _closed_form(spec: ModelSpec, dist: DisturbanceInputs) -> Optional[float]:
    h_grn, r, d1, d2, decay = dist.at(0.0)
    if dist.breakpoints or decay != 1.0:
        return None
    return spec.family.steady_output(spec, h_grn, r, d1, d2)


def _settled_output(
    spec: ModelSpec,
    dist: DisturbanceInputs,
    config: Optional[IntegratorConfig],
) -> float:
    system = spec.system(dist)
    equilibrium, _ = simulate_to_steady_state(
        system, spec.family.initial_state(spec), config
    )
    return equilibrium.point[system.output]


def steady_output(
    spec: ModelSpec,
    channel: str,
    value: float,
    config: Optional[IntegratorConfig] = None,
    base: Optional[DisturbanceInputs] = None,
) -> float:
    """The steady output under one constant disturbance, simulated from the
    family's initial state."""
    changed, dist = apply_channel(spec, channel, value, base)
    return _settled_output(changed, dist, config)


def adaptation_curve(
    spec: ModelSpec,
    disturbance_grid: Sequence[float],
    channel: str = "d",
    config: Optional[IntegratorConfig] = None,
) -> AdaptationCurve:
    """Steady outputs over constant disturbance values.

    Args:
        spec (ModelSpec): The model.
        disturbance_grid (Sequence[float]): The values; the nominal value (1,
            or 0 for H) must be part of the grid.
        channel (str, optional): One of d, d1, d2 and H.
        config (IntegratorConfig, optional): Integrator settings.

    Raises:
        ParameterError: If the nominal value is missing.
        NoConvergence: If a grid point does not settle; the message names
            the value.

    Returns:
        AdaptationCurve: The outputs and (max - min) / nominal output.
    """
    grid = tuple(float(v) for v in disturbance_grid)
    nominal = _nominal(channel)
    if nominal not in grid:
        raise ParameterError(
            "The grid must contain the nominal value {!r}".format(nominal)
        )
    outputs = []
    for value in grid:
        try:
            outputs.append(steady_output(spec, channel, value, config))
        except NoConvergence as error:
            raise NoConvergence(
                "No steady state at {} = {!r}: {}".format(
                    channel, value, error
                ),
                error.trajectory,
            ) from error
    reference = outputs[grid.index(nominal)]
    index = (max(outputs) - min(outputs)) / reference
    return AdaptationCurve(channel, grid, tuple(outputs), index)


@dataclass(frozen=True)
class TransientResponse:
    """Output response to a time-varying disturbance."""

    trajectory: Trajectory
    nominal: float
    peak_deviation: float
    final_deviation: float


def transient_response(
    spec: ModelSpec,
    channel: str,
    signal: Signal,
    t_end: float,
    config: Optional[IntegratorConfig] = None,
) -> TransientResponse:
    """Measures the output excursion under a time-varying disturbance.

    Experimental: the response starts at the nominal steady state and the
    deviations are relative to the nominal output. No rejection guarantee
    is derived for time-varying disturbances.

    Args:
        spec (ModelSpec): The model.
        channel (str): One of d1, d2 and H.
        signal (Signal): The disturbance.
        t_end (float): The horizon.
        config (IntegratorConfig, optional): Integrator settings.

    Returns:
        TransientResponse: The trajectory and the relative deviations.
    """
    if channel not in ("d1", "d2", "H"):
        raise ParameterError("Transient channel must be d1, d2 or H")
    _logger.warning("Time-varying disturbance response is experimental")
    nominal_system = spec.system()
    start, _ = simulate_to_steady_state(
        nominal_system, spec.family.initial_state(spec), config
    )
    key = "H_GRN" if channel == "H" else channel
    system = spec.system(DisturbanceInputs(**{key: signal}))
    trajectory = integrate(system, start.point, (0.0, t_end), config)
    nominal = start.point[system.output]
    output = trajectory.states[:, system.output]
    deviation = np.abs(output - nominal) / abs(nominal)
    return TransientResponse(
        trajectory, nominal, float(deviation.max()), float(deviation[-1])
    )


@dataclass(frozen=True)
class HiddenIntegralTrace:
    """The memory variable z = E/q - m/p of the ERN feedforward loop along a
    trajectory, with the residual of its integrator equation."""

    times: np.ndarray
    z: np.ndarray
    dz: np.ndarray
    target: np.ndarray
    residual: np.ndarray
    v_ref: float

    @property
    def max_residual(self) -> float:
        """The largest residual."""
        return float(np.max(self.residual))

    @property
    def relative_residual(self) -> float:
        """The largest residual over the largest |dz/dt|."""
        return self.max_residual / float(np.max(np.abs(self.dz)))


def hidden_v_ref(f: FfwdParams) -> float:
    """The reference gamma_bar alpha delta_bar / (g alpha_bar beta_bar); it
    does not depend on the disturbances."""
    return (
        f.gamma_bar
        * f.alpha
        * f.delta_bar
        / (f.g * f.alpha_bar * f.beta_bar)
    )


def hidden_integral_trace(
    trajectory: Trajectory, f: FfwdParams, d1: float
) -> HiddenIntegralTrace:
    """Evaluates the hidden integral action of the ERN loop.

    With m_E(0) = 0, constant d1 and d2 = 1, z = E/q - m/p with
    q = alpha_bar beta_bar / delta_bar and p = alpha obeys

        dz/dt = (g/alpha) E (m - v_ref) - d1 exp(-delta_bar t)
                + delta m / alpha,

    so for delta = 0 it integrates m - v_ref up to a decaying term. dz/dt is
    taken by second order central differences on the sample grid.

    Args:
        trajectory (Trajectory): A trajectory of the ERN system.
        f (FfwdParams): Its constants.
        d1 (float): The constant transcriptional disturbance.

    Raises:
        ParameterError: If the trajectory does not belong to the ERN variant,
            does not start with m_E = 0 or g vanishes.
        GridTooCoarse: If fewer than three samples are given or adjacent
            samples of a coordinate differ by more than 10% of its range.

    Returns:
        HiddenIntegralTrace: The trace.
    """
    if f.variant is not Variant.ERN or trajectory.names != (
        "m_E",
        "E",
        "m",
        "X",
    ):
        raise ParameterError("The hidden integral needs the ERN variant")
    if f.g == 0:
        raise ParameterError("The hidden integral needs g > 0")
    if trajectory.column("m_E")[0] != 0:
        raise ParameterError("The trajectory must start with m_E = 0")
    if len(trajectory) < 3:
        raise GridTooCoarse("At least three samples are needed")
    states = trajectory.states
    spans = np.ptp(states, axis=0)
    jumps = np.max(np.abs(np.diff(states, axis=0)), axis=0)
    coarse = jumps > 0.1 * spans
    if np.any(coarse):
        raise GridTooCoarse(
            "Samples of {} jump by more than 10% of their range".format(
                ", ".join(np.array(trajectory.names)[coarse])
            )
        )

    times = trajectory.times
    ern, m = trajectory.column("E"), trajectory.column("m")
    q = f.alpha_bar * f.beta_bar / f.delta_bar
    z = ern / q - m / f.alpha
    dz = np.gradient(z, times, edge_order=2)
    v_ref = hidden_v_ref(f)
    target = (
        (f.g / f.alpha) * ern * (m - v_ref)
        - d1 * np.exp(-f.delta_bar * (times - times[0]))
        + f.delta * m / f.alpha
    )
    return HiddenIntegralTrace(
        times, z, dz, target, np.abs(dz - target), v_ref
    )


@dataclass(frozen=True)
class EnsembleSummary:
    """Steady outputs over log-normally sampled copy numbers."""

    param_name: str
    sigma: float
    n: int
    seed: int
    outputs: np.ndarray
    mean: float
    cv: float
    bin_edges: np.ndarray
    counts: np.ndarray


def ensemble_run(
    spec: ModelSpec,
    param_name: str,
    sigma: float,
    n: int,
    seed: int,
    config: Optional[IntegratorConfig] = None,
    base: Optional[DisturbanceInputs] = None,
) -> EnsembleSummary:
    """Samples a parameter or channel log-normally and summarises the
    steady outputs.

    Each sample multiplies the nominal value by exp(sigma Z), Z standard
    normal, drawn from a Philox counter-based generator seeded with seed.
    Outputs come from the family's closed form when there is one and from
    simulation otherwise.

    Args:
        spec (ModelSpec): The model.
        param_name (str): A parameter of the model or one of d, d1 and d2.
        sigma (float): The log-normal shape.
        n (int): The number of samples.
        seed (int): The generator seed.
        config (IntegratorConfig, optional): Integrator settings.
        base (DisturbanceInputs, optional): The inputs every sample runs
            under, e.g. a constant H_GRN. Defaults to the nominal inputs.

    Raises:
        ParameterError: If n < 2, sigma <= 0 or the name is unknown.

    Returns:
        EnsembleSummary: Outputs, mean, coefficient of variation and a
            32 bin histogram over [min, max].
    """
    if n < 2:
        raise ParameterError("An ensemble needs n >= 2")
    if not sigma > 0:
        raise ParameterError("sigma must be positive")
    is_channel = param_name in ("d", "d1", "d2")
    if not is_channel and param_name not in spec.values:
        raise ParameterError(
            "'{}' is neither a parameter of '{}' nor a copy-number "
            "channel".format(param_name, spec.name)
        )
    if base is None:
        base = DisturbanceInputs()
    generator = np.random.Generator(np.random.Philox(seed))
    factors = generator.lognormal(mean=0.0, sigma=sigma, size=n)

    outputs = np.empty(n)
    for index, factor in enumerate(factors):
        if is_channel:
            sample, dist = apply_channel(spec, param_name, factor, base)
        else:
            sample = spec.with_values(
                **{param_name: spec.values[param_name] * factor}
            )
            dist = base
        output = _closed_form(sample, dist)
        if output is None:
            output = _settled_output(sample, dist, config)
        outputs[index] = output

    mean = float(np.mean(outputs))
    counts, edges = np.histogram(
        outputs, bins=HISTOGRAM_BINS, range=(outputs.min(), outputs.max())
    )
    _logger.debug("ensemble of %d samples, seed %d", n, seed)
    return EnsembleSummary(
        param_name=param_name,
        sigma=float(sigma),
        n=n,
        seed=seed,
        outputs=outputs,
        mean=mean,
        cv=float(np.std(outputs) / abs(mean)),
        bin_edges=edges,
        counts=counts,
    )
