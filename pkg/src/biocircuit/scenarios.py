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
""" The catalog of scenarios. Every scenario reads its defaults from the
    ``scenario.<id>`` section of the reference constants and decides the
    checks it declares.
"""

from dataclasses import dataclass
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Type

import numpy as np

from .analysis import (
    adaptation_curve,
    bifurcation_sweep,
    ensemble_run,
    hidden_integral_trace,
    steady_output,
)
from .catalog import ModelSpec, family
from .emit import CsvTable, PlotStyle, Series
from .equilibrium import find_equilibria, grid_equilibrium_cells
from .error import BiocircuitError, ParameterError, ScenarioError
from .grn import Control, build_grn, highgain_envelope
from .integrator import integrate, simulate_to_steady_state
from .qic import calibrate_open_loop
from .repro import (
    ReproSteadyState,
    build_repro,
    repro_initial_state,
    repro_limits,
    repro_steady_state,
    residual_bounds,
)
from .scenario import Scenario, ScenarioContext
from .schedule import DisturbanceInputs, Schedule
from .system import Equilibrium, IntegratorConfig

_logger = logging.getLogger(__name__)

GRID_RESOLUTION = 200
_PRECISE = IntegratorConfig(rtol=1e-10, atol=1e-12)


def _time_grid(t_end: float, dt: float) -> np.ndarray:
    if not (t_end > 0 and dt > 0):
        raise ParameterError("t_end and dt must be positive")
    return np.linspace(0.0, t_end, int(round(t_end / dt)) + 1)


def _g(value: float) -> str:
    return "{:.6g}".format(value)


def _spread(outputs: Sequence[float], reference: float) -> float:
    return (max(outputs) - min(outputs)) / reference


class QicStep(Scenario):
    """Quasi-integral feedback: epsilon scan and a copy-number step."""

    ID = "qic_step"
    DESCRIPTION = "QIC closed loop vs level-matched open loop under d1 steps"
    FIGURE = "step response of the output under a copy-number step"
    CHECKS = ("epsilon_scaling", "disturbance_rejection")
    TABLES = ("epsilon_scaling", "step_response")
    FIGURES = ("step_response",)

    def run(self, context: ScenarioContext) -> None:
        p = context.parameters
        qic = family("qic").defaults()
        gain = qic.values["k1"] / qic.values["k2"]
        spec = qic.with_values(k1=gain * p["k2"], k2=p["k2"])
        with context.step("epsilon scan", "epsilon_scaling"):
            self.__epsilon_scan(context, spec)
        with context.step("step response", "disturbance_rejection"):
            self.__step_response(context, spec)

    @staticmethod
    def __epsilon_scan(context: ScenarioContext, spec: ModelSpec) -> None:
        rows = []
        gain = spec.values["k1"] / spec.values["k2"]
        for factor in (0.1, 1.0, 10.0):
            k2 = spec.values["k2"] * factor
            scanned = spec.with_values(k1=gain * k2, k2=k2)
            q, _ = scanned.params()
            y = steady_output(scanned, "d1", 1.0)
            rows.append((k2, q.epsilon, y, abs(y - q.gain * q.v)))
        context.table(
            "epsilon_scaling", CsvTable(("k2", "epsilon", "y", "error"), rows)
        )
        errors = [row[3] for row in rows]
        ratios = (errors[0] / errors[1], errors[1] / errors[2])
        context.check(
            "epsilon_scaling",
            all(5.0 <= ratio <= 20.0 for ratio in ratios),
            "steady error shrinks by {} and {} per decade of epsilon, "
            "expected within [5, 20]".format(_g(ratios[0]), _g(ratios[1])),
        )

    def __step_response(
        self, context: ScenarioContext, spec: ModelSpec
    ) -> None:
        p = context.parameters
        q, plant = spec.params()
        open_loop = spec.with_options(loop="open").with_values(
            w_open=calibrate_open_loop(q, plant).w_open
        )
        grid = _time_grid(p["t_end"], p["t_end"] / 400.0)
        columns: List[Tuple[str, np.ndarray]] = [("t", grid)]
        deviations: Dict[str, float] = {}
        for loop, model in (("closed", spec), ("open", open_loop)):
            nominal, _ = simulate_to_steady_state(
                model.system(), model.family.initial_state(model)
            )
            y_nominal = nominal.point[model.system().output]
            for level in ("low", "high"):
                d1 = p["d1_" + level]
                step = Schedule([(0.0, 1.0), (p["t_step"], d1)])
                system = model.system(DisturbanceInputs(d1=step))
                trajectory = integrate(
                    system, nominal.point, (0.0, p["t_end"]), t_eval=grid
                )
                columns.append(
                    (
                        "{}_{}".format(loop, level),
                        trajectory.states[:, system.output],
                    )
                )
                settled = steady_output(model, "d1", d1)
                deviations[loop + "_" + level] = (
                    abs(settled - y_nominal) / y_nominal
                )
        table = CsvTable.from_columns(columns)
        context.table("step_response", table)
        context.figure(
            "step_response",
            [Series(name, grid, values) for name, values in columns[1:]],
            PlotStyle("QIC response to d1 steps", "t", "X"),
        )
        limit = 5.0 * q.epsilon
        closed, opened = deviations["closed_low"], deviations["open_low"]
        context.check(
            "disturbance_rejection",
            closed <= limit and opened >= 0.25,
            "steady deviation after d1 -> {}: closed loop {} (limit {}), "
            "open loop {} (at least 0.25)".format(
                _g(p["d1_low"]), _g(closed), _g(limit), _g(opened)
            ),
        )


class FfwdResourceTitration(Scenario):
    """Feedforward compensation of transcriptional resource loss."""

    ID = "ffwd_resource_titration"
    DESCRIPTION = "ERN feedforward: perfect adaptation, theta and titration"
    FIGURE = "output against activator titration and copy number"
    CHECKS = ("perfect_adaptation", "theta_attenuation", "titration")
    TABLES = ("adaptation", "attenuation", "titration")
    FIGURES = ("attenuation", "titration")
    ADAPTATION_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)
    ATTENUATION_GRID = tuple(np.linspace(0.5, 2.0, 7).tolist())
    THETAS = (1, 10, 100)
    ACTIVATORS = (0.0, 1.0, 2.0, 4.0, 8.0)

    def run(self, context: ScenarioContext) -> None:
        ffwd = family("ffwd").defaults()
        with context.step("perfect adaptation", "perfect_adaptation"):
            self.__adaptation(context, ffwd)
        with context.step("theta attenuation", "theta_attenuation"):
            self.__attenuation(context, ffwd)
        with context.step("titration", "titration"):
            self.__titration(context, ffwd)

    def __adaptation(self, context: ScenarioContext, ffwd: ModelSpec) -> None:
        spec = ffwd.with_values(delta=0.0)
        grid = self.ADAPTATION_GRID
        closed = [spec.family.steady_output(spec, d1=d) for d in grid]
        simulated = adaptation_curve(spec, grid, "d")
        context.table(
            "adaptation",
            CsvTable.from_columns(
                [
                    ("d", grid),
                    ("closed_form", closed),
                    ("simulated", simulated.outputs),
                ]
            ),
        )
        index = _spread(closed, closed[grid.index(1.0)])
        context.check(
            "perfect_adaptation",
            index <= 1e-12 and simulated.rejection_index <= 1e-6,
            "relative spread of X over d: closed form {}, simulated "
            "{}".format(_g(index), _g(simulated.rejection_index)),
        )

    def __attenuation(self, context: ScenarioContext, ffwd: ModelSpec) -> None:
        base = ffwd.with_values(delta=1.0)
        theta = base.params().theta
        grid = self.ATTENUATION_GRID
        nominal = grid.index(1.0)
        columns = [("d", grid)]
        spreads = []
        for target in self.THETAS:
            spec = base.with_values(g=base.values["g"] * target / theta)
            outputs = [spec.family.steady_output(spec, d1=d) for d in grid]
            spreads.append(_spread(outputs, outputs[nominal]))
            columns.append(
                (
                    "theta_{}".format(target),
                    [y / outputs[nominal] for y in outputs],
                )
            )
        context.table("attenuation", CsvTable.from_columns(columns))
        context.figure(
            "attenuation",
            [Series(name, grid, values) for name, values in columns[1:]],
            PlotStyle("Normalised output over copy number", "d", "X / X(1)"),
        )
        decreasing = all(a > b for a, b in zip(spreads, spreads[1:]))
        context.check(
            "theta_attenuation",
            decreasing and spreads[-1] <= 0.02,
            "normalised spread over d in [0.5, 2] for theta {}: {}".format(
                ", ".join(str(t) for t in self.THETAS),
                ", ".join(_g(s) for s in spreads),
            ),
        )

    def __titration(self, context: ScenarioContext, ffwd: ModelSpec) -> None:
        p = context.parameters
        unregulated = ffwd.with_values(delta=1.0, g=0.0)
        regulated = ffwd.with_values(delta=1.0, g=p["g"])
        scale = unregulated.family.steady_output(
            unregulated
        ) / regulated.family.steady_output(regulated)
        regulated = regulated.with_values(
            beta=regulated.values["beta"] * scale
        )
        rows = []
        for activator in self.ACTIVATORS:
            d1 = 1.0 / (1.0 + activator / p["K_A"])
            rows.append(
                (
                    activator,
                    d1,
                    regulated.family.steady_output(regulated, d1=d1),
                    unregulated.family.steady_output(unregulated, d1=d1),
                )
            )
        table = CsvTable(("a", "d1", "regulated", "unregulated"), rows)
        context.table("titration", table)
        data = table.data
        context.figure(
            "titration",
            [
                Series("regulated", data[:, 0], data[:, 2]),
                Series("unregulated", data[:, 0], data[:, 3]),
            ],
            PlotStyle("Activator titration", "A", "X"),
        )
        regulated_change = float(
            np.max(np.abs(data[:, 2] - data[0, 2])) / data[0, 2]
        )
        unregulated_drop = float(1.0 - data[-1, 3] / data[0, 3])
        context.check(
            "titration",
            regulated_change <= 0.1 and unregulated_drop >= 0.8,
            "regulated output changes by at most {} (limit 0.1), "
            "unregulated output drops by {} at A = {} (at least "
            "0.8)".format(
                _g(regulated_change),
                _g(unregulated_drop),
                _g(self.ACTIVATORS[-1]),
            ),
        )


class FfwdCopyNumber(Scenario):
    """Copy-number ensembles with and without feedforward compensation."""

    ID = "ffwd_copy_number"
    DESCRIPTION = "log-normal copy-number ensemble, regulated vs unregulated"
    FIGURE = "output distributions over a transfected population"
    CHECKS = ("dosage_compensation",)
    TABLES = ("histogram_regulated", "histogram_unregulated")
    FIGURES = ("histograms",)

    def run(self, context: ScenarioContext) -> None:
        p = context.parameters
        with context.step("ensembles", "dosage_compensation"):
            ffwd = family("ffwd").defaults().with_values(delta=1.0)
            arms = (
                ("regulated", ffwd.with_values(g=p["g"])),
                ("unregulated", ffwd.with_values(g=0.0)),
            )
            summaries = {}
            series = []
            for name, spec in arms:
                summary = ensemble_run(
                    spec, "d", p["sigma"], int(p["n"]), context.seed
                )
                summaries[name] = summary
                edges = summary.bin_edges
                context.table(
                    "histogram_" + name,
                    CsvTable.from_columns(
                        [
                            ("bin_lo", edges[:-1]),
                            ("bin_hi", edges[1:]),
                            ("count", summary.counts),
                        ]
                    ),
                )
                series.append(
                    Series(
                        name,
                        0.5 * (edges[:-1] + edges[1:]) / summary.mean,
                        summary.counts / summary.n,
                    )
                )
            context.figure(
                "histograms",
                series,
                PlotStyle("Copy-number ensembles", "X / mean", "fraction"),
            )
            repeat = ensemble_run(
                arms[0][1], "d", p["sigma"], int(p["n"]), context.seed
            )
            identical = np.array_equal(
                repeat.outputs, summaries["regulated"].outputs
            )
            cv_reg = summaries["regulated"].cv
            cv_unreg = summaries["unregulated"].cv
            context.check(
                "dosage_compensation",
                cv_reg <= 0.1 * cv_unreg and identical,
                "CV regulated {}, unregulated {} (ratio limit 0.1), "
                "repeated draw {}".format(
                    _g(cv_reg),
                    _g(cv_unreg),
                    "identical" if identical else "differs",
                ),
            )


class FfwdHiddenIntegral(Scenario):
    """The memory variable of the ERN loop integrates m - v_ref."""

    ID = "ffwd_hidden_integral"
    DESCRIPTION = "hidden integral action of the ERN loop at delta = 0"
    FIGURE = "memory variable of the feedforward loop"
    CHECKS = ("hidden_integral",)
    TABLES = ("hidden_integral",)
    FIGURES = ("hidden_integral",)

    def run(self, context: ScenarioContext) -> None:
        p = context.parameters
        with context.step("hidden integral", "hidden_integral"):
            spec = (
                family("ffwd")
                .defaults()
                .with_options(variant="ern")
                .with_values(delta=0.0)
            )
            f = spec.params()
            grid = _time_grid(p["t_end"], p["dt"])
            columns = [("t", grid)]
            findings = []
            passed = True
            for level in ("low", "high"):
                d1 = p["d1_" + level]
                system = spec.system(DisturbanceInputs(d1=d1))
                trajectory = integrate(
                    system,
                    np.zeros(system.dim),
                    (0.0, p["t_end"]),
                    _PRECISE,
                    t_eval=grid,
                )
                trace = hidden_integral_trace(trajectory, f, d1)
                terminal = abs(trajectory.column("m")[-1] - trace.v_ref)
                passed &= terminal <= 1e-6 and trace.relative_residual <= 1e-3
                findings.append(
                    "d1 = {}: |m - v_ref| = {}, relative residual "
                    "{}".format(
                        _g(d1), _g(terminal), _g(trace.relative_residual)
                    )
                )
                columns += [
                    ("z_" + level, trace.z),
                    ("residual_" + level, trace.residual),
                    ("m_" + level, trajectory.column("m")),
                ]
            context.table("hidden_integral", CsvTable.from_columns(columns))
            context.figure(
                "hidden_integral",
                [
                    Series(name, grid, values)
                    for name, values in columns[1:]
                    if name.startswith("z_")
                ],
                PlotStyle("Memory variable z = E/q - m/p", "t", "z"),
            )
            context.check(
                "hidden_integral",
                bool(passed),
                "; ".join(findings) + " (limits 1e-06 and 0.001)",
            )


def _nearest(point: np.ndarray, candidates: Sequence[Equilibrium]) -> int:
    distances = [
        float(np.max(np.abs(point - c.as_array()))) for c in candidates
    ]
    return int(np.argmin(distances))


class GrnBifurcation(Scenario):
    """Tristability of the network and its loss under overexpression."""

    ID = "grn_bifurcation"
    DESCRIPTION = "stable states of the network over the overexpression u_i"
    FIGURE = "bifurcation diagram of x_O over u_i"
    CHECKS = ("tristability",)
    TABLES = ("equilibria", "bifurcation")
    FIGURES = ("bifurcation",)

    def run(self, context: ScenarioContext) -> None:
        p = context.parameters
        with context.step("bifurcation", "tristability"):
            grn = family("grn").defaults()
            start = grn.with_values(u_i=p["u_from"])
            box = start.family.box(start)
            system = start.system()
            found = find_equilibria(
                system, box, start.family.n_starts(start)
            )
            cells = grid_equilibrium_cells(system, box, GRID_RESOLUTION)
            context.table(
                "equilibria",
                CsvTable(
                    ("index", "x_o", "x_n", "stable", "max_real_part"),
                    [
                        (
                            k,
                            e.point[0],
                            e.point[1],
                            float(e.is_stable),
                            max(e.eigen_real_parts),
                        )
                        for k, e in enumerate(found)
                    ],
                ),
            )
            cell = np.array(
                [(hi - lo) / GRID_RESOLUTION for lo, hi in box]
            )
            oracle = len(cells) == len(found) and all(
                np.any(np.all(np.abs(cells - e.as_array()) <= 2 * cell, 1))
                for e in found
            )
            stable_start = [e for e in found if e.is_stable]

            grid = np.linspace(p["u_from"], p["u_to"], int(p["points"]))
            diagram = bifurcation_sweep(grn, "u_i", grid)
            self.__write_diagram(context, diagram)
            counts = diagram.stable_counts()
            monotone = all(a >= b for a, b in zip(counts, counts[1:]))

            large = grn.with_values(u_i=p["u_large"])
            stable_large = [
                e
                for e in find_equilibria(
                    large.system(),
                    large.family.box(large),
                    large.family.n_starts(large),
                )
                if e.is_stable
            ]
            high = len(stable_large) == 1 and stable_large[0].point[0] >= max(
                e.point[0] for e in stable_start
            )
            context.check(
                "tristability",
                len(stable_start) == 3
                and oracle
                and monotone
                and counts[-1] == 1
                and high,
                "{} stable of {} equilibria at u_i = {} ({} grid cells, "
                "{}); stable counts along the sweep {}; {} stable at "
                "u_i = {}{}".format(
                    len(stable_start),
                    len(found),
                    _g(p["u_from"]),
                    len(cells),
                    "matched" if oracle else "mismatched",
                    "-".join(str(c) for c in _runs(counts)),
                    len(stable_large),
                    _g(p["u_large"]),
                    " (high/high)" if high else "",
                ),
            )

    @staticmethod
    def __write_diagram(context: ScenarioContext, diagram) -> None:
        rows = [
            (value, e.point[0], e.point[1], float(e.is_stable), label)
            for value, point, labels in zip(
                diagram.grid, diagram.branches, diagram.labels
            )
            for e, label in zip(point, labels)
        ]
        context.table(
            "bifurcation",
            CsvTable(("u_i", "x_o", "x_n", "stable", "branch"), rows),
        )
        series = []
        for label in diagram.branch_labels:
            branch = diagram.branch(label)
            series.append(
                Series(
                    "branch_{}".format(label),
                    [value for value, _ in branch],
                    [e.point[0] for _, e in branch],
                )
            )
        context.figure(
            "bifurcation",
            series,
            PlotStyle("Equilibria over u_i", "u_i", "x_O"),
        )


def _runs(counts: Sequence[int]) -> List[int]:
    """Collapses repeated values: 3, 3, 2, 1, 1 -> 3, 2, 1."""
    runs: List[int] = []
    for count in counts:
        if not runs or runs[-1] != count:
            runs.append(count)
    return runs


class GrnHighgain(Scenario):
    """High-gain feedback on x_O against its analytic envelope."""

    ID = "grn_highgain"
    DESCRIPTION = "high-gain feedback on x_O inside the analytic envelope"
    FIGURE = "x_O under high-gain feedback with its envelope"
    CHECKS = ("highgain_envelope",)
    TABLES = ("highgain",)
    FIGURES = ("highgain",)

    def run(self, context: ScenarioContext) -> None:
        p = context.parameters
        with context.step("envelope", "highgain_envelope"):
            base = (
                family("grn")
                .defaults()
                .with_options(control="highgain")
                .with_values(x_star=p["x_star"])
            )
            grid = _time_grid(p["t_end"], p["dt"])
            columns = [("t", grid)]
            findings = []
            inside = True
            for level in ("low", "high"):
                spec = base.with_values(G=p["G_" + level])
                g = spec.params()
                trajectory = integrate(
                    spec.system(), np.zeros(2), (0.0, p["t_end"]), t_eval=grid
                )
                x_o = trajectory.column("x_O")
                lower, upper = highgain_envelope(
                    grid, g.G, g.gamma_grn, g.x_star, g.D
                )
                slack = 1e-8 * np.maximum(1.0, np.abs(upper))
                violations = int(
                    np.sum((x_o < lower - slack) | (x_o > upper + slack))
                )
                inside &= violations == 0
                findings.append(
                    "G = {}: {} of {} samples outside".format(
                        _g(g.G), violations, len(grid)
                    )
                )
                columns += [
                    ("x_o_" + level, x_o),
                    ("lower_" + level, lower),
                    ("upper_" + level, upper),
                ]
            context.table("highgain", CsvTable.from_columns(columns))
            context.figure(
                "highgain",
                [Series(name, grid, values) for name, values in columns[1:]],
                PlotStyle("High-gain feedback on x_O", "t", "x_O"),
            )
            context.check(
                "highgain_envelope", bool(inside), "; ".join(findings)
            )


class ReproTrajectories(Scenario):
    """Reprogramming from the somatic state, with a pure overexpression
    arm."""

    ID = "repro_trajectories"
    DESCRIPTION = "coupled reprogramming vs constant overexpression"
    FIGURE = "trajectories of the coupled reprogramming system"
    CHECKS = (
        "reprogramming",
        "reprogramming_setpoint",
        "overexpression_failure",
    )
    TABLES = ("trajectories",)
    FIGURES = ("trajectories",)
    STATES = ("low", "pluripotent", "high")

    def run(self, context: ScenarioContext) -> None:
        p = context.parameters
        t_off = p["t_off"]
        t_end = t_off + p["t_after"]
        grid = np.union1d(_time_grid(t_end, p["dt"]), [t_off])
        columns = [("t", grid)]
        with context.step("network states", *self.CHECKS):
            grn = family("grn").defaults()
            network = grn.params()
            stable = [
                e
                for e in find_equilibria(
                    grn.system(), grn.family.box(grn), grn.family.n_starts(grn)
                )
                if e.is_stable
            ]
            if len(stable) != len(self.STATES):
                raise BiocircuitError(
                    "Expected {} stable network states, found {}".format(
                        len(self.STATES), len(stable)
                    )
                )
            low = stable[0]
        if context.decided("reprogramming"):
            return
        with context.step(
            "controlled arm", "reprogramming", "reprogramming_setpoint"
        ):
            coupled = family("repro").defaults().with_options(mode="coupled")
            repro, coupled_network = coupled.params()
            system = build_repro(repro, coupled_network, t_off=t_off)
            trajectory = integrate(
                system,
                repro_initial_state(repro, low.point),
                (0.0, t_end),
                t_eval=grid,
            )
            x = trajectory.states[:, 2:]
            columns += [
                ("x_o_controlled", x[:, 0]),
                ("x_n_controlled", x[:, 1]),
            ]
            at_off = trajectory.states[np.searchsorted(grid, t_off)]
            x_inf = repro_limits(repro)[1]
            slack = residual_bounds(repro, coupled_network.D)[1]
            context.check(
                "reprogramming_setpoint",
                abs(at_off[2] - x_inf) <= slack,
                "x_O(t_off) = {} against x_inf = {} (within {})".format(
                    _g(at_off[2]), _g(x_inf), _g(slack)
                ),
            )
            basin = _nearest(np.asarray(at_off[2:]), stable)
            settled, _ = simulate_to_steady_state(system, at_off, t0=t_off)
            landing = np.asarray(settled.point[2:])
            index = _nearest(landing, stable)
            close = np.max(np.abs(landing - stable[1].as_array())) <= 1e-3 * (
                max(1.0, float(np.max(np.abs(stable[1].as_array()))))
            )
            context.check(
                "reprogramming",
                index == 1 and close,
                "at t_off = {} the network is nearest the {} state; after "
                "removal it settles at ({}, {}) in the {} basin".format(
                    _g(t_off),
                    self.STATES[basin],
                    _g(landing[0]),
                    _g(landing[1]),
                    self.STATES[index],
                ),
            )
        with context.step("overexpression arm", "overexpression_failure"):
            schedule = Schedule([(0.0, p["u_control"]), (t_off, 0.0)])
            system = build_grn(network, Control.OPEN, u_signal=schedule)
            trajectory = integrate(
                system, low.point, (0.0, t_end), t_eval=grid
            )
            columns += [
                ("x_o_overexpression", trajectory.column("x_O")),
                ("x_n_overexpression", trajectory.column("x_N")),
            ]
            at_off = trajectory.states[np.searchsorted(grid, t_off)]
            settled, _ = simulate_to_steady_state(system, at_off, t0=t_off)
            index = _nearest(settled.as_array(), stable)
            context.check(
                "overexpression_failure",
                index == 2,
                "constant u_i = {} until t_off leaves the {} basin".format(
                    _g(p["u_control"]), self.STATES[index]
                ),
            )
        if len(columns) == 5:
            context.table("trajectories", CsvTable.from_columns(columns))
            context.figure(
                "trajectories",
                [Series(name, grid, values) for name, values in columns[1:]],
                PlotStyle("Reprogramming from the somatic state", "t", "x"),
            )


class ReproDosageCompensation(Scenario):
    """Closed form, high-gain limits and copy-number robustness of the
    reprogramming construct."""

    ID = "repro_dosage_compensation"
    DESCRIPTION = "repro closed form, 1/G offsets and dosage histograms"
    FIGURE = "x_i distributions narrowing with the gain G"
    CHECKS = (
        "repro_closed_form",
        "repro_offset_scaling",
        "repro_dosage_cv",
    )
    TABLES = ("closed_form", "offset", "dosage")
    FIGURES = ("dosage",)
    DRAWN = ("alpha", "beta", "c", "delta", "delta_bar", "kappa", "gamma", "d")

    def run(self, context: ScenarioContext) -> None:
        repro = family("repro").defaults()
        bound = family("grn").defaults().params().D
        with context.step("closed form", "repro_closed_form"):
            self.__closed_form(context, repro, bound)
        with context.step("offset scaling", "repro_offset_scaling"):
            self.__offsets(context, repro, bound)
        with context.step("dosage histograms", "repro_dosage_cv"):
            self.__histograms(context, repro, bound)

    def __closed_form(
        self, context: ScenarioContext, repro: ModelSpec, bound: float
    ) -> None:
        p = context.parameters
        generator = np.random.Generator(np.random.Philox(context.seed))
        rows = []
        worst = 0.0
        for draw in range(int(p["draws"])):
            factors = generator.lognormal(0.0, p["sigma"], len(self.DRAWN))
            values = {
                name: repro.values[name] * factor
                for name, factor in zip(self.DRAWN, factors)
            }
            inputs = DisturbanceInputs(
                H_GRN=p["H_fraction"] * bound * generator.uniform()
            )
            spec = repro.with_values(G=p["G_draws"], **values)
            row = [draw]
            for point, expected in (
                self.__simulated(spec, inputs),
                self.__newton(spec.with_values(G=repro.values["G"]), inputs),
            ):
                for a, b in zip(point, expected.as_tuple()):
                    worst = max(worst, abs(a - b) / max(1.0, abs(b)))
                row += [point[0], expected.m_i, point[2], expected.x_i]
            rows.append(row)
        context.table(
            "closed_form",
            CsvTable(
                (
                    "draw",
                    "m_i",
                    "m_i_closed",
                    "x_i",
                    "x_i_closed",
                    "m_i_newton",
                    "m_i_newton_closed",
                    "x_i_newton",
                    "x_i_newton_closed",
                ),
                rows,
            ),
        )
        context.check(
            "repro_closed_form",
            worst <= 1e-6,
            "largest deviation from the closed form over {} draws at G = {} "
            "and G = {}: {} (limit 1e-06)".format(
                len(rows), _g(p["G_draws"]), _g(repro.values["G"]), _g(worst)
            ),
        )

    @staticmethod
    def __simulated(
        spec: ModelSpec, inputs: DisturbanceInputs
    ) -> Tuple[np.ndarray, ReproSteadyState]:
        expected = repro_steady_state(spec.params(), inputs.H_GRN(0.0))
        settled, _ = simulate_to_steady_state(
            spec.system(inputs), np.zeros(3)
        )
        return np.asarray(settled.point), expected

    @staticmethod
    def __newton(
        spec: ModelSpec, inputs: DisturbanceInputs
    ) -> Tuple[np.ndarray, ReproSteadyState]:
        """The equilibrium at a gain where the construct is too stiff to
        simulate per draw."""
        expected = repro_steady_state(spec.params(), inputs.H_GRN(0.0))
        system = spec.system(inputs)
        box = [(0.0, 2.0 * v + 1.0) for v in expected.as_tuple()]
        found = find_equilibria(system, box, 16)
        if len(found) != 1:
            raise BiocircuitError(
                "Expected one equilibrium of the construct, found {}".format(
                    len(found)
                )
            )
        return np.asarray(found[0].point), expected

    @staticmethod
    def __offsets(
        context: ScenarioContext, repro: ModelSpec, bound: float
    ) -> None:
        p = context.parameters
        production = Schedule(
            [(0.0, p["H_fraction"] * bound), (p["t_switch"], bound)]
        )
        rows = []
        for gain in (p["G_mid"], p["G_high"]):
            spec = repro.with_values(G=gain)
            system = spec.system(DisturbanceInputs(H_GRN=production))
            trajectory = integrate(system, np.zeros(3), (0.0, p["t_end"]))
            x_inf = repro_limits(spec.params())[1]
            terminal = trajectory.final_state[2]
            rows.append((gain, terminal, x_inf, abs(terminal - x_inf)))
        context.table(
            "offset", CsvTable(("g", "x_i", "x_inf", "offset"), rows)
        )
        ratio = rows[0][3] / rows[1][3]
        required = 0.8 * p["G_high"] / p["G_mid"]
        context.check(
            "repro_offset_scaling",
            ratio >= required,
            "terminal offset shrinks {}x from G = {} to G = {} (at least "
            "{}x)".format(
                _g(ratio), _g(p["G_mid"]), _g(p["G_high"]), _g(required)
            ),
        )

    @staticmethod
    def __histograms(
        context: ScenarioContext, repro: ModelSpec, bound: float
    ) -> None:
        p = context.parameters
        inputs = DisturbanceInputs(H_GRN=p["H_fraction"] * bound)
        rows = []
        series = []
        spread = {}
        for level in ("low", "mid", "high"):
            gain = p["G_" + level]
            summary = ensemble_run(
                repro.with_values(G=gain),
                "d",
                p["sigma"],
                int(p["n"]),
                context.seed,
                base=inputs,
            )
            _logger.info("G = %s: x_i CV %.4g", _g(gain), summary.cv)
            spread[gain] = summary.cv
            edges = summary.bin_edges
            rows += [
                (gain, lo, hi, count)
                for lo, hi, count in zip(edges[:-1], edges[1:], summary.counts)
            ]
            series.append(
                Series(
                    "G = {}".format(_g(gain)),
                    0.5 * (edges[:-1] + edges[1:]),
                    summary.counts / summary.n,
                )
            )
        context.table(
            "dosage", CsvTable(("g", "bin_lo", "bin_hi", "count"), rows)
        )
        context.figure(
            "dosage",
            series,
            PlotStyle("x_i over log-normal copy numbers", "x_i", "fraction"),
        )
        context.check(
            "repro_dosage_cv",
            spread[p["G_high"]] <= p["cv_limit"],
            "x_i CV at H_i = {}: {} (limit {} at G = {})".format(
                _g(inputs.H_GRN(0.0)),
                ", ".join(
                    "{} at G = {}".format(_g(cv), _g(gain))
                    for gain, cv in spread.items()
                ),
                _g(p["cv_limit"]),
                _g(p["G_high"]),
            ),
        )


_SCENARIOS: Dict[str, Type[Scenario]] = {
    item.ID: item
    for item in (
        QicStep,
        FfwdResourceTitration,
        FfwdCopyNumber,
        FfwdHiddenIntegral,
        GrnBifurcation,
        GrnHighgain,
        ReproTrajectories,
        ReproDosageCompensation,
    )
}


@dataclass(frozen=True)
class ScenarioEntry:
    """One line of the scenario catalog."""

    scenario_id: str
    description: str
    figure: str

    def line(self) -> str:
        """``<id>  <description> [figure: <anchor>]``."""
        return "{}  {} [figure: {}]".format(
            self.scenario_id, self.description, self.figure
        )


def list_scenarios() -> Tuple[ScenarioEntry, ...]:
    """The scenario catalog in a stable order."""
    return tuple(
        ScenarioEntry(item.ID, item.DESCRIPTION, item.FIGURE)
        for item in _SCENARIOS.values()
    )


def create_scenario(
    scenario_id: str,
    overrides: Optional[Mapping[str, float]] = None,
    seed: Optional[int] = None,
) -> Scenario:
    """Creates a scenario by identifier.

    Raises:
        ScenarioError: If the identifier is unknown or an override is not
            declared.
    """
    try:
        cls = _SCENARIOS[scenario_id]
    except KeyError:
        raise ScenarioError(
            "Unknown scenario '{}', expected one of {}".format(
                scenario_id, ", ".join(_SCENARIOS)
            )
        ) from None
    return cls(overrides, seed)
