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
"""Simulation and analysis of biomolecular feedback and feedforward
controllers for gene expression and cell fate reprogramming.
"""
from .analysis import (
    adaptation_curve,
    bifurcation_sweep,
    ensemble_run,
    hidden_integral_trace,
    sweep_equilibria,
    transient_response,
)
from .base import NamedObject
from .catalog import ModelFamily, ModelSpec, families, family, model
from .cli import cli_dispatch
from .config import RunConfig, parse_config
from .emit import CsvTable, PlotStyle, Series, emit_csv, emit_svg
from .equilibrium import classify_stability, find_equilibria, jacobian
from .error import BiocircuitError
from .integrator import integrate, simulate_to_steady_state
from .runner import ExperimentReport, run_scenario
from .schedule import DisturbanceInputs, Schedule
from .scenario import Scenario
from .scenarios import create_scenario, list_scenarios
from .sink import DirectorySink, MemorySink, ReportSink
from .system import Equilibrium, IntegratorConfig, OdeSystem, Trajectory

__all__ = [
    "BiocircuitError",
    "CsvTable",
    "DirectorySink",
    "DisturbanceInputs",
    "Equilibrium",
    "ExperimentReport",
    "IntegratorConfig",
    "MemorySink",
    "ModelFamily",
    "ModelSpec",
    "NamedObject",
    "OdeSystem",
    "PlotStyle",
    "ReportSink",
    "RunConfig",
    "Scenario",
    "Schedule",
    "Series",
    "Trajectory",
    "adaptation_curve",
    "bifurcation_sweep",
    "classify_stability",
    "cli_dispatch",
    "create_scenario",
    "emit_csv",
    "emit_svg",
    "ensemble_run",
    "families",
    "family",
    "find_equilibria",
    "hidden_integral_trace",
    "integrate",
    "jacobian",
    "list_scenarios",
    "model",
    "parse_config",
    "run_scenario",
    "simulate_to_steady_state",
    "sweep_equilibria",
    "transient_response",
]
