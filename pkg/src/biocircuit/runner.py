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
""" Contains the scenario runner that executes a scenario and collects its
    outputs and verdicts into a report.
"""
from dataclasses import dataclass
import logging
import time
from types import MappingProxyType
from typing import List, Mapping, Optional, Tuple

from .emit import format_number
from .error import ErrorHandler, LoggingErrorHandler
from .protocol import REPORT_FILE
from .scenario import Scenario, Verdict, new_context
from .sink import ReportSink

_logger = logging.getLogger(__name__)

OUTPUTS_CHECK = "outputs"
PARAMETERS_FILE = "parameters.cfg"


@dataclass(frozen=True)
class ExperimentReport:
    """The outcome of one scenario run.

    Tables and figures are rendered payloads by name. The duration is kept
    out of every written file, so reports of a fixed seed and reference
    version are byte-identical.
    """

    scenario_id: str
    parameters: Mapping[str, float]
    seed: int
    tables: Mapping[str, bytes]
    figures: Mapping[str, bytes]
    verdicts: Tuple[Verdict, ...]
    duration: float

    @property
    def passed(self) -> bool:
        """True if every verdict passed."""
        return all(verdict.passed for verdict in self.verdicts)

    def report_text(self) -> str:
        """The verdict lines of ``report.txt``."""
        return "".join(verdict.line() + "\n" for verdict in self.verdicts)

    def parameters_text(self) -> str:
        """The resolved parameters and the seed in config format."""
        lines = ["[scenario.{}]".format(self.scenario_id)]
        lines += [
            "{} = {}".format(key, format_number(value))
            for key, value in self.parameters.items()
        ]
        lines += ["", "[run]", "seed = {}".format(self.seed)]
        return "\n".join(lines) + "\n"


def run_scenario(
    scenario: Scenario, error_handler: Optional[ErrorHandler] = None
) -> ExperimentReport:
    """Executes a scenario.

    Errors never escape: a failing step fails the checks it covers, checks
    left undecided fail as not evaluated and missing declared outputs fail
    an additional ``outputs`` check.

    Args:
        scenario (Scenario): The scenario to run.
        error_handler (ErrorHandler, optional): Receives every captured
            error. Defaults to logging them.

    Returns:
        ExperimentReport: The report.
    """
    handler = error_handler or LoggingErrorHandler(_logger)
    context = new_context(scenario, handler)
    _logger.info(
        "Running %s with seed %d", scenario.get_full_name(), scenario.seed
    )
    started = time.perf_counter()
    with context.step("pipeline", *scenario.CHECKS):
        scenario.run(context)
    duration = time.perf_counter() - started

    decided = {verdict.check_id: verdict for verdict in context.verdicts}
    verdicts: List[Verdict] = [
        decided.get(check_id, Verdict(check_id, False, "not evaluated"))
        for check_id in scenario.CHECKS
    ]
    missing = [
        name + ".csv" for name in scenario.TABLES if name not in context.tables
    ] + [
        name + ".svg"
        for name in scenario.FIGURES
        if name not in context.figures
    ]
    if missing:
        verdicts.append(
            Verdict(
                OUTPUTS_CHECK,
                False,
                "missing outputs: {}".format(", ".join(missing)),
            )
        )
    _logger.info(
        "%s finished in %.2f s, %d of %d checks passed",
        scenario.get_full_name(),
        duration,
        sum(1 for verdict in verdicts if verdict.passed),
        len(verdicts),
    )
    return ExperimentReport(
        scenario_id=scenario.ID,
        parameters=MappingProxyType(dict(scenario.parameters)),
        seed=scenario.seed,
        tables=MappingProxyType(dict(context.tables)),
        figures=MappingProxyType(dict(context.figures)),
        verdicts=tuple(verdicts),
        duration=duration,
    )


def write_report(report: ExperimentReport, sink: ReportSink) -> None:
    """Writes the tables, figures, parameters and verdicts of a report to an
    open sink."""
    for name in sorted(report.tables):
        sink.write(name + ".csv", report.tables[name])
    for name in sorted(report.figures):
        sink.write(name + ".svg", report.figures[name])
    sink.write(PARAMETERS_FILE, report.parameters_text())
    sink.write(REPORT_FILE, report.report_text())
