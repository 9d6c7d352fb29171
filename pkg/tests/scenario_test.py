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

import os
import unittest
from unittest import mock

from biocircuit.emit import CsvTable
from biocircuit.error import ErrorHandler, ScenarioError
from biocircuit.protocol import DEFAULT_SEED, SEED_ENVIRONMENT_VARIABLE
from biocircuit.runner import (
    OUTPUTS_CHECK,
    PARAMETERS_FILE,
    run_scenario,
    write_report,
)
from biocircuit.scenario import Scenario, Verdict, new_context, resolve_seed
from biocircuit.scenarios import create_scenario, list_scenarios
from biocircuit.sink import MemorySink


class RecordingErrorHandler(ErrorHandler):
    def __init__(self) -> None:
        self.handled = []

    def handle(self, message: str, error: Exception) -> bool:
        self.handled.append((message, error))
        return True


class ToyScenario(Scenario):
    """Borrows the parameters of qic_step and fails on purpose."""

    ID = "qic_step"
    DESCRIPTION = "toy"
    FIGURE = "none"
    CHECKS = ("first", "second", "third")
    TABLES = ("values", "missing")
    FIGURES = ("missing",)

    def run(self, context) -> None:
        context.table("values", CsvTable(("a",), [(1.0,)]))
        context.check("first", True, "fine")
        with context.step("broken step", "second"):
            raise RuntimeError("kaboom")


class ResolveSeedTest(unittest.TestCase):
    def test_explicit_seed_wins(self) -> None:
        with mock.patch.dict(os.environ, {SEED_ENVIRONMENT_VARIABLE: "7"}):
            self.assertEqual(3, resolve_seed(3))
            self.assertEqual(7, resolve_seed())

    def test_default(self) -> None:
        with mock.patch.dict(os.environ, {SEED_ENVIRONMENT_VARIABLE: ""}):
            self.assertEqual(DEFAULT_SEED, resolve_seed())
        self.assertEqual(42, DEFAULT_SEED)

    def test_malformed_environment(self) -> None:
        with mock.patch.dict(os.environ, {SEED_ENVIRONMENT_VARIABLE: "x"}):
            with self.assertRaises(ScenarioError):
                resolve_seed()


class VerdictTest(unittest.TestCase):
    def test_line(self) -> None:
        self.assertEqual(
            "PASS titration within limit",
            Verdict("titration", True, "within\tlimit").line(),
        )
        self.assertEqual(
            "FAIL tristability two lines",
            Verdict("tristability", False, "two\nlines").line(),
        )


class ScenarioContextTest(unittest.TestCase):
    def test_checks_are_declared_once(self) -> None:
        context = new_context(ToyScenario(seed=1))
        context.check("first", True, "ok")
        with self.assertRaises(ScenarioError):
            context.check("first", False, "again")
        with self.assertRaises(ScenarioError):
            context.check("fourth", True, "undeclared")
        self.assertTrue(context.decided("first"))
        self.assertFalse(context.decided("second"))

    def test_step_failure_fails_its_checks(self) -> None:
        handler = RecordingErrorHandler()
        context = new_context(ToyScenario(seed=1), handler)
        with context.step("solve", "first", "second"):
            context.check("first", True, "decided before the failure")
            raise ValueError("singular")
        verdicts = {v.check_id: v for v in context.verdicts}
        self.assertTrue(verdicts["first"].passed)
        self.assertFalse(verdicts["second"].passed)
        self.assertIn("ValueError: singular", verdicts["second"].message)
        self.assertEqual(1, len(handler.handled))
        self.assertIn("scenario:qic_step", handler.handled[0][0])


class ScenarioTest(unittest.TestCase):
    def test_parameters_and_overrides(self) -> None:
        scenario = ToyScenario({"k2": 1000}, seed=5)
        self.assertEqual(1000.0, scenario.parameters["k2"])
        self.assertEqual(40.0, scenario.parameters["t_step"])
        self.assertEqual(5, scenario.seed)
        self.assertEqual("scenario:qic_step", scenario.get_full_name())

    def test_bad_overrides(self) -> None:
        for overrides in ({"speed": 1.0}, {"k2": float("nan")}, {"k2": "1"}):
            with self.subTest(overrides=overrides):
                with self.assertRaises(ScenarioError):
                    ToyScenario(overrides)


class ScenarioCatalogTest(unittest.TestCase):
    def test_list(self) -> None:
        entries = list_scenarios()
        self.assertEqual(8, len(entries))
        ids = [entry.scenario_id for entry in entries]
        self.assertEqual(len(ids), len(set(ids)))
        self.assertIn("ffwd_resource_titration", ids)
        for entry in entries:
            self.assertTrue(entry.line().startswith(entry.scenario_id))
            self.assertIn("[figure: ", entry.line())

    def test_figure_anchor(self) -> None:
        entries = {entry.scenario_id: entry for entry in list_scenarios()}
        self.assertEqual(
            "repro_trajectories  coupled reprogramming vs constant "
            "overexpression [figure: trajectories of the coupled "
            "reprogramming system]",
            entries["repro_trajectories"].line(),
        )

    def test_create(self) -> None:
        scenario = create_scenario("grn_highgain", {"G_low": 50}, seed=9)
        self.assertEqual("grn_highgain", scenario.ID)
        self.assertEqual(50.0, scenario.parameters["G_low"])
        with self.assertRaises(ScenarioError):
            create_scenario("toggle_switch")
        with self.assertRaises(ScenarioError):
            create_scenario("grn_highgain", {"theta": 1.0})


class RunnerTest(unittest.TestCase):
    def test_failures_are_reported(self) -> None:
        handler = RecordingErrorHandler()
        report = run_scenario(ToyScenario(seed=1), handler)
        self.assertFalse(report.passed)
        lines = report.report_text().splitlines()
        self.assertEqual("PASS first fine", lines[0])
        self.assertTrue(lines[1].startswith("FAIL second broken step"))
        self.assertEqual("FAIL third not evaluated", lines[2])
        self.assertEqual(
            "FAIL {} missing outputs: missing.csv, missing.svg".format(
                OUTPUTS_CHECK
            ),
            lines[3],
        )
        self.assertEqual(4, len(lines))
        self.assertEqual(1, len(handler.handled))

    def test_write_report(self) -> None:
        report = run_scenario(ToyScenario(seed=11), RecordingErrorHandler())
        with MemorySink() as sink:
            write_report(report, sink)
        payloads = sink.payloads
        self.assertEqual(
            ("values.csv", PARAMETERS_FILE, "report.txt"), sink.written
        )
        self.assertEqual(b"a\n1\n", payloads["values.csv"])
        parameters = payloads[PARAMETERS_FILE].decode("utf-8")
        self.assertTrue(parameters.startswith("[scenario.qic_step]\n"))
        self.assertTrue(parameters.endswith("[run]\nseed = 11\n"))

    def test_titration_scenario_passes(self) -> None:
        report = run_scenario(create_scenario("ffwd_resource_titration"))
        self.assertTrue(report.passed, report.report_text())
        self.assertEqual(
            {"adaptation", "attenuation", "titration"}, set(report.tables)
        )
        self.assertEqual({"attenuation", "titration"}, set(report.figures))

    def test_highgain_scenario_is_reproducible(self) -> None:
        first = run_scenario(create_scenario("grn_highgain", seed=1))
        second = run_scenario(create_scenario("grn_highgain", seed=1))
        self.assertTrue(first.passed, first.report_text())
        self.assertEqual(dict(first.tables), dict(second.tables))
        self.assertEqual(dict(first.figures), dict(second.figures))
        self.assertEqual(first.report_text(), second.report_text())

    def test_reprogramming_tracks_the_setpoint(self) -> None:
        report = run_scenario(create_scenario("repro_trajectories"))
        self.assertTrue(report.passed, report.report_text())
        verdicts = {v.check_id: v for v in report.verdicts}
        self.assertTrue(
            verdicts["reprogramming_setpoint"].message.startswith(
                "x_O(t_off) = "
            )
        )
        self.assertIn(
            "at t_off = 30 the network is nearest the",
            verdicts["reprogramming"].message,
        )
        self.assertIn(
            "in the pluripotent basin", verdicts["reprogramming"].message
        )

    def test_dosage_spread_is_checked(self) -> None:
        overrides = {"draws": 3, "n": 200}
        report = run_scenario(
            create_scenario("repro_dosage_compensation", overrides, seed=5)
        )
        self.assertTrue(report.passed, report.report_text())
        verdicts = {v.check_id: v for v in report.verdicts}
        self.assertIn(
            "x_i CV at H_i = 20.775", verdicts["repro_dosage_cv"].message
        )
        self.assertIn(
            "at G = 10 and G = 1000", verdicts["repro_closed_form"].message
        )
        rows = report.tables["closed_form"].decode("utf-8").splitlines()
        self.assertEqual(4, len(rows))
        self.assertTrue(rows[0].endswith("x_i_newton,x_i_newton_closed"))


if __name__ == "__main__":
    unittest.main()
