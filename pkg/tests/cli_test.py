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

from io import StringIO
import logging
from pathlib import Path
import tempfile
import unittest

from biocircuit.cli import cli_dispatch

PLANT = "[model]\nfamily = plant\n\n[integrator]\nt_end = 10\ndt = 1\n"


class CliTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.__directory = tempfile.TemporaryDirectory()
        self.root = Path(self.__directory.name)

    def tearDown(self) -> None:
        self.__directory.cleanup()

    def config(self, text: str, name: str = "run.cfg") -> str:
        path = self.root / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def run_cli(self, *argv: str):
        out = StringIO()
        err = StringIO()
        code = cli_dispatch(list(argv), out, err)
        return code, out.getvalue(), err.getvalue()


class UsageTest(CliTestCase):
    def test_no_command(self) -> None:
        code, _, err = self.run_cli()
        self.assertEqual(2, code)
        self.assertTrue(err.startswith("biocircuit: error:"))

    def test_missing_config_file(self) -> None:
        code, _, err = self.run_cli(
            "simulate", "--config", str(self.root / "absent.cfg")
        )
        self.assertEqual(2, code)
        self.assertIn("--config", err)

    def test_missing_out(self) -> None:
        code, _, err = self.run_cli("simulate", "--config", self.config(PLANT))
        self.assertEqual(2, code)
        self.assertIn("--out", err)

    def test_missing_model_section(self) -> None:
        path = self.config("[integrator]\nrtol = 1e-6\n")
        code, _, err = self.run_cli("simulate", "--config", path)
        self.assertEqual(2, code)
        self.assertIn("[model]", err)
        self.assertIn(path, err)

    def test_config_error_names_the_line(self) -> None:
        path = self.config("[model]\nfamily = plant\ngamma = -1\n")
        code, _, err = self.run_cli("equilibria", "--config", path)
        self.assertEqual(2, code)
        self.assertIn("line 3", err)

    def test_bifurcate_needs_a_sweep(self) -> None:
        code, _, err = self.run_cli(
            "bifurcate", "--config", self.config(PLANT), "--param", "gamma"
        )
        self.assertEqual(2, code)
        self.assertIn("--from", err)


class ModelCommandTest(CliTestCase):
    def test_simulate(self) -> None:
        out_dir = self.root / "out"
        code, out, _ = self.run_cli(
            "simulate", "--config", self.config(PLANT), "--out", str(out_dir)
        )
        self.assertEqual(0, code)
        self.assertEqual(str(out_dir / "trajectory.csv"), out.strip())
        lines = (out_dir / "trajectory.csv").read_text().splitlines()
        self.assertEqual("t,m,x", lines[0])
        self.assertEqual(12, len(lines))
        svg = (out_dir / "trajectory.svg").read_text()
        self.assertEqual(2, svg.count('id="series_'))

    def test_equilibria(self) -> None:
        code, out, _ = self.run_cli(
            "equilibria",
            "--config",
            self.config(PLANT),
            "--out",
            str(self.root),
        )
        self.assertEqual(0, code)
        lines = out.splitlines()
        self.assertEqual("m,x,stable,residual", lines[0])
        self.assertEqual(2, len(lines))
        values = [float(v) for v in lines[1].split(",")]
        self.assertAlmostEqual(1.0, values[0], places=9)
        self.assertAlmostEqual(1.0, values[1], places=9)
        self.assertEqual(1.0, values[2])
        self.assertEqual(
            out, (self.root / "equilibria.csv").read_text(encoding="utf-8")
        )

    def test_bifurcate(self) -> None:
        code, out, _ = self.run_cli(
            "bifurcate",
            "--config",
            self.config(PLANT),
            "--param",
            "gamma",
            "--from",
            "0.5",
            "--to",
            "2",
            "--points",
            "4",
            "--out",
            str(self.root),
        )
        self.assertEqual(0, code)
        lines = out.splitlines()
        self.assertEqual("gamma,m,x,stable,branch", lines[0])
        self.assertEqual(5, len(lines))
        svg = (self.root / "bifurcation.svg").read_text()
        self.assertEqual(1, svg.count('id="series_'))

    def test_bifurcate_reads_the_sweep_section(self) -> None:
        path = self.config(
            PLANT + "[sweep]\nparam = delta\nfrom = 1\nto = 2\npoints = 3\n"
        )
        code, out, _ = self.run_cli("bifurcate", "--config", path)
        self.assertEqual(0, code)
        self.assertEqual(4, len(out.splitlines()))

    def test_ensemble_is_reproducible(self) -> None:
        argv = (
            "ensemble",
            "--config",
            self.config(PLANT),
            "--n",
            "50",
            "--seed",
            "1",
            "--sigma",
            "0.5",
        )
        first = self.run_cli(*argv)
        second = self.run_cli(*argv)
        self.assertEqual(0, first[0])
        self.assertEqual(first[1], second[1])
        lines = first[1].splitlines()
        self.assertEqual("bin_lo,bin_hi,count", lines[0])
        counts = [float(line.split(",")[2]) for line in lines[1:]]
        self.assertEqual(50, sum(counts))


class LoggingTest(CliTestCase):
    def setUp(self) -> None:
        super().setUp()
        self.addCleanup(logging.basicConfig, level=logging.WARNING, force=True)

    def test_each_dispatch_logs_to_its_own_stream(self) -> None:
        path = self.config(PLANT)
        streams = []
        for _ in range(2):
            code, _, err = self.run_cli(
                "-v", "equilibria", "--config", path, "--out", str(self.root)
            )
            self.assertEqual(0, code)
            streams.append(err)
        for err in streams:
            self.assertIn("DEBUG biocircuit.equilibrium: ", err)

    def test_quiet_dispatch_drops_debug_records(self) -> None:
        path = self.config(PLANT)
        self.run_cli(
            "-v", "equilibria", "--config", path, "--out", str(self.root)
        )
        code, _, err = self.run_cli(
            "equilibria", "--config", path, "--out", str(self.root)
        )
        self.assertEqual(0, code)
        self.assertNotIn("DEBUG", err)

class ScenarioCommandTest(CliTestCase):
    def test_list(self) -> None:
        code, out, _ = self.run_cli("scenario", "list")
        self.assertEqual(0, code)
        self.assertEqual(8, len(out.splitlines()))

    def test_run(self) -> None:
        out_dir = self.root / "titration"
        code, out, _ = self.run_cli(
            "scenario",
            "run",
            "ffwd_resource_titration",
            "--out",
            str(out_dir),
        )
        self.assertEqual(0, code, out)
        for name in (
            "titration.csv",
            "titration.svg",
            "parameters.cfg",
            "report.txt",
        ):
            self.assertTrue((out_dir / name).is_file(), name)
        report = (out_dir / "report.txt").read_text()
        self.assertEqual(out, report)
        self.assertTrue(
            all(line.startswith("PASS ") for line in report.splitlines())
        )

    def test_bad_override(self) -> None:
        code, _, err = self.run_cli(
            "scenario", "run", "grn_highgain", "--set", "G_low"
        )
        self.assertEqual(2, code)
        self.assertIn("--set", err)

    def test_undeclared_override(self) -> None:
        code, _, err = self.run_cli(
            "scenario", "run", "grn_highgain", "--set", "theta=1"
        )
        self.assertEqual(2, code)
        self.assertIn("theta", err)

    def test_unknown_scenario(self) -> None:
        code, _, err = self.run_cli("scenario", "run", "toggle_switch")
        self.assertEqual(2, code)
        self.assertIn("toggle_switch", err)


if __name__ == "__main__":
    unittest.main()
