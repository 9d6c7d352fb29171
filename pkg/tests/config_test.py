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

import unittest

import numpy as np

from biocircuit.config import RunConfig, parse_config, parse_override
from biocircuit.error import ConfigError
from biocircuit.plant import PlantParams
from biocircuit.schedule import Schedule

FULL = """
[model]
family = qic
loop = open
k2 = 1000

[disturbances]
d1 = (0, 1), (40, 0.5)
H = 0.5

[integrator]
rtol = 1e-6
ss_window = 3
t_end = 80
dt = 0.5
x0 = 1, 1, 0.5

[sweep]
param = k1
from = 10
to = 1000
points = 5

[ensemble]
sigma = 0.25
n = 100
seed = 3

[output]
directory = out/qic
"""

# building blocks of the structured fuzz inputs
_FRAGMENTS = (
    "[model]",
    "[disturbances]",
    "[integrator]",
    "[sweep]",
    "[ensemble]",
    "[output]",
    "[model",
    "family = plant",
    "family = grn",
    "family = repro",
    "family = ffwd",
    "family = qic",
    "family = nope",
    "mode = coupled",
    "variant = microrna",
    "loop = sideways",
    "gamma = -1",
    "gamma = 1e999",
    "delta = 0",
    "g = 0",
    "d1 = (0, 1), (5, 0.5)",
    "d1 = (5, 1), (0, 0.5)",
    "H = (0, -1)",
    "x0 = 1, 2",
    "x0 = ,",
    "points = 1.5",
    "param = gamma",
    "from = 2",
    "to = 1",
    "seed = -4",
    "directory = out",
    "rtol = 0",
    "= 1",
    "# comment",
    "",
    "é = 1",
)


class ParseConfigTest(unittest.TestCase):
    def test_minimal_plant(self) -> None:
        config = parse_config("[model]\nfamily = plant\n")
        self.assertIsInstance(config, RunConfig)
        self.assertEqual(PlantParams(), config.spec.params())
        self.assertIsNone(config.sweep)
        self.assertEqual(100.0, config.t_end)
        self.assertEqual("d", config.ensemble.param)

    def test_full_config(self) -> None:
        config = parse_config(FULL.encode("utf-8"))
        self.assertEqual("qic", config.spec.name)
        self.assertEqual("open", config.spec.options["loop"])
        self.assertEqual(1000.0, config.spec.values["k2"])
        self.assertEqual(
            Schedule([(0.0, 1.0), (40.0, 0.5)]), config.disturbances.d1
        )
        self.assertEqual(0.5, config.disturbances.H_GRN(0.0))
        self.assertEqual(1e-6, config.integrator.rtol)
        self.assertEqual(3, config.integrator.ss_window)
        self.assertEqual((80.0, 0.5), (config.t_end, config.dt))
        self.assertEqual((1.0, 1.0, 0.5), config.x0)
        self.assertEqual(("k1", 10.0, 1000.0, 5), (
            config.sweep.param,
            config.sweep.start,
            config.sweep.stop,
            config.sweep.points,
        ))
        self.assertEqual(0.25, config.ensemble.sigma)
        self.assertEqual(100, config.ensemble.n)
        self.assertEqual(3, config.ensemble.seed)
        self.assertEqual("out/qic", config.output_directory)

    def _error(self, text) -> ConfigError:
        with self.assertRaises(ConfigError) as raised:
            parse_config(text)
        return raised.exception

    def test_missing_model_section(self) -> None:
        error = self._error("[integrator]\nrtol = 1e-6\n")
        self.assertIn("[model]", str(error))

    def test_negative_gamma_cites_positivity(self) -> None:
        error = self._error("[model]\nfamily = plant\n\ngamma = -1\n")
        self.assertEqual(4, error.line)
        self.assertIn("positive", str(error))

    def test_duplicate_key_cites_both_lines(self) -> None:
        error = self._error("[model]\nfamily = plant\nfamily = plant\n")
        self.assertEqual((3, 2), (error.line, error.other_line))

    def test_unknown_names(self) -> None:
        self.assertEqual(1, self._error("[models]\n").line)
        error = self._error("[model]\nfamily = plant\nspeed = 3\n")
        self.assertEqual(3, error.line)
        self.assertIn("speed", str(error))
        error = self._error("[model]\nfamily = plant\nloop = open\n")
        self.assertEqual(3, error.line)

    def test_family_is_required(self) -> None:
        self.assertEqual(1, self._error("[model]\ngamma = 2\n").line)
        self.assertEqual(2, self._error("[model]\nfamily = toggle\n").line)

    def test_combined_invariants(self) -> None:
        error = self._error("[model]\nfamily = ffwd\ndelta = 0\ng = 0\n")
        self.assertEqual(1, error.line)

    def test_schedule_must_increase(self) -> None:
        error = self._error(
            "[model]\nfamily = plant\n[disturbances]\n"
            "d1 = (5, 1), (0, 0.5)\n"
        )
        self.assertEqual(4, error.line)

    def test_disturbance_positivity(self) -> None:
        error = self._error(
            "[model]\nfamily = plant\n[disturbances]\nd2 = 0\n"
        )
        self.assertEqual(4, error.line)

    def test_integrator_settings(self) -> None:
        base = "[model]\nfamily = plant\n[integrator]\n"
        self.assertEqual(4, self._error(base + "rtol = 0\n").line)
        self.assertEqual(4, self._error(base + "ss_window = 1.5\n").line)
        self.assertEqual(4, self._error(base + "x0 = 1, 2, 3\n").line)
        self.assertEqual(4, self._error(base + "t_end = -5\n").line)

    def test_sweep_settings(self) -> None:
        base = "[model]\nfamily = plant\n[sweep]\n"
        error = self._error(base + "param = gamma\nfrom = 1\nto = 2\n")
        self.assertIn("points", str(error))
        error = self._error(
            base + "param = speed\nfrom = 1\nto = 2\npoints = 3\n"
        )
        self.assertEqual(4, error.line)
        error = self._error(
            base + "param = gamma\nfrom = 2\nto = 1\npoints = 3\n"
        )
        self.assertEqual(6, error.line)

    def test_not_utf8(self) -> None:
        self.assertIn("UTF-8", str(self._error(b"[model]\n\xff\xfe\n")))

    def test_fuzz_inputs_never_crash(self) -> None:
        rng = np.random.default_rng(20211)
        accepted = 0
        for index in range(100_000):
            if index % 2:
                size = int(rng.integers(0, 64))
                text = rng.integers(0, 256, size, dtype=np.uint8).tobytes()
            else:
                count = int(rng.integers(1, 12))
                picks = rng.integers(0, len(_FRAGMENTS), count)
                text = "\n".join(_FRAGMENTS[i] for i in picks)
            try:
                result = parse_config(text)
            except ConfigError:
                continue
            self.assertIsInstance(result, RunConfig)
            accepted += 1
        self.assertGreater(accepted, 0)


class ParseOverrideTest(unittest.TestCase):
    def test_valid(self) -> None:
        self.assertEqual(("g", 100.0), parse_override("g=100"))
        self.assertEqual(("K_A", 0.5), parse_override(" K_A = 5e-1 "))

    def test_invalid(self) -> None:
        for text in ("g", "=1", "g=x", "1g=2", "g=1=2"):
            with self.subTest(text=text):
                with self.assertRaises(ConfigError):
                    parse_override(text)


if __name__ == "__main__":
    unittest.main()
