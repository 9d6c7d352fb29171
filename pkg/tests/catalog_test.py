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

from biocircuit.catalog import (
    families,
    family,
    model,
    reference_numbers,
    reference_sections,
)
from biocircuit.error import ParameterError
from biocircuit.integrator import simulate_to_steady_state
from biocircuit.plant import PlantParams
from biocircuit.schedule import DisturbanceInputs


class CatalogTest(unittest.TestCase):
    def test_family_order(self) -> None:
        self.assertEqual(
            ("plant", "qic", "ffwd", "grn", "repro"),
            tuple(item.get_name() for item in families()),
        )
        self.assertEqual("model:grn", family("grn").get_full_name())

    def test_unknown_family(self) -> None:
        with self.assertRaises(ParameterError):
            family("toggle")

    def test_reference_values(self) -> None:
        self.assertEqual(PlantParams(), model("plant").params())
        self.assertEqual(1, int(reference_numbers("meta")["version"]))
        with self.assertRaises(ParameterError):
            reference_sections(99)

    def test_options(self) -> None:
        self.assertEqual("closed", model("qic").options["loop"])
        spec = model("ffwd").with_options(variant="microrna")
        self.assertEqual(3, spec.system().dim)
        with self.assertRaises(ParameterError):
            family("qic").resolve(options={"loop": "half"})
        with self.assertRaises(ParameterError):
            family("qic").resolve(options={"wiring": "open"})

    def test_values_are_validated(self) -> None:
        with self.assertRaises(ParameterError):
            model("plant", gamma=-1.0)
        with self.assertRaises(ParameterError):
            model("plant").with_values(speed=1.0)
        with self.assertRaises(ParameterError):
            family("plant").resolve({"speed": 1.0})
        spec = model("plant").with_values(gamma=2.0)
        self.assertEqual(2.0, spec.params().gamma)

    def test_values_are_read_only(self) -> None:
        spec = model("plant")
        with self.assertRaises(TypeError):
            spec.values["gamma"] = 2.0

    def test_coupled_repro_takes_network_constants(self) -> None:
        spec = family("repro").resolve(options={"mode": "coupled"})
        self.assertIn("a_self", spec.values)
        self.assertNotIn("u_i", spec.values)
        self.assertEqual(4, spec.system().dim)

    def test_every_family_builds(self) -> None:
        for item in families():
            spec = item.defaults()
            system = spec.system()
            with self.subTest(family=item.get_name()):
                self.assertEqual(system.dim, len(item.initial_state(spec)))
                self.assertEqual(system.dim, len(item.box(spec)))
                self.assertGreater(item.n_starts(spec), 0)

    def test_closed_form_outputs_match_simulation(self) -> None:
        for name in ("plant", "ffwd", "repro"):
            spec = model(name)
            if name == "repro":
                spec = spec.with_values(G=10.0)
            expected = spec.family.steady_output(spec, d1=0.5)
            dist = DisturbanceInputs(d1=0.5)
            if name == "repro":
                expected = spec.family.steady_output(spec, H=2.0)
                dist = DisturbanceInputs(H_GRN=2.0)
            system = spec.system(dist)
            equilibrium, _ = simulate_to_steady_state(
                system, spec.family.initial_state(spec)
            )
            with self.subTest(family=name):
                self.assertAlmostEqual(
                    expected,
                    equilibrium.point[system.output],
                    delta=1e-6 * max(1.0, abs(expected)),
                )

    def test_families_without_closed_form(self) -> None:
        for name in ("qic", "grn"):
            spec = model(name)
            self.assertIsNone(spec.family.steady_output(spec))

    def test_qic_initial_state(self) -> None:
        spec = model("qic")
        np.testing.assert_allclose(
            [1.0, 1.0, 0.5], spec.family.initial_state(spec)
        )


if __name__ == "__main__":
    unittest.main()
