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

from biocircuit.equilibrium import (
    NewtonConfig,
    classify_stability,
    find_equilibria,
    grid_equilibrium_cells,
    jacobian,
    sobol_seeds,
)
from biocircuit.error import NotAnEquilibrium, ParameterError
from biocircuit.system import OdeSystem, Stability, stack_components

CUBIC = OdeSystem(("x",), lambda t, x: x - x ** 3, label="cubic")
SADDLE = OdeSystem(
    ("x", "y"), lambda t, x: stack_components(x[0] - 1.0, 2.0 - x[1])
)
LINEAR = OdeSystem(
    ("x", "y"),
    lambda t, x: stack_components(-x[0] + 2.0 * x[1], -3.0 * x[1]),
)
PITCHFORK = OdeSystem(
    ("x", "y"), lambda t, x: stack_components(x[0] - x[0] ** 3, -x[1])
)


class FindEquilibriaTest(unittest.TestCase):
    def test_cubic_roots_and_stability(self) -> None:
        found = find_equilibria(CUBIC, [(-2.0, 2.0)], 64)
        points = [e.point[0] for e in found]
        np.testing.assert_allclose([-1.0, 0.0, 1.0], points, atol=1e-9)
        self.assertEqual(
            [Stability.STABLE, Stability.UNSTABLE, Stability.STABLE],
            [e.stability for e in found],
        )

    def test_saddle(self) -> None:
        (saddle,) = find_equilibria(SADDLE, [(0.0, 3.0), (0.0, 3.0)], 16)
        np.testing.assert_allclose([1.0, 2.0], saddle.point, atol=1e-9)
        self.assertIs(Stability.UNSTABLE, saddle.stability)
        np.testing.assert_allclose(
            [-1.0, 1.0], saddle.eigen_real_parts, atol=1e-5
        )

    def test_extra_seeds_are_used(self) -> None:
        found = find_equilibria(
            CUBIC, [(0.5, 2.0)], 1, seeds=np.array([[0.9]])
        )
        self.assertAlmostEqual(1.0, found[0].point[0], delta=1e-9)

    def test_results_are_deterministic(self) -> None:
        first = find_equilibria(CUBIC, [(-2.0, 2.0)], 32)
        second = find_equilibria(CUBIC, [(-2.0, 2.0)], 32)
        self.assertEqual(first, second)

    def test_invalid_search(self) -> None:
        with self.assertRaises(ParameterError):
            find_equilibria(CUBIC, [(-2.0, 2.0), (0.0, 1.0)], 8)
        with self.assertRaises(ParameterError):
            find_equilibria(CUBIC, [(2.0, -2.0)], 8)
        with self.assertRaises(ParameterError):
            find_equilibria(CUBIC, [(-2.0, 2.0)], 0)
        with self.assertRaises(ParameterError):
            NewtonConfig(max_iter=0)


class StabilityTest(unittest.TestCase):
    def test_jacobian(self) -> None:
        np.testing.assert_allclose(
            [[-1.0, 2.0], [0.0, -3.0]],
            jacobian(LINEAR, [0.3, 0.7]),
            atol=1e-6,
        )

    def test_classify(self) -> None:
        equilibrium = classify_stability(LINEAR, [0.0, 0.0])
        self.assertTrue(equilibrium.is_stable)
        np.testing.assert_allclose(
            [-3.0, -1.0], equilibrium.eigen_real_parts, atol=1e-6
        )

    def test_not_an_equilibrium(self) -> None:
        with self.assertRaises(NotAnEquilibrium):
            classify_stability(LINEAR, [1.0, 1.0])


class SobolSeedsTest(unittest.TestCase):
    def test_inside_box_and_reproducible(self) -> None:
        box = [(0.0, 1.0), (10.0, 20.0)]
        seeds = sobol_seeds(box, 10, seed=3)
        self.assertEqual((10, 2), seeds.shape)
        self.assertTrue(np.all(seeds[:, 0] >= 0.0))
        self.assertTrue(np.all(seeds[:, 1] <= 20.0))
        np.testing.assert_array_equal(seeds, sobol_seeds(box, 10, seed=3))


class GridCellsTest(unittest.TestCase):
    def test_pitchfork_cells(self) -> None:
        cells = grid_equilibrium_cells(
            PITCHFORK, [(-2.0, 2.0), (-1.0, 1.0)], resolution=200
        )
        self.assertEqual((3, 2), cells.shape)
        np.testing.assert_allclose(
            [[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]], cells, atol=0.03
        )

    def test_needs_planar_system(self) -> None:
        with self.assertRaises(ParameterError):
            grid_equilibrium_cells(CUBIC, [(-2.0, 2.0)])


if __name__ == "__main__":
    unittest.main()
