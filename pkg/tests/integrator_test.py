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

from biocircuit.error import IntegrationError, NoConvergence, ParameterError
from biocircuit.integrator import integrate, simulate_to_steady_state
from biocircuit.schedule import Schedule
from biocircuit.system import IntegratorConfig, OdeSystem, Stability

DECAY = OdeSystem(("x",), lambda t, x: -x, label="decay")


def _switched(switch_time: float) -> OdeSystem:
    u = Schedule([(0.0, 0.0), (switch_time, 1.0)])
    return OdeSystem(
        ("x",), lambda t, x: u(t) - x, breakpoints=u.breakpoints
    )


def _fixed_step_error(h: float) -> float:
    # huge tolerances accept every step, h_max pins the step size
    config = IntegratorConfig(rtol=1.0, atol=1.0, h_init=h, h_max=h)
    trajectory = integrate(DECAY, [1.0], (0.0, 2.0), config)
    return abs(trajectory.final_state[0] - np.exp(-2.0))


class IntegrateTest(unittest.TestCase):
    def test_exponential_decay(self) -> None:
        trajectory = integrate(DECAY, [1.0], (0.0, 1.0))
        self.assertEqual(1.0, trajectory.final_time)
        self.assertAlmostEqual(
            np.exp(-1.0), trajectory.final_state[0], delta=1e-7
        )

    def test_lands_on_output_grid(self) -> None:
        grid = np.linspace(0.0, 1.0, 11)
        trajectory = integrate(DECAY, [1.0], (0.0, 1.0), t_eval=grid)
        np.testing.assert_array_equal(grid, trajectory.times)
        np.testing.assert_allclose(
            np.exp(-grid), trajectory.column("x"), rtol=1e-7
        )

    def test_fifth_order_convergence(self) -> None:
        coarse, fine = _fixed_step_error(0.2), _fixed_step_error(0.1)
        self.assertGreater(fine, 1e-13)
        ratio = coarse / fine
        self.assertGreaterEqual(ratio, 20.0)
        self.assertLessEqual(ratio, 45.0)

    def test_no_step_crosses_a_breakpoint(self) -> None:
        trajectory = integrate(_switched(1.0), [0.0], (0.0, 3.0))
        times = trajectory.times.tolist()
        self.assertIn(1.0, times)
        self.assertEqual(0.0, trajectory.states[times.index(1.0), 0])
        self.assertAlmostEqual(
            1.0 - np.exp(-2.0), trajectory.final_state[0], delta=1e-7
        )

    def test_invalid_arguments(self) -> None:
        with self.assertRaises(ParameterError):
            integrate(DECAY, [1.0, 2.0], (0.0, 1.0))
        with self.assertRaises(ParameterError):
            integrate(DECAY, [np.nan], (0.0, 1.0))
        with self.assertRaises(ParameterError):
            integrate(DECAY, [1.0], (1.0, 1.0))

    def test_step_budget(self) -> None:
        config = IntegratorConfig(h_max=1.0, max_steps=3)
        with self.assertRaises(IntegrationError):
            integrate(DECAY, [1.0], (0.0, 100.0), config)

    def test_finite_time_blow_up(self) -> None:
        system = OdeSystem(("x",), lambda t, x: x * x)
        with np.errstate(all="ignore"):
            with self.assertRaises(IntegrationError):
                integrate(system, [1.0], (0.0, 2.0))


class SteadyStateTest(unittest.TestCase):
    def test_settles_at_stable_point(self) -> None:
        system = OdeSystem(("x",), lambda t, x: 1.0 - x)
        equilibrium, trajectory = simulate_to_steady_state(system, [0.0])
        self.assertAlmostEqual(1.0, equilibrium.point[0], delta=1e-8)
        self.assertIs(Stability.STABLE, equilibrium.stability)
        self.assertEqual(trajectory.final_state[0], equilibrium.point[0])

    def test_criterion_is_armed_after_last_switch(self) -> None:
        equilibrium, trajectory = simulate_to_steady_state(
            _switched(50.0), [0.0]
        )
        self.assertGreater(trajectory.final_time, 50.0)
        self.assertAlmostEqual(1.0, equilibrium.point[0], delta=1e-8)

    def test_starts_at_given_time(self) -> None:
        system = OdeSystem(("x",), lambda t, x: 1.0 - x)
        _, trajectory = simulate_to_steady_state(system, [0.0], t0=10.0)
        self.assertEqual(10.0, trajectory.times[0])

    def test_no_convergence_keeps_trajectory(self) -> None:
        system = OdeSystem(("x",), lambda t, x: np.ones_like(x))
        with self.assertRaises(NoConvergence) as raised:
            simulate_to_steady_state(
                system, [0.0], IntegratorConfig(t_max=5.0)
            )
        self.assertEqual(5.0, raised.exception.trajectory.final_time)


if __name__ == "__main__":
    unittest.main()
