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

from biocircuit.error import ParameterError
from biocircuit.schedule import (
    ContinuousSignal,
    DisturbanceInputs,
    Schedule,
    as_signal,
)


class ScheduleTest(unittest.TestCase):
    def setUp(self) -> None:
        self.schedule = Schedule([(0.0, 1.0), (2.0, 3.0)])

    def test_right_continuous(self) -> None:
        self.assertEqual(1.0, self.schedule(-1.0))
        self.assertEqual(1.0, self.schedule(1.999))
        self.assertEqual(3.0, self.schedule(2.0))
        self.assertEqual(3.0, self.schedule(100.0))

    def test_properties(self) -> None:
        self.assertEqual((2.0,), self.schedule.breakpoints)
        self.assertEqual((1.0, 3.0), self.schedule.bounds())
        self.assertFalse(self.schedule.is_constant)
        self.assertTrue(Schedule.constant(5.0).is_constant)
        self.assertEqual(
            ((0.0, 2.0), (2.0, 6.0)), self.schedule.scaled(2.0).points
        )

    def test_equality(self) -> None:
        other = Schedule([(0, 1), (2, 3)])
        self.assertEqual(self.schedule, other)
        self.assertEqual(hash(self.schedule), hash(other))
        self.assertNotEqual(self.schedule, Schedule.constant(1.0))

    def test_invalid_schedules(self) -> None:
        for points in ([], [(1.0, 1.0), (1.0, 2.0)], [(0.0, float("nan"))]):
            with self.subTest(points=points):
                with self.assertRaises(ParameterError):
                    Schedule(points)

    def test_as_signal(self) -> None:
        self.assertEqual(Schedule.constant(2.0), as_signal(2))
        self.assertEqual(self.schedule, as_signal([(0, 1), (2, 3)]))
        self.assertIs(self.schedule, as_signal(self.schedule))


class ContinuousSignalTest(unittest.TestCase):
    def test_is_flagged_experimental(self) -> None:
        with self.assertLogs("biocircuit.schedule", level="WARNING"):
            signal = ContinuousSignal(lambda t: 2.0 * t, (0.0, 10.0))
        self.assertEqual(4.0, signal(2.0))
        self.assertEqual((), signal.breakpoints)
        self.assertEqual((0.0, 10.0), signal.bounds())


class DisturbanceInputsTest(unittest.TestCase):
    def test_nominal(self) -> None:
        self.assertEqual((0.0, 0.0, 1.0, 1.0, 1.0), DisturbanceInputs().at(0))

    def test_breakpoints_are_merged(self) -> None:
        inputs = DisturbanceInputs(
            d1=[(0.0, 1.0), (5.0, 0.5)], H_GRN=[(0.0, 0.0), (2.0, 1.0)]
        )
        self.assertEqual((2.0, 5.0), inputs.breakpoints)
        self.assertEqual((1.0, 0.0, 0.5, 1.0, 1.0), inputs.at(6.0))

    def test_invalid_channels(self) -> None:
        with self.assertRaises(ParameterError):
            DisturbanceInputs(H_GRN=-1.0)
        with self.assertRaises(ParameterError):
            DisturbanceInputs(d1=[(0.0, 1.0), (1.0, 0.0)])
        with self.assertRaises(ParameterError):
            DisturbanceInputs(decay=-2.0)


if __name__ == "__main__":
    unittest.main()
