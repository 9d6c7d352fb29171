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

import biocircuit


class BasicTest(unittest.TestCase):
    def test_public_names_resolve(self) -> None:
        for name in biocircuit.__all__:
            self.assertTrue(hasattr(biocircuit, name), name)

    def test_package_data_is_shipped(self) -> None:
        spec = biocircuit.model("plant")
        self.assertEqual("plant", spec.name)
        self.assertEqual(1.0, spec.values["gamma"])


if __name__ == "__main__":
    unittest.main()
