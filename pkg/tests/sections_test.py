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

from biocircuit.error import ConfigError
from biocircuit.sections import (
    Entry,
    parse_choice,
    parse_integer,
    parse_number,
    parse_pairs,
    parse_sections,
)

TEXT = """# leading comment
[model]
family = plant   # trailing comment
gamma = 2

[integrator]
rtol=1e-6
"""


class ParseSectionsTest(unittest.TestCase):
    def test_sections_and_lines(self) -> None:
        sections = parse_sections(TEXT)
        self.assertEqual(["model", "integrator"], list(sections))
        model = sections["model"]
        self.assertEqual(2, model.line)
        self.assertEqual(Entry("plant", 3), model.entries["family"])
        integrator = sections["integrator"]
        self.assertEqual(Entry("1e-6", 7), integrator.entries["rtol"])

    def test_duplicate_key_cites_both_lines(self) -> None:
        with self.assertRaises(ConfigError) as raised:
            parse_sections("[model]\ngamma = 1\n\ngamma = 2\n")
        self.assertEqual(4, raised.exception.line)
        self.assertEqual(2, raised.exception.other_line)
        self.assertIn("line 4", str(raised.exception))
        self.assertIn("line 2", str(raised.exception))

    def test_duplicate_section(self) -> None:
        with self.assertRaises(ConfigError) as raised:
            parse_sections("[model]\n[model]\n")
        self.assertEqual(2, raised.exception.line)
        self.assertEqual(1, raised.exception.other_line)

    def test_malformed_lines(self) -> None:
        for text, line in (
            ("gamma = 1\n", 1),
            ("[model]\njust words\n", 2),
            ("[model\n", 1),
            ("[model]\n1key = 2\n", 2),
        ):
            with self.subTest(text=text):
                with self.assertRaises(ConfigError) as raised:
                    parse_sections(text)
                self.assertEqual(line, raised.exception.line)


class ValueParserTest(unittest.TestCase):
    def test_numbers(self) -> None:
        for text, value in (
            ("1", 1.0),
            ("-2.5", -2.5),
            ("+.5", 0.5),
            ("1e-3", 1e-3),
            ("3.E2", 300.0),
        ):
            self.assertEqual(value, parse_number(Entry(text, 1)))
        for text in ("", "1e", "nan", "inf", "0x10", "1,0", "1e999", "- 1"):
            with self.subTest(text=text):
                with self.assertRaises(ConfigError):
                    parse_number(Entry(text, 1))

    def test_integers(self) -> None:
        self.assertEqual(200, parse_integer(Entry("2e2", 1)))
        with self.assertRaises(ConfigError):
            parse_integer(Entry("1.5", 1))

    def test_pairs(self) -> None:
        self.assertEqual(
            [(0.0, 1.0), (40.0, 0.5)],
            parse_pairs(Entry("(0, 1), (40, 0.5)", 1)),
        )
        for text in (
            "",
            "(0, 1) (2, 3)",
            ", (0, 1)",
            "(0, 1),",
            "(0, 1), x",
            "(0 1)",
            "(0, a)",
        ):
            with self.subTest(text=text):
                with self.assertRaises(ConfigError):
                    parse_pairs(Entry(text, 5))

    def test_choices(self) -> None:
        self.assertEqual("open", parse_choice(Entry("open", 1), ("open",)))
        with self.assertRaises(ConfigError):
            parse_choice(Entry("Open", 1), ("open",))


if __name__ == "__main__":
    unittest.main()
