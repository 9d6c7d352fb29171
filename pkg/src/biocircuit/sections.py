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
""" Low-level reader of the sectioned key = value text format.

    The format is shared by run configurations and the reference constant
    files::

        # comment
        [section]
        key = value

    Values are kept as text together with their line numbers; typed access
    goes through parse_number, parse_pairs and parse_choice.
"""

from dataclasses import dataclass
import math
import re
from typing import Dict, List, Sequence, Tuple

from .error import ConfigError

_SECTION = re.compile(r"^\[\s*([A-Za-z0-9_.]+)\s*\]$")
_ENTRY = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")
_NUMBER = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")
_PAIR = re.compile(r"\(\s*([^(),]*?)\s*,\s*([^(),]*?)\s*\)")
_WORD = re.compile(r"^[a-z][a-z0-9_]*$")


@dataclass(frozen=True)
class Entry:
    """A raw value with the line it was read from."""

    text: str
    line: int


@dataclass
class Section:
    """The entries of one section in reading order."""

    name: str
    line: int
    entries: Dict[str, Entry]


def parse_sections(text: str) -> Dict[str, Section]:
    """Splits a text into sections.

    Args:
        text (str): The text.

    Raises:
        ConfigError: On a malformed line, an entry outside any section, a
            duplicate section or a duplicate key.

    Returns:
        Dict[str, Section]: The sections by name, in reading order.
    """
    sections: Dict[str, Section] = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith(";"):
            continue
        header = _SECTION.match(line)
        if header:
            name = header.group(1)
            if name in sections:
                raise ConfigError(
                    "duplicate section [{}]".format(name),
                    number,
                    sections[name].line,
                )
            current = sections[name] = Section(name, number, {})
            continue
        entry = _ENTRY.match(line)
        if entry is None:
            raise ConfigError("cannot parse '{}'".format(line[:40]), number)
        if current is None:
            raise ConfigError("entry outside of any section", number)
        key, value = entry.group(1), entry.group(2).strip()
        if key in current.entries:
            raise ConfigError(
                "duplicate key '{}' in [{}]".format(key, current.name),
                number,
                current.entries[key].line,
            )
        current.entries[key] = Entry(value, number)
    return sections


def parse_number(entry: Entry, key: str = "value") -> float:
    """Reads a finite decimal number with optional exponent.

    Raises:
        ConfigError: If the text is not such a number.
    """
    text = entry.text
    if not _NUMBER.match(text):
        raise ConfigError(
            "'{}' expects a number, got '{}'".format(key, text[:40]),
            entry.line,
        )
    value = float(text)
    if not math.isfinite(value):
        raise ConfigError("'{}' is not finite".format(key), entry.line)
    return value


def parse_integer(entry: Entry, key: str = "value") -> int:
    """Reads a number that must be integral."""
    value = parse_number(entry, key)
    if value != int(value):
        raise ConfigError("'{}' expects an integer".format(key), entry.line)
    return int(value)


def parse_pairs(entry: Entry, key: str = "value") -> List[Tuple[float, float]]:
    """Reads a list of pairs '(a, b), (c, d), ...'.

    Raises:
        ConfigError: If the text is not such a list.
    """
    text = entry.text
    pairs = []
    position = 0
    for match in _PAIR.finditer(text):
        gap = text[position : match.start()].strip()
        if gap != ("," if pairs else ""):
            break
        first = parse_number(Entry(match.group(1), entry.line), key)
        second = parse_number(Entry(match.group(2), entry.line), key)
        pairs.append((first, second))
        position = match.end()
    if not pairs or text[position:].strip():
        raise ConfigError(
            "'{}' expects pairs '(a, b), ...', got '{}'".format(
                key, text[:40]
            ),
            entry.line,
        )
    return pairs


def parse_choice(
    entry: Entry, allowed: Sequence[str], key: str = "value"
) -> str:
    """Reads one of a fixed set of words."""
    if not _WORD.match(entry.text) or entry.text not in allowed:
        raise ConfigError(
            "'{}' must be one of {}, got '{}'".format(
                key, ", ".join(allowed), entry.text[:40]
            ),
            entry.line,
        )
    return entry.text
