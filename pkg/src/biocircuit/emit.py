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
""" Rendering of tables and line plots into deterministic bytes.

    CSV: a header of column names followed by rows of decimals with 17
    significant digits, comma separated, LF line endings. SVG: a fixed
    800 x 500 matplotlib canvas with one line per series, axis labels and
    a legend.
    Identical inputs always give identical bytes.
"""

import csv
from dataclasses import dataclass
import io
import re
from typing import Optional, Sequence, Tuple
import matplotlib
from matplotlib.figure import Figure
import numpy as np

from .error import EmptySeries, ParameterError
from .protocol import (
    CSV_DIGITS,
    CSV_NEWLINE,
    CSV_SEPARATOR,
    SVG_HEIGHT,
    SVG_WIDTH,
)
from .system import Trajectory

_COLUMN = re.compile(r"^[a-z0-9_]+$")
_DPI = 72.0
_AXES = (0.1, 0.12, 0.7, 0.78)
_RC = {
    "svg.hashsalt": "biocircuit",
    "svg.fonttype": "none",
    "text.parse_math": False,
    "path.simplify": False,
}


def column_name(name: str) -> str:
    """Normalises a state or parameter name into a CSV column name."""
    return name.lower()


def format_number(value: float) -> str:
    """Renders a double with 17 significant digits."""
    return "{:.{}g}".format(float(value), CSV_DIGITS)


class CsvTable:
    """A rectangular table whose first column is the independent
    variable."""

    def __init__(
        self, columns: Sequence[str], rows: Sequence[Sequence[float]]
    ) -> None:
        """Creates a new instance.

        Args:
            columns (Sequence[str]): The column names; they are lowercased
                and must then consist of [a-z0-9_] and be unique.
            rows (Sequence[Sequence[float]]): The rows of finite numbers.

        Raises:
            ParameterError: On an invalid or duplicate name, a row of the
                wrong width or a non-finite value.
        """
        names = tuple(column_name(c) for c in columns)
        for name in names:
            if not _COLUMN.match(name):
                raise ParameterError(
                    "Invalid column name '{}'".format(name)
                )
        if len(set(names)) != len(names):
            raise ParameterError("Column names must be unique")
        if any(len(row) != len(names) for row in rows):
            raise ParameterError(
                "Every row needs {} values".format(len(names))
            )
        data = np.array(rows, dtype=float).reshape(len(rows), len(names))
        if not np.all(np.isfinite(data)):
            raise ParameterError("Table values must be finite")
        self.__columns = names
        self.__data = data
        self.__data.setflags(write=False)

    @classmethod
    def from_columns(
        cls, columns: Sequence[Tuple[str, Sequence[float]]]
    ) -> "CsvTable":
        """Creates a table from (name, values) pairs of equal length."""
        if not columns:
            raise EmptySeries("A table needs at least one column")
        lengths = {len(values) for _, values in columns}
        if len(lengths) > 1:
            raise ParameterError("Columns must have equal length")
        data = np.column_stack([np.asarray(v, float) for _, v in columns])
        return cls([name for name, _ in columns], data.tolist())

    @property
    def columns(self) -> Tuple[str, ...]:
        """The column names."""
        return self.__columns

    @property
    def data(self) -> np.ndarray:
        """The values, one row per record."""
        return self.__data

    def __len__(self) -> int:
        return self.__data.shape[0]


def trajectory_table(trajectory: Trajectory) -> CsvTable:
    """The samples of a trajectory with time as first column."""
    return CsvTable(
        ("t",) + trajectory.names,
        np.column_stack([trajectory.times, trajectory.states]).tolist(),
    )


def emit_csv(table: CsvTable) -> bytes:
    """Renders a table.

    Raises:
        EmptySeries: If the table has no columns or no rows.

    Returns:
        bytes: The UTF-8 encoded CSV text.
    """
    if not table.columns or len(table) == 0:
        raise EmptySeries("Cannot render an empty table")
    buffer = io.StringIO()
    writer = csv.writer(
        buffer,
        delimiter=CSV_SEPARATOR,
        lineterminator=CSV_NEWLINE,
        quoting=csv.QUOTE_NONE,
    )
    writer.writerow(table.columns)
    for row in table.data:
        writer.writerow([format_number(value) for value in row])
    return buffer.getvalue().encode("utf-8")


@dataclass(frozen=True)
class Series:
    """One named line of a plot."""

    name: str
    x: Sequence[float]
    y: Sequence[float]


@dataclass(frozen=True)
class PlotStyle:
    """Title and axis labels of a plot."""

    title: str = ""
    x_label: str = "t"
    y_label: str = ""


def trajectory_series(
    trajectory: Trajectory, names: Optional[Sequence[str]] = None
) -> Tuple[Series, ...]:
    """One series per state coordinate over time."""
    return tuple(
        Series(name, trajectory.times, trajectory.column(name))
        for name in (names or trajectory.names)
    )


def _limits(values: np.ndarray) -> Tuple[float, float]:
    low, high = float(values.min()), float(values.max())
    if high - low <= 1e-12 * max(1.0, abs(low), abs(high)):
        pad = max(0.5, 0.05 * abs(low))
        return low - pad, high + pad
    return low, high


def emit_svg(
    series: Sequence[Series], style: PlotStyle = PlotStyle()
) -> bytes:
    """Renders a line plot.

    Each series becomes a line group with the id ``series_<index>``.

    Args:
        series (Sequence[Series]): The lines, drawn in order.
        style (PlotStyle, optional): Title and axis labels.

    Raises:
        EmptySeries: If there is no series or a series has no point.
        ParameterError: If x and y of a series differ in length or hold a
            non-finite value.

    Returns:
        bytes: A self-contained SVG document.
    """
    if not series or any(len(s.x) == 0 for s in series):
        raise EmptySeries("Cannot plot an empty series")
    for line in series:
        if len(line.x) != len(line.y):
            raise ParameterError(
                "Series '{}' has x and y of different length".format(
                    line.name
                )
            )
    xs = np.concatenate([np.asarray(s.x, float) for s in series])
    ys = np.concatenate([np.asarray(s.y, float) for s in series])
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ParameterError("Series values must be finite")

    with matplotlib.rc_context(_RC):
        figure = Figure(figsize=(SVG_WIDTH / _DPI, SVG_HEIGHT / _DPI))
        axes = figure.add_axes(_AXES)
        for index, line in enumerate(series):
            axes.plot(
                np.asarray(line.x, float),
                np.asarray(line.y, float),
                label=line.name,
                gid="series_{}".format(index),
            )
        axes.set_xlim(*_limits(xs))
        axes.set_ylim(*_limits(ys))
        axes.set_title(style.title)
        axes.set_xlabel(style.x_label)
        axes.set_ylabel(style.y_label)
        axes.legend(loc="upper left", bbox_to_anchor=(1.02, 1.0))
        buffer = io.BytesIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()
