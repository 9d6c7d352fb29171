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
""" Definition of named scenarios. A scenario bundles models, disturbances
    and analyses into a pipeline that produces tables, figures and verdicts
    of built-in checks. This module holds the abstract scenario and the
    context its pipeline writes to.
"""

from abc import abstractmethod
from contextlib import contextmanager
from dataclasses import dataclass
import logging
import math
import os
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .base import NamedObject, PrefixNamespace
from .catalog import reference_numbers
from .emit import CsvTable, PlotStyle, Series, emit_csv, emit_svg
from .error import ErrorHandler, NullErrorHandler, ScenarioError
from .protocol import (
    DEFAULT_SEED,
    SEED_ENVIRONMENT_VARIABLE,
    VERDICT_FAIL,
    VERDICT_PASS,
)

_logger = logging.getLogger(__name__)
_NAMESPACE = PrefixNamespace("scenario")


def resolve_seed(seed: Optional[int] = None) -> int:
    """The seed to use: the given one, else BIOCIRCUIT_SEED, else 42.

    Raises:
        ScenarioError: If the environment variable is not an integer.
    """
    if seed is not None:
        return int(seed)
    text = os.environ.get(SEED_ENVIRONMENT_VARIABLE)
    if text is None or not text.strip():
        return DEFAULT_SEED
    try:
        return int(text.strip())
    except ValueError:
        raise ScenarioError(
            "{} must be an integer, got '{}'".format(
                SEED_ENVIRONMENT_VARIABLE, text
            )
        ) from None


@dataclass(frozen=True)
class Verdict:
    """The outcome of one built-in check."""

    check_id: str
    passed: bool
    message: str

    def line(self) -> str:
        """The report line ``PASS|FAIL <check-id> <message>``."""
        return "{} {} {}".format(
            VERDICT_PASS if self.passed else VERDICT_FAIL,
            self.check_id,
            " ".join(self.message.split()),
        )


class ScenarioContext:
    """Collects the outputs and verdicts of one scenario run."""

    def __init__(
        self, scenario: "Scenario", error_handler: ErrorHandler
    ) -> None:
        self.__scenario = scenario
        self.__error_handler = error_handler
        self.__tables: Dict[str, bytes] = {}
        self.__figures: Dict[str, bytes] = {}
        self.__verdicts: List[Verdict] = []

    @property
    def parameters(self) -> Mapping[str, float]:
        """The resolved parameters of the scenario."""
        return self.__scenario.parameters

    @property
    def seed(self) -> int:
        """The seed of the run."""
        return self.__scenario.seed

    @property
    def tables(self) -> Mapping[str, bytes]:
        """The rendered tables by name."""
        return MappingProxyType(self.__tables)

    @property
    def figures(self) -> Mapping[str, bytes]:
        """The rendered figures by name."""
        return MappingProxyType(self.__figures)

    @property
    def verdicts(self) -> Tuple[Verdict, ...]:
        """The verdicts in the order they were recorded."""
        return tuple(self.__verdicts)

    def table(self, name: str, table: CsvTable) -> None:
        """Renders and keeps a table."""
        self.__tables[name] = emit_csv(table)

    def figure(
        self, name: str, series: Sequence[Series], style: PlotStyle
    ) -> None:
        """Renders and keeps a figure."""
        self.__figures[name] = emit_svg(series, style)

    def check(self, check_id: str, passed: bool, message: str) -> None:
        """Records the verdict of a check.

        Raises:
            ScenarioError: If the check is not declared or already decided.
        """
        if check_id not in self.__scenario.CHECKS:
            raise ScenarioError("Undeclared check '{}'".format(check_id))
        if any(v.check_id == check_id for v in self.__verdicts):
            raise ScenarioError("Check '{}' decided twice".format(check_id))
        self.__verdicts.append(Verdict(check_id, bool(passed), message))

    def decided(self, check_id: str) -> bool:
        """True if the check has a verdict."""
        return any(v.check_id == check_id for v in self.__verdicts)

    @contextmanager
    def step(self, description: str, *check_ids: str) -> Iterator[None]:
        """Runs one pipeline step.

        An error inside the step is handed to the error handler; the listed
        checks that are still undecided fail with the error as message.
        """
        _logger.debug("%s: %s", self.__scenario.get_full_name(), description)
        try:
            yield
        except Exception as error:  # pylint: disable=broad-except
            self.__error_handler.handle(
                "{}: {} failed".format(
                    self.__scenario.get_full_name(), description
                ),
                error,
            )
            for check_id in check_ids:
                if not self.decided(check_id):
                    self.check(
                        check_id,
                        False,
                        "{} failed: {}: {}".format(
                            description, type(error).__name__, error
                        ),
                    )


class Scenario(NamedObject):
    """A named, versioned experiment.

    Subclasses declare their identifier, a one-line description, the figure
    they correspond to, their checks and outputs, and implement run. The
    defaults of the parameters live in the reference section
    ``scenario.<id>``.
    """

    ID = ""
    DESCRIPTION = ""
    FIGURE = ""
    CHECKS: Tuple[str, ...] = ()
    TABLES: Tuple[str, ...] = ()
    FIGURES: Tuple[str, ...] = ()

    def __init__(
        self,
        overrides: Optional[Mapping[str, float]] = None,
        seed: Optional[int] = None,
    ) -> None:
        """Creates a new instance.

        Args:
            overrides (Mapping[str, float], optional): Values replacing
                declared defaults.
            seed (int, optional): The seed of random draws. Defaults to
                BIOCIRCUIT_SEED or 42.

        Raises:
            ScenarioError: If an override names an undeclared parameter or
                is not a finite number.
        """
        parameters = self.defaults()
        for key, value in (overrides or {}).items():
            if key not in parameters:
                raise ScenarioError(
                    "Scenario '{}' has no parameter '{}', expected one "
                    "of {}".format(self.ID, key, ", ".join(parameters))
                )
            if isinstance(value, bool) or not isinstance(
                value, (int, float)
            ):
                raise ScenarioError(
                    "Override '{}' must be a number".format(key)
                )
            if not math.isfinite(value):
                raise ScenarioError(
                    "Override '{}' must be finite".format(key)
                )
            parameters[key] = float(value)
        self.__parameters = MappingProxyType(parameters)
        self.__seed = resolve_seed(seed)

    @classmethod
    def defaults(cls) -> Dict[str, float]:
        """The declared parameters with their reference values."""
        return reference_numbers("scenario.{}".format(cls.ID))

    @property
    def parameters(self) -> Mapping[str, float]:
        """The resolved parameters."""
        return self.__parameters

    @property
    def seed(self) -> int:
        """The seed of random draws."""
        return self.__seed

    def get_name(self) -> str:
        return self.ID

    def get_full_name(self) -> str:
        return _NAMESPACE.get_full_name(self)

    @abstractmethod
    def run(self, context: ScenarioContext) -> None:
        """Executes the pipeline, writing outputs and verdicts to the
        context."""


def new_context(
    scenario: Scenario, error_handler: Optional[ErrorHandler] = None
) -> ScenarioContext:
    """A fresh context for one run of a scenario."""
    return ScenarioContext(scenario, error_handler or NullErrorHandler())
