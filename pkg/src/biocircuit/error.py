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
""" Definition of errors and error handling classes.

    The module contains the exception hierarchy of the package, the
    ZeroOrderViolated warning, an abstract ErrorHandler class and three
    simple derivations:

    - A NullErrorHandler, which ignores any error.
    - A StdErrErrorHandler writing all errors to stderr
    - A LoggingErrorHandler using the logging module to handle exceptions.
"""

from abc import abstractmethod
from typing import Any, Optional, TextIO
import logging
import sys


class BiocircuitError(Exception):
    """Base class of all errors raised by this package."""


class ParameterError(BiocircuitError, ValueError):
    """A parameter set violates one of its invariants."""


class IntegrationError(BiocircuitError):
    """The numerical integration could not be completed."""


class StepSizeUnderflow(IntegrationError):
    """The step size dropped below the configured minimum. Relaxing the
    tolerances usually helps."""


class NonFiniteState(IntegrationError):
    """The state vector became infinite or NaN."""


class NoConvergence(IntegrationError):
    """The steady-state criterion was not met before the horizon.

    The trajectory computed so far is kept, so callers can inspect it.
    """

    def __init__(self, message: str, trajectory: Any = None) -> None:
        """Creates a new instance.

        Args:
            message (str): The failure description.
            trajectory (Trajectory, optional): The trajectory up to the
                horizon. Defaults to None.
        """
        super().__init__(message)
        self.trajectory = trajectory


class NotAnEquilibrium(BiocircuitError):
    """A point handed to the stability classification is not (close to) an
    equilibrium."""


class GridTooCoarse(BiocircuitError):
    """A sampled trajectory is too coarse for numerical differentiation."""


class EmptySeries(BiocircuitError, ValueError):
    """An emitter received no data."""


class ScenarioError(BiocircuitError):
    """Unknown scenario id or undeclared override."""


class ConfigError(BiocircuitError):
    """A configuration text could not be resolved."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        other_line: Optional[int] = None,
    ) -> None:
        """Creates a new instance.

        Args:
            message (str): The failure description.
            line (Optional[int]): The offending line number, if any.
            other_line (Optional[int]): A second line taking part in the
                failure (e.g. the first definition of a duplicate key).
        """
        self.line = line
        self.other_line = other_line
        super().__init__(self.__format(message))

    def __format(self, message: str) -> str:
        if self.line is None:
            return message
        if self.other_line is None:
            return "line {}: {}".format(self.line, message)
        return "line {}: {} (first defined on line {})".format(
            self.line, message, self.other_line
        )


class ZeroOrderViolated(UserWarning):
    """The Michaelis-Menten cycle left its zero-order regime along a
    trajectory."""


class ErrorHandler:
    """Receives the failures a scenario step or an output sink captures
    instead of raising them."""

    @abstractmethod
    def handle(self, message: str, error: Exception) -> bool:
        """Records a captured failure.

        Args:
            message (str): The failed step, e.g. ``scenario.qic_step: epsilon
                scan failed``, or the sink operation.
            error (Exception): The captured error.

        Returns:
            bool: True if the failure was recorded somewhere.
        """


class NullErrorHandler(ErrorHandler):
    """Drops failures. The failed checks still carry the message."""

    def handle(self, message: str, _: Exception) -> bool:
        return True


class StdErrErrorHandler(ErrorHandler):
    """Prints ``<step>: <error>`` lines, by default to stderr."""

    def __init__(self, stream: Optional[TextIO] = None) -> None:
        self.__stream = stream

    def handle(self, message: str, error: Exception) -> bool:
        (self.__stream or sys.stderr).write("{}: {}\n".format(message, error))
        return True


class LoggingErrorHandler(ErrorHandler):
    """Logs failures with their traceback at ERROR level. This is what the
    scenario runner uses when the caller passes no handler."""

    def __init__(self, logger: Optional[logging.Logger] = None) -> None:
        """
        Args:
            logger (logging.Logger, optional): The target logger. Defaults to
                the logger of this module.
        """
        self.__logger: logging.Logger = logger or logging.getLogger(__name__)

    def handle(self, message: str, error: Exception) -> bool:
        self.__logger.error(message, exc_info=error)
        return True
