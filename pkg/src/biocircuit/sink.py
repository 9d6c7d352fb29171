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
""" Report sinks receiving named CSV, SVG and text payloads. A sink is a
    context manager opening and closing its destination; failures inside
    the context are handed to an error handler and propagated.
"""
from abc import abstractmethod
from pathlib import Path
import re
from types import MappingProxyType, TracebackType
from typing import Dict, List, Mapping, Optional, Tuple, Type, Union

from .error import ErrorHandler, NullErrorHandler, ParameterError

_FILE_NAME = re.compile(r"^[a-z0-9_][a-z0-9_.-]*$")


class ReportSink:
    """Represents an abstracted destination of report payloads."""

    def __init__(self, error_handler: Optional[ErrorHandler] = None) -> None:
        """Creates a new instance of the sink.

        Args:
            error_handler (ErrorHandler, optional): The error handler to use.
        """
        self.__error_handler: ErrorHandler = (
            error_handler or NullErrorHandler()
        )
        self.__open: bool = False
        self.__written: List[str] = []

    @abstractmethod
    def _open(self) -> None:
        """Prepares the destination."""

    @abstractmethod
    def _store(self, name: str, payload: bytes) -> None:
        """Stores one payload under a file name."""

    def open(self) -> None:
        """Opens the sink.

        Raises:
            ParameterError: If the sink is already open.
        """
        if self._open_state:
            raise ParameterError("Sink is already open")
        self._open()
        self._toggle_open_state()
        self.__written = []

    def close(self) -> None:
        """Closes the sink.

        Raises:
            ParameterError: If the sink is not open.
        """
        if not self._open_state:
            raise ParameterError("Sink is not open")
        self._toggle_open_state()

    def write(self, name: str, payload: Union[bytes, str]) -> None:
        """Writes one payload.

        Args:
            name (str): A plain file name such as ``titration.csv``.
            payload (Union[bytes, str]): The content; text is UTF-8 encoded.

        Raises:
            ParameterError: If the sink is closed, the name is not a plain
                file name or was written before.
        """
        if not self._open_state:
            raise ParameterError("Sink is not open")
        if not _FILE_NAME.match(name):
            raise ParameterError("Invalid payload name '{}'".format(name))
        if name in self.__written:
            raise ParameterError("Payload '{}' written twice".format(name))
        if isinstance(payload, str):
            payload = payload.encode("utf-8")
        self._store(name, payload)
        self.__written.append(name)

    @property
    def written(self) -> Tuple[str, ...]:
        """The names written since the sink was opened."""
        return tuple(self.__written)

    def _toggle_open_state(self) -> None:
        """Switches between the open and the closed state."""
        self._open_state = not self._open_state

    def __set_open_state(self, value: bool) -> None:
        self.__open = value

    def __get_open_state(self) -> bool:
        return self.__open

    _open_state = property(__get_open_state, __set_open_state)

    def __enter__(self) -> "ReportSink":
        """Opens the sink for the duration of a context.

        Returns:
            ReportSink: The sink.
        """
        try:
            self.open()
        except OSError as error:
            self.__error_handler.handle("Error while opening sink", error)
            raise
        return self

    def __exit__(
        self,
        _type: Optional[Type[BaseException]],
        value: Optional[BaseException],
        _traceback: Optional[TracebackType],
    ) -> bool:
        """Leaves the current context by closing this instance.

        Returns:
            bool: Always False; errors propagate after being handled.
        """
        if self._open_state:
            self.close()
        if isinstance(value, Exception):
            self.__error_handler.handle("Report sink failure", value)
        return False


class DirectorySink(ReportSink):
    """A sink writing one file per payload into a directory."""

    def __init__(
        self,
        directory: Union[str, Path],
        error_handler: Optional[ErrorHandler] = None,
    ) -> None:
        """Creates a sink for a directory; it is created on opening.

        Args:
            directory (Union[str, Path]): The output directory.
            error_handler (ErrorHandler, optional): The error handler to use.
        """
        self.__directory = Path(directory)
        super().__init__(error_handler)

    @property
    def directory(self) -> Path:
        """The output directory."""
        return self.__directory

    def _open(self) -> None:
        self.__directory.mkdir(parents=True, exist_ok=True)

    def _store(self, name: str, payload: bytes) -> None:
        self.__directory.joinpath(name).write_bytes(payload)


class MemorySink(ReportSink):
    """A sink keeping the payloads in memory."""

    def __init__(self, error_handler: Optional[ErrorHandler] = None) -> None:
        self.__payloads: Dict[str, bytes] = {}
        super().__init__(error_handler)

    @property
    def payloads(self) -> Mapping[str, bytes]:
        """The payloads by name."""
        return MappingProxyType(self.__payloads)

    def _open(self) -> None:
        self.__payloads.clear()

    def _store(self, name: str, payload: bytes) -> None:
        self.__payloads[name] = payload
