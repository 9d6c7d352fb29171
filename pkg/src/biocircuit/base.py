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

"""Definition of the basic types.
"""

from abc import ABC, abstractmethod
from dataclasses import asdict, fields, replace
import math
from typing import Any, ClassVar, Dict, Tuple

from .error import ParameterError


class NamedObject(ABC):
    """The basic named object class. Model families and scenarios are named
    objects; their full name is used for report paths and log records."""

    @abstractmethod
    def get_name(self) -> str:
        """Generates the name of this instance.

        Returns:
            str: The name.
        """

    @abstractmethod
    def get_full_name(self) -> str:
        """Generates the full name of this instance.

        Returns:
            str: The full name of this instance.
        """


class Namespace(ABC):
    """Provides a namespace for Named objects."""

    @abstractmethod
    def get_full_name(self, instance: NamedObject) -> str:
        """Calculates the full name of the named object instance

        Args:
            instance (NamedObject): The named object to wrap up

        Returns:
            str: The full name.
        """


class PrefixNamespace(Namespace):
    """A namespace prepending a fixed prefix, e.g. ``scenario:qic_step``."""

    def __init__(self, prefix: str) -> None:
        """Creates a new instance.

        Args:
            prefix (str): The prefix to use.
        """
        self.__prefix = prefix

    def get_full_name(self, instance: NamedObject) -> str:
        return "{}:{}".format(self.__prefix, instance.get_name())


class PositiveParameters:
    """Mixin for frozen parameter dataclasses.

    Every numeric field must be finite and strictly positive, except the
    fields named in NONNEGATIVE, which may also be zero.
    """

    NONNEGATIVE: ClassVar[Tuple[str, ...]] = ()

    def __post_init__(self) -> None:
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                continue
            if not math.isfinite(value):
                raise ParameterError(
                    "Parameter '{}' must be finite".format(item.name)
                )
            if item.name in self.NONNEGATIVE:
                if value < 0:
                    raise ParameterError(
                        "Parameter '{}' must be nonnegative, got {!r}".format(
                            item.name, value
                        )
                    )
            elif not value > 0:
                raise ParameterError(
                    "Parameter '{}' must be positive, got {!r}".format(
                        item.name, value
                    )
                )

    def with_values(self, **changes: Any) -> Any:
        """Creates a validated copy with some fields replaced."""
        return replace(self, **changes)

    def as_dict(self) -> Dict[str, Any]:
        """The fields as a dictionary."""
        return asdict(self)
