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
""" Run configuration files.

    A configuration is a sectioned key = value text::

        [model]
        family = qic
        loop = open
        k2 = 1000

        [disturbances]
        d1 = (0, 1), (40, 0.5)

        [integrator]
        rtol = 1e-8
        t_end = 100

    The sections are model, disturbances, integrator, sweep, ensemble and
    output; only model is required. Every value is validated before any
    computation and the first failure is reported with its line number.
"""

from dataclasses import dataclass, field
import math
import re
from typing import Callable, Dict, Optional, Tuple, Union

from .catalog import ModelFamily, ModelSpec, family
from .error import ConfigError, ParameterError
from .protocol import (
    CONFIG_SECTIONS,
    KEY_FAMILY,
    SECTION_DISTURBANCES,
    SECTION_ENSEMBLE,
    SECTION_INTEGRATOR,
    SECTION_MODEL,
    SECTION_OUTPUT,
    SECTION_SWEEP,
)
from .schedule import DisturbanceInputs, Schedule, Signal
from .sections import (
    Entry,
    Section,
    parse_choice,
    parse_integer,
    parse_number,
    parse_pairs,
    parse_sections,
)
from .system import IntegratorConfig

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_PATH = re.compile(r"^[^\x00-\x1f]+$")
_NUMBER = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")

# disturbance key -> DisturbanceInputs field
_CHANNELS = {"H": "H_GRN", "r": "r", "d1": "d1", "d2": "d2", "decay": "decay"}
_INTEGRATOR_FLOATS = ("rtol", "atol", "h_init", "h_max", "h_min", "t_max")
_INTEGRATOR_FLOATS += ("ss_tol",)
_INTEGRATOR_INTEGERS = ("ss_window", "max_steps")
_RUN_KEYS = ("t_end", "dt", "x0")
_SWEEP_KEYS = ("param", "from", "to", "points", "n_starts")
_ENSEMBLE_KEYS = ("param", "sigma", "n", "seed")
_OUTPUT_KEYS = ("directory",)

DEFAULT_T_END = 100.0
DEFAULT_SIGMA = 0.5
DEFAULT_ENSEMBLE_SIZE = 1000


@dataclass(frozen=True)
class SweepSettings:
    """A one-parameter sweep."""

    param: str
    start: float
    stop: float
    points: int
    n_starts: Optional[int] = None


@dataclass(frozen=True)
class EnsembleSettings:
    """A log-normal ensemble over one parameter or copy-number channel."""

    param: str = "d"
    sigma: float = DEFAULT_SIGMA
    n: int = DEFAULT_ENSEMBLE_SIZE
    seed: Optional[int] = None


@dataclass(frozen=True)
class RunConfig:
    """A resolved configuration."""

    spec: ModelSpec
    disturbances: DisturbanceInputs = field(default_factory=DisturbanceInputs)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    t_end: float = DEFAULT_T_END
    dt: Optional[float] = None
    x0: Optional[Tuple[float, ...]] = None
    sweep: Optional[SweepSettings] = None
    ensemble: EnsembleSettings = field(default_factory=EnsembleSettings)
    output_directory: Optional[str] = None


def _check_keys(section: Section, allowed) -> None:
    for key, entry in section.entries.items():
        if key not in allowed:
            raise ConfigError(
                "unknown key '{}' in [{}], expected one of {}".format(
                    key, section.name, ", ".join(allowed)
                ),
                entry.line,
            )


def _validated(entry: Entry, check: Callable[[], object]):
    """Runs a constructor and reports its ParameterError at the entry."""
    try:
        return check()
    except ParameterError as error:
        raise ConfigError(str(error), entry.line) from error


def _positive(entry: Entry, key: str) -> float:
    value = parse_number(entry, key)
    if not value > 0:
        raise ConfigError(
            "'{}' must be positive, got {!r}".format(key, value), entry.line
        )
    return value


def _positive_integer(entry: Entry, key: str, least: int = 1) -> int:
    value = parse_integer(entry, key)
    if value < least:
        raise ConfigError(
            "'{}' must be at least {}".format(key, least), entry.line
        )
    return value


def _name(entry: Entry, key: str) -> str:
    if not _NAME.match(entry.text):
        raise ConfigError(
            "'{}' expects a name, got '{}'".format(key, entry.text[:40]),
            entry.line,
        )
    return entry.text


def _model(section: Section) -> ModelSpec:
    entries = section.entries
    if KEY_FAMILY not in entries:
        raise ConfigError("[model] needs a 'family' key", section.line)
    entry = entries[KEY_FAMILY]
    target: ModelFamily = _validated(entry, lambda: family(entry.text))

    options: Dict[str, str] = {}
    for key, allowed in target.CHOICES.items():
        if key in entries:
            options[key] = parse_choice(entries[key], allowed, key)
    names = target.parameter_names(
        dict(target.default_options(), **options)
    )
    _check_keys(section, (KEY_FAMILY,) + tuple(target.CHOICES) + names)

    values: Dict[str, float] = {}
    for key, entry in entries.items():
        if key in names:
            value = parse_number(entry, key)
            _validated(entry, lambda: target.resolve({key: value}, options))
            values[key] = value
    return _validated(
        Entry("", section.line), lambda: target.resolve(values, options)
    )


def _signal(entry: Entry, key: str) -> Union[float, Signal]:
    if entry.text.lstrip().startswith("("):
        pairs = parse_pairs(entry, key)
        return _validated(entry, lambda: Schedule(pairs))
    return parse_number(entry, key)


def _disturbances(section: Section) -> DisturbanceInputs:
    _check_keys(section, tuple(_CHANNELS))
    channels = {}
    for key, entry in section.entries.items():
        signal = _signal(entry, key)
        name = _CHANNELS[key]
        _validated(entry, lambda: DisturbanceInputs(**{name: signal}))
        channels[name] = signal
    return DisturbanceInputs(**channels)


def _integrator(section: Section) -> Tuple[IntegratorConfig, Dict]:
    keys = _INTEGRATOR_FLOATS + _INTEGRATOR_INTEGERS + _RUN_KEYS
    _check_keys(section, keys)
    settings: Dict[str, object] = {}
    run: Dict[str, object] = {}
    for key, entry in section.entries.items():
        if key in _INTEGRATOR_FLOATS:
            value = parse_number(entry, key)
        elif key in _INTEGRATOR_INTEGERS:
            value = parse_integer(entry, key)
        elif key == "x0":
            run[key] = tuple(
                parse_number(Entry(part.strip(), entry.line), key)
                for part in entry.text.split(",")
            )
            continue
        else:
            run[key] = _positive(entry, key)
            continue
        _validated(entry, lambda: IntegratorConfig(**{key: value}))
        settings[key] = value
    return IntegratorConfig(**settings), run


def _sweep(section: Section, spec: ModelSpec) -> SweepSettings:
    _check_keys(section, _SWEEP_KEYS)
    entries = section.entries
    for key in ("param", "from", "to", "points"):
        if key not in entries:
            raise ConfigError(
                "[sweep] needs a '{}' key".format(key), section.line
            )
    param = _name(entries["param"], "param")
    if param not in spec.values:
        raise ConfigError(
            "'{}' is not a parameter of '{}'".format(param, spec.name),
            entries["param"].line,
        )
    start = parse_number(entries["from"], "from")
    stop = parse_number(entries["to"], "to")
    if not stop > start:
        raise ConfigError("[sweep] needs from < to", entries["to"].line)
    points = _positive_integer(entries["points"], "points", least=2)
    n_starts = None
    if "n_starts" in entries:
        n_starts = _positive_integer(entries["n_starts"], "n_starts")
    return SweepSettings(param, start, stop, points, n_starts)


def _ensemble(section: Section, spec: ModelSpec) -> EnsembleSettings:
    _check_keys(section, _ENSEMBLE_KEYS)
    entries = section.entries
    settings: Dict[str, object] = {}
    if "param" in entries:
        param = _name(entries["param"], "param")
        if param not in ("d", "d1", "d2") and param not in spec.values:
            raise ConfigError(
                "'{}' is neither a parameter of '{}' nor a copy-number "
                "channel".format(param, spec.name),
                entries["param"].line,
            )
        settings["param"] = param
    if "sigma" in entries:
        settings["sigma"] = _positive(entries["sigma"], "sigma")
    if "n" in entries:
        settings["n"] = _positive_integer(entries["n"], "n", least=2)
    if "seed" in entries:
        settings["seed"] = _positive_integer(entries["seed"], "seed", 0)
    return EnsembleSettings(**settings)


def _output(section: Section) -> Optional[str]:
    _check_keys(section, _OUTPUT_KEYS)
    entry = section.entries.get("directory")
    if entry is None:
        return None
    if not _PATH.match(entry.text):
        raise ConfigError("'directory' expects a path", entry.line)
    return entry.text


def parse_config(text: Union[str, bytes]) -> RunConfig:
    """Parses and validates a run configuration.

    Args:
        text (Union[str, bytes]): The configuration; bytes must be UTF-8.

    Raises:
        ConfigError: On the first problem, with its line number where there
            is one. No partial configuration is ever returned.

    Returns:
        RunConfig: The resolved configuration.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as error:
            raise ConfigError(
                "configuration is not UTF-8 text (byte {})".format(
                    error.start
                )
            ) from None
    sections = parse_sections(text)
    for name, section in sections.items():
        if name not in CONFIG_SECTIONS:
            raise ConfigError(
                "unknown section [{}], expected one of {}".format(
                    name, ", ".join(CONFIG_SECTIONS)
                ),
                section.line,
            )
    if SECTION_MODEL not in sections:
        raise ConfigError("missing section [{}]".format(SECTION_MODEL))

    spec = _model(sections[SECTION_MODEL])
    settings: Dict[str, object] = {"spec": spec}
    if SECTION_DISTURBANCES in sections:
        settings["disturbances"] = _disturbances(
            sections[SECTION_DISTURBANCES]
        )
    if SECTION_INTEGRATOR in sections:
        section = sections[SECTION_INTEGRATOR]
        settings["integrator"], run = _integrator(section)
        if "x0" in run:
            entry = section.entries["x0"]
            dim = _validated(entry, lambda: spec.system().dim)
            if len(run["x0"]) != dim:
                raise ConfigError(
                    "'x0' needs {} values for '{}'".format(dim, spec.name),
                    entry.line,
                )
        settings.update(run)
    if SECTION_SWEEP in sections:
        settings["sweep"] = _sweep(sections[SECTION_SWEEP], spec)
    if SECTION_ENSEMBLE in sections:
        settings["ensemble"] = _ensemble(sections[SECTION_ENSEMBLE], spec)
    if SECTION_OUTPUT in sections:
        settings["output_directory"] = _output(sections[SECTION_OUTPUT])
    return RunConfig(**settings)


def parse_override(text: str) -> Tuple[str, float]:
    """Parses a ``key=value`` override of a scenario parameter.

    Raises:
        ConfigError: If the text is not a name, '=' and a number.
    """
    key, separator, value = text.partition("=")
    key = key.strip()
    if not separator or not _NAME.match(key):
        raise ConfigError("expected key=value, got '{}'".format(text[:40]))
    number = value.strip()
    if not _NUMBER.match(number) or not math.isfinite(float(number)):
        raise ConfigError(
            "'{}' expects a finite number, got '{}'".format(key, number[:40])
        )
    return key, float(number)
