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
""" The model catalog: one ModelFamily per model, resolved against the
    versioned reference constant file.

    A ModelSpec is a family together with a flat mapping of numeric
    parameter values and a mapping of option words. Families turn specs into
    typed parameter sets, OdeSystem values, initial states, search boxes and
    (where one exists) closed-form steady outputs.
"""

from abc import abstractmethod
from dataclasses import dataclass, fields
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .base import NamedObject, PrefixNamespace
from .error import ConfigError, ParameterError
from .ffwd import FfwdParams, build_ffwd, ffwd_steady_state
from .grn import Control, GrnParams, build_grn
from .plant import PlantParams, build_plant, plant_steady_state
from .qic import Loop, QicParams, build_qic, qic_initial_state
from .repro import ReproParams, build_repro, repro_steady_state
from .schedule import DisturbanceInputs
from .sections import Section, parse_choice, parse_number, parse_sections
from .system import OdeSystem

REFERENCE_VERSION = 1
_NAMESPACE = PrefixNamespace("model")

Box = List[Tuple[float, float]]


@lru_cache(maxsize=None)
def _reference_text(version: int) -> str:
    package = resources.files(__package__).joinpath("constants")
    resource = package.joinpath("reference_v{}.cfg".format(version))
    if not resource.is_file():
        raise ParameterError(
            "No reference constants of version {}".format(version)
        )
    return resource.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def reference_sections(version: int = REFERENCE_VERSION) -> Dict[str, Section]:
    """The sections of a reference constant file.

    Raises:
        ParameterError: If the version is unknown or the file is damaged.
    """
    try:
        sections = parse_sections(_reference_text(version))
        declared = int(parse_number(sections["meta"].entries["version"]))
    except (ConfigError, KeyError) as error:
        raise ParameterError(
            "Damaged reference constants: {}".format(error)
        ) from error
    if declared != version:
        raise ParameterError(
            "Reference file declares version {}".format(declared)
        )
    return sections


def reference_numbers(
    section: str, version: int = REFERENCE_VERSION
) -> Dict[str, float]:
    """The numeric entries of a reference section; option words are
    skipped."""
    numbers = {}
    for key, entry in reference_sections(version)[section].entries.items():
        try:
            numbers[key] = parse_number(entry, key)
        except ConfigError:
            continue
    return numbers


def _field_names(cls) -> Tuple[str, ...]:
    return tuple(
        item.name
        for item in fields(cls)
        if item.type in (float, "float")
    )


def _take(values: Mapping[str, float], cls, **extra):
    names = _field_names(cls)
    return cls(**{k: v for k, v in values.items() if k in names}, **extra)


@dataclass(frozen=True)
class ModelSpec:
    """A fully resolved model: family, parameter values and options."""

    family: "ModelFamily"
    values: Mapping[str, float]
    options: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))
        object.__setattr__(
            self, "options", MappingProxyType(dict(self.options))
        )
        self.family.params(self)

    @property
    def name(self) -> str:
        """The family name."""
        return self.family.get_name()

    def with_values(self, **changes: float) -> "ModelSpec":
        """A validated copy with some parameter values replaced.

        Raises:
            ParameterError: If a name is not a parameter of the family.
        """
        unknown = sorted(set(changes) - set(self.values))
        if unknown:
            raise ParameterError(
                "Unknown parameter(s) of '{}': {}".format(
                    self.name, ", ".join(unknown)
                )
            )
        values = dict(self.values)
        values.update({k: float(v) for k, v in changes.items()})
        return ModelSpec(self.family, values, self.options)

    def with_options(self, **changes: str) -> "ModelSpec":
        """A validated copy with some options replaced."""
        options = dict(self.options)
        options.update(changes)
        return self.family.resolve(self.values, options)

    def params(self):
        """The typed parameter set(s) of the family."""
        return self.family.params(self)

    def system(self, dist: Optional[DisturbanceInputs] = None) -> OdeSystem:
        """Builds the system."""
        return self.family.build(self, dist or DisturbanceInputs())


class ModelFamily(NamedObject):
    """A model family of the catalog."""

    NAME = ""
    DESCRIPTION = ""
    SECTIONS: Tuple[str, ...] = ()
    CHOICES: Mapping[str, Tuple[str, ...]] = {}
    COPY_NUMBER = "d1"

    def get_name(self) -> str:
        return self.NAME

    def get_full_name(self) -> str:
        return _NAMESPACE.get_full_name(self)

    def reference_values(self, options: Mapping[str, str]) -> Dict[str, float]:
        """The reference parameter values of the family under some
        options."""
        values: Dict[str, float] = {}
        for section in self.SECTIONS:
            values.update(reference_numbers(section))
        return values

    def parameter_names(self, options: Mapping[str, str]) -> Tuple[str, ...]:
        """The numeric parameters of the family under some options."""
        return tuple(self.reference_values(options))

    def default_options(self) -> Dict[str, str]:
        """The options of the reference set."""
        entries = reference_sections()[self.SECTIONS[0]].entries
        return {
            key: parse_choice(entries[key], allowed, key)
            for key, allowed in self.CHOICES.items()
        }

    def resolve(
        self,
        values: Optional[Mapping[str, float]] = None,
        options: Optional[Mapping[str, str]] = None,
    ) -> ModelSpec:
        """Resolves a spec, filling gaps from the reference set.

        Raises:
            ParameterError: On an unknown parameter, an unknown option or an
                invariant violation.
        """
        chosen = self.default_options()
        for key, value in (options or {}).items():
            if key not in self.CHOICES:
                raise ParameterError(
                    "Unknown option '{}' of '{}'".format(key, self.NAME)
                )
            if value not in self.CHOICES[key]:
                raise ParameterError(
                    "Option '{}' must be one of {}".format(
                        key, ", ".join(self.CHOICES[key])
                    )
                )
            chosen[key] = value
        resolved = self.reference_values(chosen)
        for key, value in (values or {}).items():
            if key not in resolved:
                raise ParameterError(
                    "Unknown parameter '{}' of '{}'".format(key, self.NAME)
                )
            resolved[key] = float(value)
        return ModelSpec(self, resolved, chosen)

    def defaults(self) -> ModelSpec:
        """The reference spec of the family."""
        return self.resolve()

    @abstractmethod
    def params(self, spec: ModelSpec):
        """The typed parameter set(s) of a spec.

        Raises:
            ParameterError: On an invariant violation.
        """

    @abstractmethod
    def build(self, spec: ModelSpec, dist: DisturbanceInputs) -> OdeSystem:
        """Builds the system of a spec."""

    def initial_state(self, spec: ModelSpec) -> np.ndarray:
        """The default initial state: all species absent."""
        return np.zeros(self.build(spec, DisturbanceInputs()).dim)

    @abstractmethod
    def box(self, spec: ModelSpec) -> Box:
        """A box containing every equilibrium of interest."""

    def n_starts(self, spec: ModelSpec) -> int:
        """The number of Newton seeds for equilibrium searches."""
        return 64

    def steady_output(
        self,
        spec: ModelSpec,
        H: float = 0.0,
        r: float = 0.0,
        d1: float = 1.0,
        d2: float = 1.0,
    ) -> Optional[float]:
        """The closed-form steady output, if the family has one."""
        return None


def _closed_box(point: Sequence[float]) -> Box:
    return [(0.0, 2.0 * abs(v) + 1.0) for v in point]


class PlantFamily(ModelFamily):
    """The unregulated cassette."""

    NAME = "plant"
    DESCRIPTION = "unregulated gene expression cassette (m, X)"
    SECTIONS = ("plant",)

    def params(self, spec: ModelSpec) -> PlantParams:
        return _take(spec.values, PlantParams)

    def build(self, spec: ModelSpec, dist: DisturbanceInputs) -> OdeSystem:
        return build_plant(self.params(spec), dist)

    def box(self, spec: ModelSpec) -> Box:
        return _closed_box(plant_steady_state(self.params(spec)))

    def steady_output(self, spec, H=0.0, r=0.0, d1=1.0, d2=1.0):
        return plant_steady_state(self.params(spec), H, r, d1, d2)[1]


class QicFamily(ModelFamily):
    """The cassette under quasi-integral feedback."""

    NAME = "qic"
    DESCRIPTION = "quasi-integral feedback through a phospho-cycle (m, X, u)"
    SECTIONS = ("qic", "qic.plant")
    CHOICES = {"loop": ("closed", "open")}

    def params(self, spec: ModelSpec) -> Tuple[QicParams, PlantParams]:
        qic_names = _field_names(QicParams)
        plant = {k: v for k, v in spec.values.items() if k not in qic_names}
        return _take(spec.values, QicParams), _take(plant, PlantParams)

    def build(self, spec: ModelSpec, dist: DisturbanceInputs) -> OdeSystem:
        q, p = self.params(spec)
        return build_qic(q, p, dist, Loop(spec.options["loop"]))

    def initial_state(self, spec: ModelSpec) -> np.ndarray:
        return qic_initial_state(*self.params(spec))

    def box(self, spec: ModelSpec) -> Box:
        q, p = self.params(spec)
        m_max = q.a_act * p.R_TX / p.delta
        return [
            (0.0, 2.0 * m_max + 1.0),
            (0.0, 2.0 * p.kappa * m_max / p.gamma + 1.0),
            (0.0, q.u_tot),
        ]


class FfwdFamily(ModelFamily):
    """The incoherent feedforward controller."""

    NAME = "ffwd"
    DESCRIPTION = "feedforward control by an RNA-degrading species"
    SECTIONS = ("ffwd",)
    CHOICES = {"variant": ("ern", "microrna")}

    def params(self, spec: ModelSpec) -> FfwdParams:
        return _take(spec.values, FfwdParams, variant=spec.options["variant"])

    def build(self, spec: ModelSpec, dist: DisturbanceInputs) -> OdeSystem:
        return build_ffwd(self.params(spec), dist)

    def box(self, spec: ModelSpec) -> Box:
        return _closed_box(ffwd_steady_state(self.params(spec)))

    def steady_output(self, spec, H=0.0, r=0.0, d1=1.0, d2=1.0):
        return ffwd_steady_state(self.params(spec), d1, d2)[-1]


class GrnFamily(ModelFamily):
    """The pluripotency network."""

    NAME = "grn"
    DESCRIPTION = "lumped pluripotency network (x_O, x_N)"
    SECTIONS = ("grn",)
    CHOICES = {"control": ("open", "highgain")}
    SEARCH = "grn.search"

    def params(self, spec: ModelSpec) -> GrnParams:
        return _take(spec.values, GrnParams)

    def build(self, spec: ModelSpec, dist: DisturbanceInputs) -> OdeSystem:
        return build_grn(self.params(spec), Control(spec.options["control"]))

    def box(self, spec: ModelSpec) -> Box:
        g = self.params(spec)
        search = reference_numbers(self.SEARCH)
        return [
            (0.0, search["x_O_hi"] + 2.0 * g.u_i / g.gamma_grn),
            (0.0, search["x_N_hi"]),
        ]

    def n_starts(self, spec: ModelSpec) -> int:
        return int(reference_numbers(self.SEARCH)["n_starts"])


class ReproFamily(ModelFamily):
    """The reprogramming construct, standalone or coupled to the network.

    In coupled mode the network constants join the parameters; the
    network's own controller settings (u_i, G, x_star) do not.
    """

    NAME = "repro"
    DESCRIPTION = "copy-number feedforward with microRNA feedback"
    SECTIONS = ("repro",)
    CHOICES = {"mode": ("standalone", "coupled")}
    COPY_NUMBER = "d"
    _CONTROLLER_ONLY = ("u_i", "G", "x_star")

    def reference_values(self, options: Mapping[str, str]) -> Dict[str, float]:
        values = super().reference_values(options)
        if options.get("mode") == "coupled":
            for key, value in reference_numbers("grn").items():
                if key not in self._CONTROLLER_ONLY:
                    values[key] = value
        return values

    def params(self, spec: ModelSpec):
        repro = _take(spec.values, ReproParams)
        if spec.options["mode"] != "coupled":
            return repro
        repro_names = _field_names(ReproParams)
        network = {
            k: v for k, v in spec.values.items() if k not in repro_names
        }
        return repro, _take(network, GrnParams)

    def build(self, spec: ModelSpec, dist: DisturbanceInputs) -> OdeSystem:
        if spec.options["mode"] == "coupled":
            repro, grn = self.params(spec)
            return build_repro(repro, grn)
        return build_repro(self.params(spec), dist.H_GRN)

    def box(self, spec: ModelSpec) -> Box:
        if spec.options["mode"] != "coupled":
            return _closed_box(
                repro_steady_state(self.params(spec), 0.0).as_tuple()
            )
        repro, grn = self.params(spec)
        state = repro_steady_state(repro, grn.D)
        search = reference_numbers(GrnFamily.SEARCH)
        return [
            (0.0, 2.0 * state.m_i + 1.0),
            (0.0, 2.0 * state.mu + 1.0),
            (0.0, max(search["x_O_hi"], 2.0 * state.x_i)),
            (0.0, search["x_N_hi"]),
        ]

    def steady_output(self, spec, H=0.0, r=0.0, d1=1.0, d2=1.0):
        if spec.options["mode"] == "coupled":
            return None
        return repro_steady_state(self.params(spec), H).x_i


_FAMILIES: Dict[str, ModelFamily] = {
    item.get_name(): item
    for item in (
        PlantFamily(),
        QicFamily(),
        FfwdFamily(),
        GrnFamily(),
        ReproFamily(),
    )
}


def family(name: str) -> ModelFamily:
    """Looks up a family by name.

    Raises:
        ParameterError: If the name is unknown.
    """
    try:
        return _FAMILIES[name]
    except KeyError:
        raise ParameterError(
            "Unknown model family '{}', expected one of {}".format(
                name, ", ".join(_FAMILIES)
            )
        ) from None


def families() -> Tuple[ModelFamily, ...]:
    """All families in catalog order."""
    return tuple(_FAMILIES.values())


def model(name: str, **values: float) -> ModelSpec:
    """Resolves the reference spec of a family with some values replaced."""
    return family(name).resolve(values)
