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
""" Command-line front end.

    ::

        biocircuit simulate --config F --out DIR
        biocircuit equilibria --config F [--out DIR]
        biocircuit bifurcate --config F --param P --from A --to B --points N
        biocircuit ensemble --config F --n N --seed S --sigma V
        biocircuit scenario run ID [--set key=value]... [--out DIR]
        biocircuit scenario list

    Exit codes: 0 on success, 1 on a failed verdict or a failed
    computation, 2 on usage and configuration errors.
"""

import argparse
import logging
from pathlib import Path
import sys
from typing import Dict, List, Optional, Sequence, TextIO

import numpy as np

from .analysis import bifurcation_sweep, ensemble_run
from .config import RunConfig, parse_config, parse_override
from .emit import (
    CsvTable,
    PlotStyle,
    Series,
    emit_csv,
    emit_svg,
    trajectory_series,
    trajectory_table,
)
from .equilibrium import find_equilibria
from .error import (
    BiocircuitError,
    ConfigError,
    ParameterError,
    ScenarioError,
    StdErrErrorHandler,
)
from .integrator import integrate
from .protocol import EXIT_FAILED_VERDICT, EXIT_OK, EXIT_USAGE
from .runner import run_scenario, write_report
from .scenario import resolve_seed
from .scenarios import create_scenario, list_scenarios
from .sink import DirectorySink

_logger = logging.getLogger(__name__)

PROGRAM = "biocircuit"


class UsageError(Exception):
    """A command line that cannot be executed."""


class _ArgumentParser(argparse.ArgumentParser):
    """An argument parser raising instead of exiting."""

    def error(self, message: str) -> None:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    """Creates the argument parser of all subcommands."""
    parser = _ArgumentParser(
        prog=PROGRAM,
        description="Simulate and analyse biomolecular control circuits.",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log debug records"
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    simulate = commands.add_parser("simulate", help="integrate a model")
    simulate.add_argument("--config", required=True, metavar="F")
    simulate.add_argument("--out", metavar="DIR")

    equilibria = commands.add_parser(
        "equilibria", help="find and classify equilibria"
    )
    equilibria.add_argument("--config", required=True, metavar="F")
    equilibria.add_argument("--out", metavar="DIR")

    bifurcate = commands.add_parser(
        "bifurcate", help="sweep equilibria over a parameter"
    )
    bifurcate.add_argument("--config", required=True, metavar="F")
    bifurcate.add_argument("--param", metavar="P")
    bifurcate.add_argument("--from", dest="start", type=float, metavar="A")
    bifurcate.add_argument("--to", dest="stop", type=float, metavar="B")
    bifurcate.add_argument("--points", type=int, metavar="N")
    bifurcate.add_argument("--out", metavar="DIR")

    ensemble = commands.add_parser(
        "ensemble", help="sample copy numbers log-normally"
    )
    ensemble.add_argument("--config", required=True, metavar="F")
    ensemble.add_argument("--n", type=int, metavar="N")
    ensemble.add_argument("--seed", type=int, metavar="S")
    ensemble.add_argument("--sigma", type=float, metavar="V")
    ensemble.add_argument("--param", metavar="P")
    ensemble.add_argument("--out", metavar="DIR")

    scenario = commands.add_parser("scenario", help="reproduction scenarios")
    actions = scenario.add_subparsers(dest="action", metavar="action")
    actions.required = True
    run = actions.add_parser("run", help="run a scenario")
    run.add_argument("scenario_id", metavar="ID")
    run.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="key=value",
    )
    run.add_argument("--seed", type=int, metavar="S")
    run.add_argument("--out", metavar="DIR")
    actions.add_parser("list", help="list the scenarios")
    return parser


def _load(path: str) -> RunConfig:
    try:
        text = Path(path).read_bytes()
    except OSError as error:
        raise UsageError(
            "argument --config: cannot read '{}': {}".format(
                path, error.strerror
            )
        ) from None
    try:
        return parse_config(text)
    except ConfigError as error:
        raise ConfigError("{}: {}".format(path, error)) from None


def _write(directory: str, payloads: Dict[str, bytes]) -> None:
    with DirectorySink(directory, StdErrErrorHandler()) as sink:
        for name, payload in payloads.items():
            sink.write(name, payload)


def _simulate(args: argparse.Namespace, out: TextIO) -> int:
    config = _load(args.config)
    directory = args.out or config.output_directory
    if directory is None:
        raise UsageError(
            "argument --out: required unless [output] names a directory"
        )
    spec = config.spec
    system = spec.system(config.disturbances)
    x0 = config.x0
    if x0 is None:
        x0 = spec.family.initial_state(spec)
    t_eval = None
    if config.dt is not None:
        points = max(2, int(round(config.t_end / config.dt)) + 1)
        t_eval = np.linspace(0.0, config.t_end, points)
    trajectory = integrate(
        system, x0, (0.0, config.t_end), config.integrator, t_eval
    )
    _write(
        directory,
        {
            "trajectory.csv": emit_csv(trajectory_table(trajectory)),
            "trajectory.svg": emit_svg(
                trajectory_series(trajectory),
                PlotStyle(title=system.label, y_label="concentration"),
            ),
        },
    )
    out.write("{}\n".format(Path(directory, "trajectory.csv")))
    return EXIT_OK


def _equilibria(args: argparse.Namespace, out: TextIO) -> int:
    config = _load(args.config)
    spec = config.spec
    system = spec.system(config.disturbances)
    found = find_equilibria(
        system, spec.family.box(spec), spec.family.n_starts(spec)
    )
    rows = [
        list(e.point) + [1.0 if e.is_stable else 0.0, e.residual]
        for e in found
    ]
    table = CsvTable(system.names + ("stable", "residual"), rows)
    payload = emit_csv(table)
    out.write(payload.decode("utf-8"))
    directory = args.out or config.output_directory
    if directory is not None:
        _write(directory, {"equilibria.csv": payload})
    return EXIT_OK


def _pick(value, sweep, attribute: str):
    if value is None and sweep is not None:
        return getattr(sweep, attribute)
    return value


def _bifurcate(args: argparse.Namespace, out: TextIO) -> int:
    config = _load(args.config)
    sweep = config.sweep
    param = _pick(args.param, sweep, "param")
    start = _pick(args.start, sweep, "start")
    stop = _pick(args.stop, sweep, "stop")
    points = _pick(args.points, sweep, "points")
    for flag, value in (
        ("--param", param),
        ("--from", start),
        ("--to", stop),
        ("--points", points),
    ):
        if value is None:
            raise UsageError(
                "argument {}: required unless [sweep] sets it".format(flag)
            )
    if points < 2 or not stop > start:
        raise UsageError("argument --points: needs N >= 2 and from < to")

    spec = config.spec
    diagram = bifurcation_sweep(
        spec,
        param,
        np.linspace(start, stop, points),
        n_starts=sweep.n_starts if sweep else None,
    )
    system = spec.system()
    rows = [
        [value] + list(e.point) + [1.0 if e.is_stable else 0.0, label]
        for value, point, labels in zip(
            diagram.grid, diagram.branches, diagram.labels
        )
        for e, label in zip(point, labels)
    ]
    columns = (param,) + system.names + ("stable", "branch")
    payload = emit_csv(CsvTable(columns, rows))
    out.write(payload.decode("utf-8"))
    for event in diagram.events:
        _logger.info(
            "stable count %d -> %d in (%r, %r]",
            event.stable_before,
            event.stable_after,
            event.lower,
            event.upper,
        )
    directory = args.out or config.output_directory
    if directory is not None:
        output = system.output
        series = []
        for label in diagram.branch_labels:
            branch = diagram.branch(label)
            series.append(
                Series(
                    "branch_{}".format(label),
                    [value for value, _ in branch],
                    [e.point[output] for _, e in branch],
                )
            )
        _write(
            directory,
            {
                "bifurcation.csv": payload,
                "bifurcation.svg": emit_svg(
                    series,
                    PlotStyle(
                        title="equilibria of {}".format(spec.name),
                        x_label=param,
                        y_label=system.names[output],
                    ),
                ),
            },
        )
    return EXIT_OK


def _ensemble(args: argparse.Namespace, out: TextIO) -> int:
    config = _load(args.config)
    settings = config.ensemble
    seed = args.seed
    if seed is None:
        seed = resolve_seed(settings.seed)
    summary = ensemble_run(
        config.spec,
        args.param or settings.param,
        settings.sigma if args.sigma is None else args.sigma,
        settings.n if args.n is None else args.n,
        seed,
        config.integrator,
    )
    _logger.info(
        "ensemble mean %.6g, cv %.6g", summary.mean, summary.cv
    )
    histogram = CsvTable(
        ("bin_lo", "bin_hi", "count"),
        np.column_stack(
            (
                summary.bin_edges[:-1],
                summary.bin_edges[1:],
                summary.counts,
            )
        ).tolist(),
    )
    payload = emit_csv(histogram)
    out.write(payload.decode("utf-8"))
    directory = args.out or config.output_directory
    if directory is not None:
        samples = CsvTable(
            ("sample", "output"),
            [[index, value] for index, value in enumerate(summary.outputs)],
        )
        centres = 0.5 * (summary.bin_edges[:-1] + summary.bin_edges[1:])
        _write(
            directory,
            {
                "samples.csv": emit_csv(samples),
                "histogram.csv": payload,
                "histogram.svg": emit_svg(
                    [Series("count", centres, summary.counts)],
                    PlotStyle(
                        title="steady output, cv {:.3g}".format(summary.cv),
                        x_label="output",
                        y_label="count",
                    ),
                ),
            },
        )
    return EXIT_OK


def _scenario(args: argparse.Namespace, out: TextIO) -> int:
    if args.action == "list":
        for entry in list_scenarios():
            out.write(entry.line() + "\n")
        return EXIT_OK

    overrides: Dict[str, float] = {}
    for text in args.overrides:
        try:
            key, value = parse_override(text)
        except ConfigError as error:
            raise UsageError("argument --set: {}".format(error)) from None
        overrides[key] = value
    scenario = create_scenario(args.scenario_id, overrides, args.seed)
    report = run_scenario(scenario)
    with DirectorySink(
        args.out or scenario.ID, StdErrErrorHandler()
    ) as sink:
        write_report(report, sink)
    out.write(report.report_text())
    return EXIT_OK if report.passed else EXIT_FAILED_VERDICT


_COMMANDS = {
    "simulate": _simulate,
    "equilibria": _equilibria,
    "bifurcate": _bifurcate,
    "ensemble": _ensemble,
    "scenario": _scenario,
}


def cli_dispatch(
    argv: Optional[Sequence[str]] = None,
    out: Optional[TextIO] = None,
    err: Optional[TextIO] = None,
) -> int:
    """Runs one command line.

    Args:
        argv (Sequence[str], optional): The arguments without the program
            name. Defaults to sys.argv[1:].
        out (TextIO, optional): Receives results. Defaults to stdout.
        err (TextIO, optional): Receives diagnostics. Defaults to stderr.

    Returns:
        int: The exit code.
    """
    out = out or sys.stdout
    err = err or sys.stderr
    arguments: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(arguments)
    except UsageError as error:
        err.write("{}: error: {}\n".format(PROGRAM, error))
        return EXIT_USAGE
    except SystemExit as exit_:
        # --help
        return EXIT_OK if not exit_.code else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=err,
        force=True,
    )
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, ConfigError, ScenarioError, ParameterError) as error:
        err.write("{}: error: {}\n".format(PROGRAM, error))
        return EXIT_USAGE
    except BiocircuitError as error:
        err.write("{}: {}: {}\n".format(PROGRAM, type(error).__name__, error))
        return EXIT_FAILED_VERDICT
    except OSError as error:
        err.write("{}: error: {}\n".format(PROGRAM, error))
        return EXIT_FAILED_VERDICT


def main() -> None:
    """The console script entry point."""
    sys.exit(cli_dispatch())
