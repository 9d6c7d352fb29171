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
"""Definition of file-format fields and numerical defaults shared by the
modules of this package.
"""

# Equilibria
EQUILIBRIUM_TOLERANCE = 1e-9
NEAR_EQUILIBRIUM_TOLERANCE = 1e-6
STABILITY_MARGIN = 1e-6
DEDUP_TOLERANCE = 1e-6

# Config sections
SECTION_MODEL = "model"
SECTION_DISTURBANCES = "disturbances"
SECTION_INTEGRATOR = "integrator"
SECTION_SWEEP = "sweep"
SECTION_ENSEMBLE = "ensemble"
SECTION_OUTPUT = "output"
CONFIG_SECTIONS = (
    SECTION_MODEL,
    SECTION_DISTURBANCES,
    SECTION_INTEGRATOR,
    SECTION_SWEEP,
    SECTION_ENSEMBLE,
    SECTION_OUTPUT,
)
KEY_FAMILY = "family"

# CSV / SVG
CSV_SEPARATOR = ","
CSV_NEWLINE = "\n"
CSV_DIGITS = 17
SVG_WIDTH = 800
SVG_HEIGHT = 500

# Reports
REPORT_FILE = "report.txt"
VERDICT_PASS = "PASS"
VERDICT_FAIL = "FAIL"

# Seeds
SEED_ENVIRONMENT_VARIABLE = "BIOCIRCUIT_SEED"
DEFAULT_SEED = 42

# Exit codes
EXIT_OK = 0
EXIT_FAILED_VERDICT = 1
EXIT_USAGE = 2
