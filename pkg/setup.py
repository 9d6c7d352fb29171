#!/usr/bin/env python
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

from setuptools import setup, find_packages

__VERSION__ = "0.1.0"

long_description: str = ""
with open("README.md", "r") as read_me_file:
    long_description = read_me_file.read()

setup(
    name="biocircuit",
    version=__VERSION__,
    license="LGPL-3.0-only",
    author="Carsten Igel",
    author_email="cig@bite-that-bit.de",
    description="Simulation of biomolecular feedback and feedforward "
    + "controllers.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    install_requires=[
        "matplotlib >= 3.5",
        "numpy >= 1.20",
        "scipy >= 1.7",
    ],
    extras_require={},
    package_dir={"": "src"},
    package_data={"biocircuit": ["constants/*.cfg"]},
    entry_points={
        "console_scripts": ["biocircuit=biocircuit.cli:main"],
    },
    keywords="synthetic biology, control, ode, bifurcation",
    python_requires=">=3.9, < 4",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU Lesser General"
        + " Public License v3 (LGPLv3)",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Bio-Informatics",
        "Typing :: Typed",
    ],
)
