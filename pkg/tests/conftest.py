#!/bin/python3
#
#  Copyright (c) 2026.  SandboxZilla
#
#  Permission is hereby granted, free of charge, to any person obtaining a copy of this
#  software and associated documentation files (the "Software"), to deal in the Software
#  without restriction, including without limitation the rights to use, copy, modify,
#  merge, publish, distribute, sublicense, and/or sell copies of the Software, and to
#  permit persons to whom the Software is furnished to do so.
#
#  THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED,
#  INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A
#  PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT
#  HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION
#  OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE
#  SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.
#
#
__author__ = 'Sandboxzilla'

import pytest

from tunnelzilla.physics.analytic_barrier import RectangularBarrier
from tunnelzilla.physics.transfer_matrix import PotentialProfile
from tunnelzilla.physics.units_core import EffectiveMass, make_grid
from tunnelzilla.utils import LoggerWrapper


@pytest.fixture(autouse=True)
def fresh_logger():
    yield
    LoggerWrapper.reset()


@pytest.fixture
def free_mass():
    return EffectiveMass(1.0)


@pytest.fixture
def light_mass():
    """m* = 0.07 m, the Si-SiO2 style example."""
    return EffectiveMass(0.07)


@pytest.fixture
def oxide_barrier(free_mass):
    return RectangularBarrier(v0=3.1, d=1.0, mass=free_mass)


@pytest.fixture
def oxide_profile(light_mass):
    return PotentialProfile.single(RectangularBarrier(v0=3.1, d=1.0, mass=light_mass))


@pytest.fixture
def wide_grid():
    """Fine grid for moment checks on a sigma = 1 nm packet centred at 0."""
    return make_grid(-12.0, 12.0, 4097)


@pytest.fixture
def dense_grid():
    """Small enough for dense eigendecomposition."""
    return make_grid(-12.0, 12.0, 512)
