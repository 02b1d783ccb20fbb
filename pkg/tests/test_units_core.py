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

import math

import pytest

from tunnelzilla.errors import ValidationError
from tunnelzilla.physics.units_core import (EffectiveMass, constants, make_grid, momentum_from_si, momentum_to_si,
                                            time_to_si)

HBAR_SI = 1.054571817e-34
EV = 1.602176634e-19
ME = 9.1093837015e-31


def test_constants_from_codata():
    c = constants()
    assert c.hbar == pytest.approx(HBAR_SI / EV * 1e15, rel=1e-14)
    assert c.hbar == pytest.approx(0.6582119569, rel=1e-10)
    assert c.hbar2_over_2me == pytest.approx(HBAR_SI ** 2 / (2 * ME) / EV * 1e18, rel=1e-14)
    assert c.hbar2_over_2me == pytest.approx(0.0380998212, rel=1e-9)
    assert c.ev_fs_per_nm_to_si_momentum == pytest.approx(1.602176634e-25, rel=1e-14)


def test_constants_are_cached():
    assert constants() is constants()


def test_mass_consistency():
    c = constants()
    # eV fs^2 / nm^2 -> kg
    mass_si = c.electron_mass * EV * 1e-30 / 1e-18
    assert mass_si == pytest.approx(c.electron_mass_si, rel=1e-9)
    assert c.hbar ** 2 / (2.0 * c.hbar2_over_2me) == pytest.approx(c.electron_mass, rel=1e-12)


def test_effective_mass():
    light = EffectiveMass(0.07)
    assert light.mass == pytest.approx(0.07 * constants().electron_mass)
    assert light.hbar2_over_2m == pytest.approx(constants().hbar2_over_2me / 0.07)
    for bad in (0.0, -1.0, float('nan'), float('inf')):
        with pytest.raises(ValidationError):
            EffectiveMass(bad)


def test_make_grid():
    grid = make_grid(0, 1, 11)
    assert grid.dx == pytest.approx(0.1)
    assert grid.points[0] == 0.0 and grid.points[-1] == 1.0
    assert len(grid.points) == 11
    assert make_grid(-50, 50, 8192).dx == pytest.approx(0.0122085, rel=1e-5)


@pytest.mark.parametrize("args", [(1, 0, 11), (0, 1, 7), (0, float('nan'), 11), (0, float('inf'), 11), (0, 1, 10.5)])
def test_make_grid_rejects(args):
    with pytest.raises(ValidationError):
        make_grid(*args)


def test_momentum_conversion():
    assert momentum_to_si(0.0) == 0.0
    assert momentum_to_si(1.0) == pytest.approx(1.602176634e-25, rel=1e-14)
    assert momentum_to_si(0.6582119569) == pytest.approx(1.0546e-25, rel=1e-4)
    for p in (1e-3, 0.6582119569, 42.0, -3.5):
        assert momentum_from_si(momentum_to_si(p)) == pytest.approx(p, rel=1e-12)
    with pytest.raises(ValidationError):
        momentum_to_si(math.nan)


def test_time_to_si():
    assert time_to_si(0.6) == pytest.approx(6e-16)
