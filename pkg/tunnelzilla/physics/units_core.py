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
"""
Unit system, physical constants and spatial grids.

Working units: energy in eV, length in nm, time in fs, momentum in eV·fs/nm
and masses as multiples of the free electron mass.  In these units the
numbers of a nanometre-scale tunneling problem (1 nm, about 1 eV, about 1 fs)
are all of order one.  Constants are derived once from the CODATA 2018 SI
values below; there is no runtime lookup.
"""

__author__ = 'Sandboxzilla'

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import ValidationError

# CODATA 2018, SI
HBAR_SI = 1.054571817e-34           # J s
ELECTRON_VOLT_SI = 1.602176634e-19  # J (exact)
ELECTRON_MASS_SI = 9.1093837015e-31  # kg

FS_PER_S = 1.0e15
NM_PER_M = 1.0e9

MIN_GRID_POINTS = 8


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float                          # eV fs
    hbar2_over_2me: float                # eV nm^2, free electron
    electron_mass_si: float              # kg
    ev_fs_per_nm_to_si_momentum: float   # kg m/s per (eV fs/nm)

    @property
    def electron_mass(self) -> float:
        """Free electron mass in eV fs^2 / nm^2."""
        return self.hbar ** 2 / (2.0 * self.hbar2_over_2me)


@lru_cache(maxsize=None)
def constants() -> PhysicalConstants:
    hbar = HBAR_SI / ELECTRON_VOLT_SI * FS_PER_S
    hbar2_over_2me = HBAR_SI ** 2 / (2.0 * ELECTRON_MASS_SI) / ELECTRON_VOLT_SI * NM_PER_M ** 2
    # 1 eV fs / nm = 1.602176634e-19 J * 1e-15 s / 1e-9 m
    momentum = ELECTRON_VOLT_SI / FS_PER_S * NM_PER_M
    return PhysicalConstants(hbar=hbar,
                             hbar2_over_2me=hbar2_over_2me,
                             electron_mass_si=ELECTRON_MASS_SI,
                             ev_fs_per_nm_to_si_momentum=momentum)


@dataclass(frozen=True)
class EffectiveMass:
    """Effective mass m*/m in free electron mass units."""
    ratio: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.ratio) or self.ratio <= 0.0:
            raise ValidationError("effective mass ratio must be finite and > 0, got %r" % (self.ratio,))

    @property
    def mass(self) -> float:
        """m* in eV fs^2 / nm^2."""
        return self.ratio * constants().electron_mass

    @property
    def hbar2_over_2m(self) -> float:
        """hbar^2 / (2 m*) in eV nm^2."""
        return constants().hbar2_over_2me / self.ratio


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    n_points: int
    dx: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValidationError("grid bounds must be finite, got [%r, %r]" % (self.x_min, self.x_max))
        if self.x_max <= self.x_min:
            raise ValidationError("grid needs x_max > x_min, got [%r, %r]" % (self.x_min, self.x_max))
        if int(self.n_points) != self.n_points or self.n_points < MIN_GRID_POINTS:
            raise ValidationError("grid needs an integer n_points >= %d, got %r" % (MIN_GRID_POINTS, self.n_points))
        object.__setattr__(self, 'n_points', int(self.n_points))
        object.__setattr__(self, 'dx', (self.x_max - self.x_min) / (self.n_points - 1))

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min


def make_grid(x_min: float, x_max: float, n_points: int) -> SpatialGrid:
    return SpatialGrid(x_min=float(x_min), x_max=float(x_max), n_points=n_points)


def momentum_to_si(p: float) -> float:
    """eV fs/nm to kg m/s."""
    if not math.isfinite(p):
        raise ValidationError("momentum must be finite, got %r" % (p,))
    return p * constants().ev_fs_per_nm_to_si_momentum


def momentum_from_si(p_si: float) -> float:
    """kg m/s to eV fs/nm."""
    if not math.isfinite(p_si):
        raise ValidationError("momentum must be finite, got %r" % (p_si,))
    return p_si / constants().ev_fs_per_nm_to_si_momentum


def time_to_si(t_fs: float) -> float:
    return t_fs / FS_PER_S


def check_finite(name: str, *values: float):
    for value in values:
        if not math.isfinite(value):
            raise ValidationError("%s must be finite, got %r" % (name, value))
