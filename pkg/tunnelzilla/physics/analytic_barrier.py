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
Closed form scattering off one rectangular barrier of height ``v0`` on
``0 <= x <= d`` with both leads at zero potential.

The incident wave has unit amplitude.  ``t_amp`` is the coefficient of
exp(ikx) for x > d and ``r_amp`` the coefficient of exp(-ikx) for x < 0.
"""

__author__ = 'Sandboxzilla'

import cmath
import enum
import logging
import math
from dataclasses import dataclass
from typing import List

from ..errors import ValidationError
from .units_core import EffectiveMass, constants, check_finite

log = logging.getLogger(__name__)

SEAM_RTOL = 1e-12
# beyond this alpha*d, sinh^2 is replaced by its exponential asymptote
ASYMPTOTIC_ALPHA_D = 200.0


class Regime(str, enum.Enum):
    BELOW = 'below'
    AT = 'at'
    ABOVE = 'above'


@dataclass(frozen=True)
class RectangularBarrier:
    v0: float
    d: float
    mass: EffectiveMass = EffectiveMass()

    def __post_init__(self):
        check_finite("barrier parameters", self.v0, self.d)
        if self.v0 <= 0.0:
            raise ValidationError("barrier height must be > 0, got %r" % (self.v0,))
        if self.d < 0.0:
            raise ValidationError("barrier width must be >= 0, got %r" % (self.d,))


@dataclass(frozen=True)
class TransmissionResult:
    energy: float
    t_prob: float
    r_prob: float
    t_amp: complex
    r_amp: complex
    regime: Regime


def regime_of(energy: float, height: float) -> Regime:
    if abs(energy - height) <= SEAM_RTOL * max(abs(height), abs(energy)):
        return Regime.AT
    return Regime.BELOW if energy < height else Regime.ABOVE


def wavevector(energy: float, mass: EffectiveMass) -> float:
    """k = sqrt(2 m* E) / hbar in 1/nm."""
    check_finite("energy", energy)
    if energy <= 0.0:
        raise ValidationError("wavevector needs energy > 0, got %r" % (energy,))
    return math.sqrt(mass.ratio * energy / constants().hbar2_over_2me)


def decay_constant(energy: float, barrier: RectangularBarrier) -> float:
    """alpha = sqrt(2 m* (V0 - E)) / hbar in 1/nm, for 0 < E < V0."""
    check_finite("energy", energy)
    if not 0.0 < energy < barrier.v0:
        raise ValidationError("decay constant needs 0 < E < V0, got E=%r V0=%r" % (energy, barrier.v0))
    return math.sqrt(barrier.mass.ratio * (barrier.v0 - energy) / constants().hbar2_over_2me)


def transmission(energy: float, barrier: RectangularBarrier) -> TransmissionResult:
    k = wavevector(energy, barrier.mass)
    v0, d = barrier.v0, barrier.d
    regime = regime_of(energy, v0)

    if d == 0.0:
        return TransmissionResult(energy, 1.0, 0.0, 1.0 + 0.0j, 0.0j, regime)

    phase = cmath.exp(-1j * k * d)
    if regime is Regime.AT:
        # alpha -> 0 limit: the barrier wavefunction is linear in x
        half_kd = 0.5 * d * math.sqrt(barrier.mass.ratio * v0 / constants().hbar2_over_2me)
        den = 1.0 - 1j * half_kd
        t_prob = 1.0 / (1.0 + barrier.mass.mass * v0 * d ** 2 / (2.0 * constants().hbar ** 2))
        t_amp = phase / den
        r_amp = -1j * half_kd / den
    elif regime is Regime.BELOW:
        alpha = decay_constant(energy, barrier)
        ad = alpha * d
        if ad <= ASYMPTOTIC_ALPHA_D:
            t_prob = 1.0 / (1.0 + v0 ** 2 * math.sinh(ad) ** 2 / (4.0 * energy * (v0 - energy)))
        else:
            t_prob = 16.0 * energy * (v0 - energy) / v0 ** 2 * math.exp(-2.0 * ad)
        beta = (k * k - alpha * alpha) / (2.0 * k * alpha)
        gamma = (k * k + alpha * alpha) / (2.0 * k * alpha)
        sech = 2.0 * math.exp(-ad) / (1.0 + math.exp(-2.0 * ad))
        th = math.tanh(ad)
        den = 1.0 - 1j * beta * th
        t_amp = phase * sech / den
        r_amp = -1j * gamma * th / den
    else:
        k1 = math.sqrt(barrier.mass.ratio * (energy - v0) / constants().hbar2_over_2me)
        s, c = math.sin(k1 * d), math.cos(k1 * d)
        t_prob = 1.0 / (1.0 + v0 ** 2 * s ** 2 / (4.0 * energy * (energy - v0)))
        beta = (k1 * k1 - k * k) / (2.0 * k * k1)
        gamma = (k1 * k1 + k * k) / (2.0 * k * k1)
        den = c - 1j * gamma * s
        t_amp = phase / den
        r_amp = 1j * beta * s / den

    log.debug('ANALYTIC,E=%r V0=%r d=%r T=%r', energy, v0, d, t_prob)
    return TransmissionResult(energy=energy,
                              t_prob=t_prob,
                              r_prob=1.0 - t_prob,
                              t_amp=complex(t_amp),
                              r_amp=complex(r_amp),
                              regime=regime)


def resonance_energies(barrier: RectangularBarrier, n_max: int) -> List[float]:
    """Energies above the barrier where k1 d = n pi, so T = 1."""
    if barrier.d <= 0.0:
        raise ValidationError("resonances need a barrier of nonzero width")
    if int(n_max) != n_max or n_max < 1:
        raise ValidationError("n_max must be an integer >= 1, got %r" % (n_max,))
    scale = math.pi ** 2 * barrier.mass.hbar2_over_2m / barrier.d ** 2
    return [barrier.v0 + n * n * scale for n in range(1, int(n_max) + 1)]
