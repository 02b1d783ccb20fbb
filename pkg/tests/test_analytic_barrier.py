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

import numpy as np
import pytest

from tunnelzilla.errors import ValidationError
from tunnelzilla.physics.analytic_barrier import (Regime, RectangularBarrier, decay_constant, regime_of,
                                                  resonance_energies, transmission, wavevector)
from tunnelzilla.physics.numerov import numerov_transmission
from tunnelzilla.physics.transfer_matrix import PotentialProfile, transmission_only
from tunnelzilla.physics.units_core import EffectiveMass, constants


def test_wavevector(free_mass):
    assert wavevector(constants().hbar2_over_2me, free_mass) == pytest.approx(1.0, rel=1e-14)
    assert wavevector(0.0380998212, free_mass) == pytest.approx(1.0, rel=1e-8)
    k = wavevector(1.5, free_mass)
    assert k == pytest.approx(math.sqrt(1.5 / constants().hbar2_over_2me), rel=1e-14)
    assert abs(k - 6.274) < 1e-3
    for bad in (-1.0, 0.0):
        with pytest.raises(ValidationError):
            wavevector(bad, free_mass)


def test_decay_constant(free_mass, oxide_barrier):
    h2m = constants().hbar2_over_2me
    assert decay_constant(h2m, RectangularBarrier(v0=2 * h2m, d=1.0)) == pytest.approx(1.0, rel=1e-14)
    assert decay_constant(1.5, oxide_barrier) == pytest.approx(6.48, abs=5e-3)
    for bad in (3.1, 4.0, 0.0):
        with pytest.raises(ValidationError):
            decay_constant(bad, oxide_barrier)


def test_barrier_validation():
    with pytest.raises(ValidationError):
        RectangularBarrier(v0=0.0, d=1.0)
    with pytest.raises(ValidationError):
        RectangularBarrier(v0=1.0, d=-1.0)
    with pytest.raises(ValidationError):
        RectangularBarrier(v0=float('nan'), d=1.0)


def test_zero_width_is_transparent():
    result = transmission(0.7, RectangularBarrier(v0=3.1, d=0.0))
    assert result.t_prob == 1.0 and result.r_prob == 0.0
    assert abs(result.r_amp) == 0.0


def test_oxide_barrier_transmission(oxide_barrier):
    result = transmission(1.5, oxide_barrier)
    assert result.regime is Regime.BELOW
    assert 9.3e-6 < result.t_prob < 9.5e-6
    assert abs(result.t_prob + result.r_prob - 1.0) <= 1e-12
    assert abs(result.t_amp) ** 2 == pytest.approx(result.t_prob, rel=1e-12)
    assert abs(result.r_amp) ** 2 == pytest.approx(result.r_prob, rel=1e-12)


def test_lighter_mass_tunnels_more(oxide_barrier):
    light = RectangularBarrier(v0=3.1, d=1.0, mass=EffectiveMass(0.07))
    assert transmission(1.5, light).t_prob > transmission(1.5, oxide_barrier).t_prob


def test_seam_limit():
    barrier = RectangularBarrier(v0=1.0, d=1.0)
    at = transmission(1.0, barrier)
    assert at.regime is Regime.AT
    expected = 1.0 / (1.0 + barrier.mass.mass * 1.0 / (2.0 * constants().hbar ** 2))
    assert at.t_prob == pytest.approx(expected, rel=1e-14)
    below = transmission(1.0 - 1e-8, barrier).t_prob
    above = transmission(1.0 + 1e-8, barrier).t_prob
    assert abs(below - above) < 1e-6
    assert abs(below - at.t_prob) < 1e-6
    assert abs(at.t_amp) ** 2 == pytest.approx(at.t_prob, rel=1e-12)
    assert regime_of(1.0 + 1e-13, 1.0) is Regime.AT


def test_opaque_barrier_uses_asymptotic_form():
    barrier = RectangularBarrier(v0=10.0, d=20.0)
    result = transmission(1.0, barrier)
    alpha = decay_constant(1.0, barrier)
    assert alpha * barrier.d > 200
    assert result.t_prob > 0.0
    assert math.log(result.t_prob) == pytest.approx(math.log(16 * 9.0 / 100.0) - 2 * alpha * 20.0, rel=1e-12)
    assert abs(result.t_amp) ** 2 == pytest.approx(result.t_prob, rel=1e-10)


def test_resonances():
    barrier = RectangularBarrier(v0=1.0, d=1.0)
    first = resonance_energies(barrier, 1)
    assert first == [pytest.approx(1.0 + math.pi ** 2 * constants().hbar2_over_2me, rel=1e-14)]
    assert first[0] == pytest.approx(1.376, abs=1e-3)
    energies = resonance_energies(barrier, 3)
    assert all(a < b for a, b in zip(energies, energies[1:]))
    with pytest.raises(ValidationError):
        resonance_energies(RectangularBarrier(v0=1.0, d=0.0), 1)
    with pytest.raises(ValidationError):
        resonance_energies(barrier, 0)


@pytest.mark.parametrize("barrier", [RectangularBarrier(v0=1.0, d=1.0),
                                     RectangularBarrier(v0=3.1, d=2.5, mass=EffectiveMass(0.07)),
                                     RectangularBarrier(v0=0.3, d=10.0, mass=EffectiveMass(0.2))])
def test_full_transmission_at_resonances(barrier):
    for energy in resonance_energies(barrier, 5):
        assert abs(transmission(energy, barrier).t_prob - 1.0) <= 1e-10
        assert abs(transmission_only(PotentialProfile.single(barrier), energy).t_prob - 1.0) <= 1e-10


def test_transmission_falls_with_width():
    values = [transmission(1.5, RectangularBarrier(v0=3.1, d=d)).t_prob for d in (0.1, 0.2, 0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_flux_conservation_random():
    rng = np.random.default_rng(7)
    for _ in range(500):
        energy, v0, d = rng.uniform(0.01, 10.0, size=3)
        result = transmission(energy, RectangularBarrier(v0=v0, d=d, mass=EffectiveMass(rng.uniform(0.05, 1.0))))
        assert 0.0 <= result.t_prob <= 1.0
        assert abs(result.t_prob + result.r_prob - 1.0) <= 1e-12


def test_matches_scattering_matrix_on_random_barriers():
    rng = np.random.default_rng(20240611)
    for _ in range(1000):
        energy, v0, d = rng.uniform(0.01, 10.0, size=3)
        barrier = RectangularBarrier(v0=v0, d=d, mass=EffectiveMass(rng.uniform(0.05, 1.0)))
        closed = transmission(energy, barrier)
        numeric = transmission_only(PotentialProfile.single(barrier), energy)
        assert numeric.t_prob == pytest.approx(closed.t_prob, rel=1e-10), (energy, v0, d)
        assert abs(numeric.t_prob + numeric.r_prob - 1.0) <= 1e-10


def test_matches_numerov_on_spot_cases():
    rng = np.random.default_rng(3)
    for _ in range(20):
        energy, v0 = rng.uniform(0.3, 4.0, size=2)
        d = rng.uniform(0.2, 1.0)
        barrier = RectangularBarrier(v0=v0, d=d, mass=EffectiveMass(rng.uniform(0.05, 1.0)))
        reference = numerov_transmission(PotentialProfile.single(barrier), energy)
        assert transmission(energy, barrier).t_prob == pytest.approx(reference, rel=1e-6), (energy, v0, d)


def test_oxide_barrier_against_numerov(oxide_barrier):
    reference = numerov_transmission(PotentialProfile.single(oxide_barrier), 1.5)
    assert transmission(1.5, oxide_barrier).t_prob == pytest.approx(reference, rel=1e-6)
