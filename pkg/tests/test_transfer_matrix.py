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

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from tunnelzilla.errors import ValidationError
from tunnelzilla.physics.analytic_barrier import RectangularBarrier, decay_constant, transmission
from tunnelzilla.physics.numerov import numerov_transmission
from tunnelzilla.physics.transfer_matrix import (PotentialProfile, Segment, solve, sweep, sweep_energies,
                                                 transmission_only)
from tunnelzilla.physics.units_core import EffectiveMass


def random_profile(rng, n_segments):
    segments = [(rng.uniform(0.05, 0.5), rng.uniform(0.0, 5.0)) for _ in range(n_segments)]
    return PotentialProfile(segments=segments, mass=EffectiveMass(rng.uniform(0.05, 1.0)))


def test_profile_validation():
    with pytest.raises(ValidationError):
        Segment(0.0, 1.0)
    with pytest.raises(ValidationError):
        Segment(1.0, float('nan'))
    with pytest.raises(ValidationError):
        PotentialProfile(segments=[(1.0, 1.0)], lead_height=float('inf'))


def test_profile_builders():
    profile = PotentialProfile.double(0.3, 0.5, 5.0)
    assert [s.width for s in profile.segments] == [0.5, 5.0, 0.5]
    assert profile.total_width == pytest.approx(6.0)
    np.testing.assert_allclose(profile.interfaces(), [0.0, 0.5, 5.5, 6.0])
    assert not profile.is_single_barrier
    assert PotentialProfile.single(RectangularBarrier(v0=1.0, d=0.0)).segments == ()
    split = PotentialProfile.single(RectangularBarrier(v0=1.0, d=2.0)).split_segment(0, 0.25)
    assert [s.width for s in split.segments] == [0.5, 1.5]
    with pytest.raises(ValidationError):
        split.split_segment(0, 1.0)


def test_cell_averaged_potential():
    profile = PotentialProfile(segments=[(1.0, 2.0)], lead_height=0.5)
    averaged = profile.cell_average(np.array([-1.0, 0.0, 0.5, 1.02, 3.0]), 0.1)
    np.testing.assert_allclose(averaged, [0.5, 1.25, 2.0, 0.3 * 2.0 + 0.7 * 0.5, 0.5], rtol=1e-12)


def test_free_profile():
    result, coefficients = solve(PotentialProfile(), 0.8)
    assert result.t_prob == 1.0 and result.r_prob == 0.0
    assert coefficients.pairs == [(1.0, 0.0), (1.0, 0.0)]
    assert coefficients.residual == 0.0


def test_rejects_energy_at_or_below_lead():
    profile = PotentialProfile(segments=[(1.0, 1.0)], lead_height=0.2)
    for energy in (0.2, 0.1, float('nan')):
        with pytest.raises(ValidationError):
            solve(profile, energy)


def test_single_barrier_matches_closed_form(oxide_barrier):
    profile = PotentialProfile.single(oxide_barrier)
    result, coefficients = solve(profile, 1.5)
    closed = transmission(1.5, oxide_barrier)
    assert result.t_prob == pytest.approx(closed.t_prob, rel=1e-10)
    assert abs(result.t_amp - closed.t_amp) <= 1e-10 * abs(closed.t_amp)
    assert abs(result.r_amp - closed.r_amp) <= 1e-10
    assert coefficients.residual <= 1e-10

    (a, b), (_, _), (e, f) = coefficients.pairs
    assert a == 1.0 and b == result.r_amp
    assert e == result.t_amp and f == 0.0
    barrier_region = coefficients.regions[1]
    assert barrier_region.kind == 'evanescent'
    assert barrier_region.wavenumber == pytest.approx(decay_constant(1.5, oxide_barrier), rel=1e-12)


def test_stationary_wavefunction(oxide_barrier):
    result, coefficients = solve(PotentialProfile.single(oxide_barrier), 2.0)
    right = coefficients.evaluate(np.linspace(1.0 + 1e-9, 5.0, 50))
    np.testing.assert_allclose(np.abs(right) ** 2, result.t_prob, rtol=1e-12)
    # continuity across both interfaces
    for edge in (0.0, 1.0):
        psi = coefficients.evaluate(np.array([edge - 1e-9, edge + 1e-9]))
        assert abs(psi[0] - psi[1]) < 1e-7


def test_energy_on_a_segment_height():
    profile = PotentialProfile(segments=[(0.7, 1.0), (0.4, 2.0), (0.3, 1.0)], mass=EffectiveMass(0.3))
    result, coefficients = solve(profile, 1.0)
    assert [r.kind for r in coefficients.regions[1:-1]] == ['linear', 'evanescent', 'linear']
    assert abs(result.t_prob + result.r_prob - 1.0) <= 1e-10
    assert coefficients.residual <= 1e-10


def test_unitarity_fifty_random_segments():
    rng = np.random.default_rng(11)
    for _ in range(20):
        profile = random_profile(rng, 50)
        for energy in rng.uniform(0.1, 6.0, size=5):
            result, coefficients = solve(profile, float(energy))
            assert abs(result.t_prob + result.r_prob - 1.0) <= 1e-10
            assert coefficients.residual <= 1e-10


def test_composition_and_reciprocity():
    rng = np.random.default_rng(5)
    for _ in range(50):
        profile = random_profile(rng, 6)
        energy = float(rng.uniform(0.1, 6.0))
        reference = transmission_only(profile, energy).t_prob
        index = int(rng.integers(0, 6))
        split = profile.split_segment(index, float(rng.uniform(0.1, 0.9)))
        assert transmission_only(split, energy).t_prob == pytest.approx(reference, rel=1e-10)
        assert transmission_only(profile.reversed(), energy).t_prob == pytest.approx(reference, rel=1e-10)


def test_double_barrier_resonance():
    mass = EffectiveMass(0.067)
    profile = PotentialProfile.double(0.3, 2.0, 5.0, mass=mass)
    rows = sweep(profile, 0.01, 0.2, 600)
    peak = max(range(len(rows)), key=lambda i: rows[i].t_prob)
    lo, hi = rows[max(peak - 1, 0)].energy, rows[min(peak + 1, len(rows) - 1)].energy
    best = minimize_scalar(lambda e: -transmission_only(profile, e).t_prob, bounds=(lo, hi), method='bounded',
                           options={'xatol': 1e-12})
    t_peak = transmission_only(profile, best.x).t_prob
    assert t_peak > 0.9999
    # a single barrier of the same kind stays far from full transmission there
    single = PotentialProfile.single(RectangularBarrier(v0=0.3, d=2.0, mass=mass))
    assert transmission_only(single, best.x).t_prob < 0.5
    assert numerov_transmission(profile, best.x) == pytest.approx(t_peak, rel=1e-6)


def test_sweep_endpoints_and_order(oxide_barrier):
    profile = PotentialProfile.single(oxide_barrier)
    rows = sweep(profile, 0.5, 2.5, 2)
    assert [r.energy for r in rows] == [0.5, 2.5]
    with pytest.raises(ValidationError):
        sweep(profile, 2.5, 0.5, 10)
    with pytest.raises(ValidationError):
        sweep(profile, 0.5, 2.5, 1)


def test_sweep_shape_through_the_barrier_top(oxide_barrier):
    profile = PotentialProfile.single(oxide_barrier)
    rows = sweep(profile, 0.1, 6.0, 512)
    energies = [r.energy for r in rows]
    assert energies == sorted(energies)
    below = [r.t_prob for r in rows if r.energy < 3.1]
    assert all(a < b for a, b in zip(below, below[1:]))
    assert {r.regime for r in rows} >= {'below', 'above'}
    assert all(not r.flags for r in rows)
    near = sweep(profile, 3.0, 3.2, 401)
    steps = np.abs(np.diff([r.t_prob for r in near]))
    assert steps.max() < 1e-3


def test_threaded_sweep_keeps_energy_order():
    profile = PotentialProfile.double(0.3, 0.5, 5.0, mass=EffectiveMass(0.067))
    serial = sweep(profile, 0.01, 1.0, 257)
    threaded = sweep(profile, 0.01, 1.0, 257, workers=4)
    assert [r.energy for r in threaded] == [r.energy for r in serial]
    assert [r.t_prob for r in threaded] == [r.t_prob for r in serial]


def test_failed_rows_are_flagged_not_raised():
    profile = PotentialProfile(segments=[(1.0, 1.0)])
    rows = sweep_energies(profile, [-1.0, 0.5])
    assert rows[0].regime == 'failed' and rows[0].flags
    assert np.isnan(rows[0].t_prob)
    assert rows[1].regime == 'below' and not rows[1].flags
