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

import logging
import math

import numpy as np
import pytest

from tunnelzilla.errors import ValidationError
from tunnelzilla.physics.analytic_barrier import RectangularBarrier, transmission
from tunnelzilla.physics.transfer_matrix import PotentialProfile
from tunnelzilla.physics.units_core import EffectiveMass, constants, make_grid
from tunnelzilla.physics.wavepacket import (EvolutionSettings, TimeSample, WavePacketSpec, WaveFunction, arrival_time,
                                            cfl_guide,
                                            classical_filter_fraction, compare_models, evolve, init_gaussian,
                                            momentum_moments, momentum_spectrum, position_moments,
                                            region_probability, settle_index, spectral_transmission, suggest_dt,
                                            suggest_grid, suggest_run_time)
from tunnelzilla.utils import EventHandler

HBAR = constants().hbar


@pytest.fixture
def centred_packet(wide_grid):
    return init_gaussian(WavePacketSpec(x0=0.0, sigma_x=1.0, e0=0.01), wide_grid)


def moving_packet(e0=0.5):
    spec = WavePacketSpec(x0=-5.0, sigma_x=1.0, e0=e0)
    return spec, init_gaussian(spec, make_grid(-15.0, 15.0, 1501))


def test_spec_validation():
    for kwargs in ({'sigma_x': 0.0}, {'e0': 0.0}, {'x0': float('nan')}):
        values = dict(x0=0.0, sigma_x=1.0, e0=1.0)
        values.update(kwargs)
        with pytest.raises(ValidationError):
            WavePacketSpec(**values)


def test_gaussian_moments(centred_packet):
    assert centred_packet.norm == pytest.approx(1.0, abs=1e-12)
    mean_x, delta_x = position_moments(centred_packet)
    assert mean_x == pytest.approx(0.0, abs=1e-10)
    assert delta_x == pytest.approx(1.0, rel=1e-6)

    spec = WavePacketSpec(x0=0.0, sigma_x=1.0, e0=0.01)
    mean_p, delta_p = momentum_moments(centred_packet)
    assert mean_p == pytest.approx(HBAR * spec.k0, rel=1e-6)
    assert delta_p == pytest.approx(0.3291, abs=1e-4)
    assert delta_x * delta_p >= 0.5 * HBAR * (1.0 - 1e-10)
    assert delta_x * delta_p == pytest.approx(0.5 * HBAR, rel=1e-4)


def test_packet_must_fit(wide_grid, caplog):
    with pytest.raises(ValidationError):
        init_gaussian(WavePacketSpec(x0=-10.0, sigma_x=1.0, e0=1.0), wide_grid)
    with pytest.raises(ValidationError):
        init_gaussian(WavePacketSpec(x0=0.0, sigma_x=3.0, e0=1.0), wide_grid)
    with caplog.at_level(logging.WARNING):
        init_gaussian(WavePacketSpec(x0=-5.0, sigma_x=1.0, e0=1.0), wide_grid)
    assert 'within 8 sigma' in caplog.text


def test_wavefunction_shape_and_normalisation(wide_grid):
    with pytest.raises(ValidationError):
        WaveFunction(grid=wide_grid, amplitudes=np.ones(10))
    with pytest.raises(ValidationError):
        WaveFunction(grid=wide_grid, amplitudes=np.zeros(wide_grid.n_points)).normalized()
    raw = WaveFunction(grid=wide_grid, amplitudes=3.0 * np.exp(-wide_grid.points ** 2))
    assert raw.normalized().norm == pytest.approx(1.0, rel=1e-12)


def test_momentum_spectrum(centred_packet):
    spectrum = momentum_spectrum(centred_packet)
    assert spectrum.total == pytest.approx(1.0, abs=1e-6)
    assert np.all(spectrum.density >= 0.0)
    assert np.all(np.diff(spectrum.k) > 0.0)
    mean_k, spread_k = spectrum.moments()
    assert mean_k == pytest.approx(WavePacketSpec(x0=0.0, sigma_x=1.0, e0=0.01).k0, rel=1e-6)
    assert spread_k == pytest.approx(0.5, rel=1e-6)
    np.testing.assert_allclose(spectrum.energy, constants().hbar2_over_2me * spectrum.k ** 2)


def test_free_motion_group_velocity_and_spreading():
    spec, psi = moving_packet()
    later = evolve(psi, PotentialProfile(), 0.01, 1000)
    assert later.time == pytest.approx(10.0)
    assert abs(later.norm - 1.0) <= 1e-8
    mean_x, delta_x = position_moments(later)
    assert (mean_x - spec.x0) / 10.0 == pytest.approx(spec.group_velocity, rel=1e-2)
    assert delta_x ** 2 == pytest.approx(1.0 + (HBAR * 10.0 / (2.0 * spec.mass.mass)) ** 2, rel=1e-2)
    assert delta_x == pytest.approx(spec.sigma_at(10.0), rel=1e-2)


def test_zero_steps_returns_a_copy():
    _, psi = moving_packet()
    same = evolve(psi, PotentialProfile(), 0.01, 0)
    np.testing.assert_array_equal(same.amplitudes, psi.amplitudes)
    assert same.amplitudes is not psi.amplitudes
    assert same.time == psi.time


def test_evolve_validation_and_guide_flag():
    _, psi = moving_packet()
    with pytest.raises(ValidationError):
        evolve(psi, PotentialProfile(), 0.0, 10)
    with pytest.raises(ValidationError):
        evolve(psi, PotentialProfile(), 0.01, -1)
    guide = cfl_guide(psi.grid, psi.mass)
    coarse = evolve(psi, PotentialProfile(), 2.0 * guide, 1)
    assert 'dt_above_guide' in coarse.flags


def test_evolve_posts_progress():
    _, psi = moving_packet()
    seen = []
    events = EventHandler(src='evolve', event='progress')
    events.subscribe('progress', lambda packet: seen.append((packet['payload']['step'], packet['payload']['t_fs'],
                                                          packet['payload']['norm'])))
    evolve(psi, PotentialProfile(), 0.01, 10, events=events, record_every=3)
    assert [step for step, _, _ in seen] == [0, 3, 6, 9, 10]
    np.testing.assert_allclose([t for _, t, _ in seen], [0.0, 0.03, 0.06, 0.09, 0.1])
    np.testing.assert_allclose([n for _, _, n in seen], 1.0, atol=1e-10)


@pytest.mark.slow
def test_norm_drift_over_ten_thousand_steps():
    spec = WavePacketSpec(x0=-5.0, sigma_x=1.0, e0=0.5)
    psi = init_gaussian(spec, make_grid(-20.0, 20.0, 8192))
    profile = PotentialProfile.single(RectangularBarrier(v0=0.6, d=1.0))
    later = evolve(psi, profile, 0.002, 10000)
    assert abs(later.norm - psi.norm) <= 1e-8
    assert 'norm_drift' not in later.flags


def test_region_probability(centred_packet):
    grid = centred_packet.grid
    whole = region_probability(centred_packet, grid.x_min, grid.x_max)
    parts = (region_probability(centred_packet, grid.x_min, 0.0)
             + region_probability(centred_packet, 0.0, 1.3)
             + region_probability(centred_packet, 1.3, grid.x_max))
    assert parts == pytest.approx(whole, abs=1e-10)
    assert whole == pytest.approx(1.0, abs=1e-8)
    assert region_probability(centred_packet, -1.0, 1.0) == pytest.approx(math.erf(1.0 / math.sqrt(2.0)), abs=1e-4)
    with pytest.raises(ValidationError):
        region_probability(centred_packet, 1.0, 1.0)
    with pytest.raises(ValidationError):
        region_probability(centred_packet, -20.0, 0.0)


def test_classical_filter_limits(wide_grid):
    spectrum = momentum_spectrum(init_gaussian(WavePacketSpec(x0=0.0, sigma_x=1.0, e0=1.5), wide_grid))
    assert classical_filter_fraction(spectrum, 0.15) > 0.99
    assert classical_filter_fraction(spectrum, 15.0) < 1e-6
    assert 0.4 < classical_filter_fraction(spectrum, 1.5) < 0.6


def test_spectral_transmission_limits(wide_grid, oxide_barrier):
    spectrum = momentum_spectrum(init_gaussian(WavePacketSpec(x0=0.0, sigma_x=1.0, e0=1.5), wide_grid))
    assert spectral_transmission(spectrum, PotentialProfile()) == 1.0
    value = spectral_transmission(spectrum, PotentialProfile.single(oxide_barrier))
    # tunnelling favours the fast side of the spectrum
    assert transmission(1.5, oxide_barrier).t_prob < value < 1e-2


def test_spectral_transmission_of_a_narrow_spectrum(oxide_barrier):
    spec = WavePacketSpec(x0=-50.0, sigma_x=10.0, e0=1.5)
    spectrum = momentum_spectrum(init_gaussian(spec, make_grid(-110.0, 10.0, 4096)))
    value = spectral_transmission(spectrum, PotentialProfile.single(oxide_barrier))
    assert value == pytest.approx(transmission(1.5, oxide_barrier).t_prob, rel=2e-2)


def test_suggested_run_time_clears_the_barrier():
    spec = WavePacketSpec(x0=-8.0, sigma_x=1.0, e0=5.0)
    profile = PotentialProfile.single(RectangularBarrier(v0=3.1, d=1.0))
    t = suggest_run_time(spec, profile)
    assert spec.x0 + spec.group_velocity * t - 1.0 == pytest.approx(4.0 * spec.sigma_at(t), rel=1e-9)

    slow = WavePacketSpec(x0=-8.0, sigma_x=0.1, e0=0.001)
    t_slow = suggest_run_time(slow, profile)
    n = 0.9 * slow.group_velocity / slow.spreading_velocity
    assert t_slow > 0.0
    assert slow.x0 + slow.group_velocity * t_slow - 1.0 == pytest.approx(n * slow.sigma_at(t_slow), rel=1e-9)


def test_suggested_grid_and_step():
    spec = WavePacketSpec(x0=-8.0, sigma_x=1.0, e0=5.0)
    profile = PotentialProfile.single(RectangularBarrier(v0=3.1, d=1.0))
    grid = suggest_grid(spec, profile)
    assert grid.dx <= 2.0 * math.pi / (20.0 * (spec.k0 + 2.5)) + 1e-12
    assert grid.x_min <= spec.x0 - 10.0 and grid.x_max > 1.0
    dt = suggest_dt(grid, spec)
    assert 0.0 < dt <= 0.5 * cfl_guide(grid, spec.mass)


def test_settle_index():
    def sample(t, left, barrier, right):
        return TimeSample(t, 1.0, left, barrier, right, 0.0, 0.0, 0.0)

    rights = [0.0, 0.0, 0.1, 0.3, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5]
    barriers = [0.0, 0.2, 0.5, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    series = [sample(float(i), 1.0 - r - b, b, r) for i, (r, b) in enumerate(zip(rights, barriers))]
    assert settle_index(series) == 4
    moving = series[:-1] + [sample(9.0, 0.4, 0.0, 0.6)]
    assert settle_index(moving) is None
    assert settle_index(series[:1]) is None


def test_compare_models_rejections():
    spec = WavePacketSpec(x0=-8.0, sigma_x=1.0, e0=1.0)
    grid = make_grid(-20.0, 20.0, 2001)
    run = EvolutionSettings(dt=0.01, n_steps=10)
    with pytest.raises(ValidationError):
        compare_models(spec, PotentialProfile.double(1.0, 0.5, 1.0), run, grid=grid)
    with pytest.raises(ValidationError):
        compare_models(WavePacketSpec(x0=-3.0, sigma_x=1.0, e0=1.0), PotentialProfile.single(RectangularBarrier(1.0, 1.0)),
                       run, grid=grid)


def test_compare_models_free_flight():
    spec = WavePacketSpec(x0=-10.0, sigma_x=1.0, e0=1.0)
    profile = PotentialProfile(segments=[(2.0, 0.0)])
    run = EvolutionSettings(dt=0.01, n_steps=4000, record_every=10, snapshot_times=(0.0, 20.0, 40.0))
    result = compare_models(spec, profile, run, grid=make_grid(-30.0, 45.0, 3751))
    assert result.v0 == 0.0
    assert result.t_spec == pytest.approx(1.0, abs=1e-12)
    assert result.classical_filter == 1.0
    assert result.exact > 0.999
    assert result.settled
    settled_at = next(s for s in result.series if s.t_fs == result.settle_time)
    assert result.exact == pytest.approx(settled_at.prob_right, abs=1e-12)
    assert result.settle_time < result.series[-1].t_fs
    assert sorted(result.snapshots) == [0.0, 20.0, 40.0]
    assert len(result.series) == 401
    assert result.series[0].prob_left == pytest.approx(1.0, abs=1e-8)


def test_compare_models_far_above_the_barrier():
    spec = WavePacketSpec(x0=-8.0, sigma_x=1.0, e0=5.0)
    profile = PotentialProfile.single(RectangularBarrier(v0=0.1, d=1.0))
    run = EvolutionSettings(dt=0.005, n_steps=2600, record_every=20)
    result = compare_models(spec, profile, run, grid=make_grid(-30.0, 30.0, 4001))
    assert result.exact > 0.99
    assert result.t_spec > 0.99
    assert result.classical_filter > 0.99


def test_run_that_ends_before_the_barrier_is_not_settled():
    spec = WavePacketSpec(x0=-15.0, sigma_x=1.0, e0=5.0)
    profile = PotentialProfile.single(RectangularBarrier(v0=3.1, d=1.0))
    run = EvolutionSettings(dt=0.005, n_steps=200)
    assert run.t_end < arrival_time(spec, profile) < suggest_run_time(spec, profile)
    result = compare_models(spec, profile, run, grid=make_grid(-30.0, 30.0, 4001))
    assert not result.settled
    assert result.settle_time is None
    assert 'not_arrived' in result.flags
    assert 'unsettled' in result.flags
    assert result.exact == pytest.approx(0.0, abs=1e-6)


def test_deep_tunneling_follows_the_spectral_average(light_mass):
    spec = WavePacketSpec(x0=-8.0, sigma_x=1.0, e0=1.5, mass=light_mass)
    profile = PotentialProfile.single(RectangularBarrier(v0=3.1, d=1.0, mass=light_mass))
    t_end = suggest_run_time(spec, profile)
    grid = suggest_grid(spec, profile, t_end)
    dt = suggest_dt(grid, spec)
    run = EvolutionSettings(dt=dt, n_steps=int(math.ceil(t_end / dt)), record_every=10)
    result = compare_models(spec, profile, run, grid=grid)
    assert result.settled
    assert 'not_arrived' not in result.flags
    assert result.exact == pytest.approx(result.t_spec, rel=2e-2)
    # below the barrier the step filter misses the tunnelled share of the spectrum
    assert abs(result.exact - result.classical_filter) > abs(result.exact - result.t_spec)
    assert result.classical_filter < result.exact


def _above_barrier_run(n_points, dt):
    spec = WavePacketSpec(x0=-8.0, sigma_x=1.0, e0=5.0)
    profile = PotentialProfile.single(RectangularBarrier(v0=3.1, d=1.0))
    run = EvolutionSettings(dt=dt, n_steps=int(round(14.0 / dt)), record_every=20)
    return compare_models(spec, profile, run, grid=make_grid(-30.0, 30.0, n_points))


def test_time_domain_matches_spectral_average():
    result = _above_barrier_run(10001, 0.005)
    assert 0.0 < result.exact < 1.0
    assert result.exact == pytest.approx(result.t_spec, rel=2e-2)
    assert result.discrepancies['exact_minus_spectral'] == pytest.approx(result.exact - result.t_spec)
    # the classical filter passes nearly everything at this energy
    assert result.classical_filter > result.exact


@pytest.mark.slow
def test_time_domain_result_is_resolution_stable():
    coarse = _above_barrier_run(10001, 0.005)
    fine = _above_barrier_run(20001, 0.0025)
    assert fine.exact == pytest.approx(coarse.exact, rel=5e-3)
    assert fine.t_spec == pytest.approx(coarse.t_spec, rel=5e-3)
    assert fine.classical_filter == pytest.approx(coarse.classical_filter, rel=5e-3)
    for value in (fine.exact, fine.t_spec, fine.classical_filter):
        assert 0.0 <= value <= 1.0
