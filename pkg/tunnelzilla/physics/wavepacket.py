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
Gaussian wave packets on a uniform grid.

Dynamics use Crank-Nicolson (implicit midpoint) steps with a tridiagonal
finite-difference Hamiltonian between hard walls at the grid ends; the
propagator is a Cayley transform and therefore unitary.  The potential is
the cell average of the profile over each grid cell so a barrier keeps its
exact width whether or not its edges fall on grid points.

The module also compares three readings of the transmitted fraction of a
packet hitting a single barrier: the time-domain result, the spectral
average of the stationary T(E), and the "classical filter" in which only
components with E > V0 cross.
"""

__author__ = 'Sandboxzilla'

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sparse
from scipy.integrate import cumulative_trapezoid
from scipy.sparse.linalg import splu

from ..errors import ValidationError
from ..utils import EventHandler, debug_write
from .analytic_barrier import wavevector
from .transfer_matrix import PotentialProfile, transmission_only
from .units_core import EffectiveMass, SpatialGrid, check_finite, constants, make_grid

log = logging.getLogger(__name__)

NORM_DRIFT_LIMIT = 1e-8
SETTLE_RATE = 1e-4          # probability per fs
FIT_SIGMAS = 5.0
WALL_SIGMAS = 10.0
CLEAR_SIGMAS = 4.0
ARRIVAL_SIGMAS = 2.0
LEFT_TAIL_LIMIT = 1e-8
SPECTRAL_CUTOFF = 1e-14     # relative density below which components are skipped


@dataclass(frozen=True)
class WavePacketSpec:
    x0: float        # nm
    sigma_x: float   # nm, position standard deviation
    e0: float        # eV, central kinetic energy, moving right
    mass: EffectiveMass = EffectiveMass()

    def __post_init__(self):
        check_finite("packet parameters", self.x0, self.sigma_x, self.e0)
        if self.sigma_x <= 0.0:
            raise ValidationError("sigma_x must be > 0, got %r" % (self.sigma_x,))
        if self.e0 <= 0.0:
            raise ValidationError("e0 must be > 0, got %r" % (self.e0,))

    @property
    def k0(self) -> float:
        return wavevector(self.e0, self.mass)

    @property
    def group_velocity(self) -> float:
        """hbar k0 / m* in nm/fs."""
        return constants().hbar * self.k0 / self.mass.mass

    @property
    def spreading_velocity(self) -> float:
        """Late time growth rate of the position spread, hbar / (2 m* sigma_x)."""
        return constants().hbar / (2.0 * self.mass.mass * self.sigma_x)

    def sigma_at(self, t: float) -> float:
        """Free-space position spread after ``t`` fs."""
        return math.hypot(self.sigma_x, self.spreading_velocity * t)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    grid: SpatialGrid
    amplitudes: np.ndarray
    mass: EffectiveMass = EffectiveMass()
    time: float = 0.0
    flags: Tuple[str, ...] = ()
    norm: float = field(init=False)

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.shape != (self.grid.n_points,):
            raise ValidationError("expected %d amplitudes, got shape %s" % (self.grid.n_points, amplitudes.shape))
        object.__setattr__(self, 'amplitudes', amplitudes)
        object.__setattr__(self, 'norm', float(np.sum(np.abs(amplitudes) ** 2) * self.grid.dx))

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def normalized(self) -> 'WaveFunction':
        if self.norm <= 0.0:
            raise ValidationError("cannot normalize a zero state")
        return replace(self, amplitudes=self.amplitudes / math.sqrt(self.norm))


@dataclass(frozen=True, eq=False)
class MomentumSpectrum:
    k: np.ndarray         # 1/nm, ascending, signed
    density: np.ndarray   # |phi(k)|^2 in nm
    energy: np.ndarray    # eV, hbar^2 k^2 / (2 m*)
    dk: float
    mass: EffectiveMass = EffectiveMass()

    @property
    def total(self) -> float:
        return float(np.sum(self.density) * self.dk)

    def moments(self) -> Tuple[float, float]:
        """Mean and standard deviation of k."""
        total = np.sum(self.density)
        mean = float(np.sum(self.k * self.density) / total)
        var = float(np.sum((self.k - mean) ** 2 * self.density) / total)
        return mean, math.sqrt(max(var, 0.0))


@dataclass(frozen=True)
class EvolutionSettings:
    dt: float                 # fs
    n_steps: int
    record_every: int = 10
    snapshot_times: Tuple[float, ...] = ()

    def __post_init__(self):
        check_finite("time step", self.dt)
        if self.dt <= 0.0:
            raise ValidationError("dt must be > 0, got %r" % (self.dt,))
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise ValidationError("n_steps must be an integer >= 0, got %r" % (self.n_steps,))
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValidationError("record_every must be an integer >= 1, got %r" % (self.record_every,))

    @property
    def t_end(self) -> float:
        return self.dt * self.n_steps


@dataclass(frozen=True)
class TimeSample:
    t_fs: float
    norm: float
    prob_left: float
    prob_barrier: float
    prob_right: float
    x_mean: float
    x_left_mean: float
    x_right_mean: float


@dataclass(frozen=True, eq=False)
class ModelComparison:
    spec: WavePacketSpec
    profile: PotentialProfile
    barrier_width: float
    v0: float
    exact: float
    t_spec: float
    classical_filter: float
    discrepancies: Dict[str, float]
    settled: bool
    settle_time: Optional[float]
    series: Tuple[TimeSample, ...]
    snapshots: Dict[float, np.ndarray]
    grid: SpatialGrid
    flags: Tuple[str, ...] = ()


def check_fits(spec: WavePacketSpec, grid: SpatialGrid):
    margin = FIT_SIGMAS * spec.sigma_x
    if spec.x0 - grid.x_min < margin or grid.x_max - spec.x0 < margin:
        raise ValidationError("packet at x0=%r with sigma %r does not fit the grid [%r, %r]"
                              % (spec.x0, spec.sigma_x, grid.x_min, grid.x_max))


def init_gaussian(spec: WavePacketSpec, grid: SpatialGrid) -> WaveFunction:
    check_fits(spec, grid)
    x = grid.points
    psi = np.exp(-(x - spec.x0) ** 2 / (4.0 * spec.sigma_x ** 2)) * np.exp(1j * spec.k0 * x)
    wave = WaveFunction(grid=grid, amplitudes=psi, mass=spec.mass).normalized()
    if min(spec.x0 - grid.x_min, grid.x_max - spec.x0) < 8.0 * spec.sigma_x:
        log.warning('PACKET,within 8 sigma of a wall; moments near the walls are degraded')
    return wave


def position_moments(psi: WaveFunction) -> Tuple[float, float]:
    """Mean and standard deviation of x."""
    rho = psi.density
    total = np.sum(rho)
    x = psi.grid.points
    mean = float(np.sum(x * rho) / total)
    var = float(np.sum((x - mean) ** 2 * rho) / total)
    return mean, math.sqrt(max(var, 0.0))


def momentum_moments(psi: WaveFunction) -> Tuple[float, float]:
    """Mean and standard deviation of p in eV fs/nm, from the Fourier spectrum."""
    mean_k, spread_k = momentum_spectrum(psi).moments()
    hbar = constants().hbar
    return hbar * mean_k, hbar * spread_k


def potential_on_grid(profile: PotentialProfile, grid: SpatialGrid) -> np.ndarray:
    return profile.cell_average(grid.points, grid.dx)


def hamiltonian(grid: SpatialGrid, profile: PotentialProfile) -> sparse.csr_matrix:
    """Tridiagonal H in eV with hard walls just outside the grid ends."""
    kinetic = profile.mass.hbar2_over_2m / grid.dx ** 2
    main = 2.0 * kinetic + potential_on_grid(profile, grid)
    off = np.full(grid.n_points - 1, -kinetic)
    return sparse.diags([off, main, off], [-1, 0, 1], format='csr')


def cfl_guide(grid: SpatialGrid, mass: EffectiveMass) -> float:
    """10 * 2 m* dx^2 / hbar, in fs."""
    return 10.0 * 2.0 * mass.mass * grid.dx ** 2 / constants().hbar


def evolve(psi: WaveFunction, profile: PotentialProfile, dt: float, n_steps: int,
           events: Optional[EventHandler] = None, record_every: int = 1) -> WaveFunction:
    """
    Advance ``psi`` by ``n_steps`` Crank-Nicolson steps of ``dt`` fs.

    When ``events`` is given it receives a packet every ``record_every`` steps
    (and for the initial state) with payload ``{step, t_fs, norm, psi}``;
    the psi array is only valid during the callback.
    """
    check_finite("time step", dt)
    if dt <= 0.0:
        raise ValidationError("dt must be > 0, got %r" % (dt,))
    if int(n_steps) != n_steps or n_steps < 0:
        raise ValidationError("n_steps must be an integer >= 0, got %r" % (n_steps,))
    grid = psi.grid
    flags = list(psi.flags)
    if profile.mass != psi.mass:
        log.warning('EVOLVE,profile mass %r differs from the packet mass %r', profile.mass.ratio, psi.mass.ratio)
    guide = cfl_guide(grid, profile.mass)
    if dt > guide:
        log.warning('EVOLVE,dt=%g fs above the resolution guide %g fs', dt, guide)
        flags.append('dt_above_guide')

    amplitudes = psi.amplitudes.copy()
    norm0 = psi.norm
    publish = events is not None and events.has_subscribers
    if publish:
        events.post({'step': 0, 't_fs': psi.time, 'norm': norm0, 'psi': amplitudes})
    if n_steps == 0:
        return replace(psi, amplitudes=amplitudes)

    h = hamiltonian(grid, profile)
    identity = sparse.identity(grid.n_points, dtype=complex, format='csc')
    factor = 0.5j * dt / constants().hbar
    implicit = splu((identity + factor * h).tocsc())
    explicit = (identity - factor * h).tocsr()

    for step in range(1, int(n_steps) + 1):
        amplitudes = implicit.solve(explicit @ amplitudes)
        if publish and (step % record_every == 0 or step == n_steps):
            events.post({'step': step,
                         't_fs': psi.time + step * dt,
                         'norm': float(np.sum(np.abs(amplitudes) ** 2) * grid.dx),
                         'psi': amplitudes})

    result = WaveFunction(grid=grid, amplitudes=amplitudes, mass=psi.mass,
                          time=psi.time + n_steps * dt, flags=tuple(flags))
    drift = abs(result.norm - norm0)
    if drift > NORM_DRIFT_LIMIT:
        log.warning('EVOLVE,norm drift %.3g over %d steps', drift, n_steps)
        result = replace(result, flags=result.flags + ('norm_drift',))
    debug_write(log, 'EVOLVE', 'steps=%d dt=%g drift=%.3g' % (n_steps, dt, drift))
    return result


def _integral_to(x: np.ndarray, f: np.ndarray, cumulative: np.ndarray, point: float) -> float:
    """Integral of the piecewise linear interpolant of f from x[0] to ``point``."""
    i = min(int(np.searchsorted(x, point, side='right')) - 1, len(x) - 2)
    i = max(i, 0)
    f_point = f[i] + (f[i + 1] - f[i]) * (point - x[i]) / (x[i + 1] - x[i])
    return float(cumulative[i] + 0.5 * (point - x[i]) * (f[i] + f_point))


def _region_probability(x, rho, cumulative, a, b) -> float:
    return _integral_to(x, rho, cumulative, b) - _integral_to(x, rho, cumulative, a)


def region_probability(psi: WaveFunction, a: float, b: float) -> float:
    """Trapezoidal probability of finding the particle in [a, b]."""
    check_finite("region bounds", a, b)
    grid = psi.grid
    if not a < b:
        raise ValidationError("region needs a < b, got [%r, %r]" % (a, b))
    if a < grid.x_min or b > grid.x_max:
        raise ValidationError("region [%r, %r] outside the grid [%r, %r]" % (a, b, grid.x_min, grid.x_max))
    x = grid.points
    rho = psi.density
    return _region_probability(x, rho, cumulative_trapezoid(rho, x, initial=0.0), a, b)


def momentum_spectrum(psi: WaveFunction) -> MomentumSpectrum:
    grid = psi.grid
    n = grid.n_points
    phi = np.fft.fftshift(np.fft.fft(psi.amplitudes)) * grid.dx / math.sqrt(2.0 * math.pi)
    k = np.fft.fftshift(np.fft.fftfreq(n, d=grid.dx)) * 2.0 * math.pi
    dk = 2.0 * math.pi / (n * grid.dx)
    return MomentumSpectrum(k=k, density=np.abs(phi) ** 2, energy=psi.mass.hbar2_over_2m * k ** 2,
                            dk=dk, mass=psi.mass)


def _rightward(spectrum: MomentumSpectrum) -> Tuple[np.ndarray, float]:
    mask = spectrum.k > 0.0
    weight = float(np.sum(spectrum.density[mask]))
    if weight <= 0.0:
        raise ValidationError("spectrum has no rightward moving component")
    return mask, weight


def spectral_transmission(spectrum: MomentumSpectrum, profile: PotentialProfile) -> float:
    """Spectrum weighted average of the stationary T(E) over rightward components."""
    mask, weight = _rightward(spectrum)
    if not profile.segments:
        return 1.0
    if profile.mass != spectrum.mass:
        log.warning('SPECTRAL,profile mass %r differs from the packet mass %r', profile.mass.ratio, spectrum.mass.ratio)
    density = spectrum.density[mask]
    energies = spectrum.energy[mask] + profile.lead_height
    keep = density > SPECTRAL_CUTOFF * density.max()
    t_values = np.array([transmission_only(profile, float(e)).t_prob for e in energies[keep]])
    return float(np.sum(density[keep] * t_values) / weight)


def classical_filter_fraction(spectrum: MomentumSpectrum, v0: float) -> float:
    """Share of rightward probability with kinetic energy above ``v0``."""
    mask, weight = _rightward(spectrum)
    above = spectrum.energy[mask] > v0
    return float(np.sum(spectrum.density[mask][above]) / weight)


def suggest_run_time(spec: WavePacketSpec, profile: PotentialProfile, clear_sigmas: float = CLEAR_SIGMAS) -> float:
    """
    Time in fs at which the packet centre has passed the far edge of the
    profile by ``clear_sigmas`` of its spread at that time.  Packets that
    spread nearly as fast as they move use a smaller multiple.
    """
    v = spec.group_velocity
    s = spec.spreading_velocity
    n = clear_sigmas
    if v <= 1.1 * n * s:
        n = 0.9 * v / s
        log.warning('PACKET,spreads at %.3g nm/fs against a group velocity of %.3g nm/fs; clearing by %.2g sigma',
                    s, v, n)
    return _clearing_time(spec, profile, n)


def arrival_time(spec: WavePacketSpec, profile: PotentialProfile) -> float:
    """Earliest time in fs at which a run can have carried the packet across the profile."""
    return _clearing_time(spec, profile, min(ARRIVAL_SIGMAS, 0.9 * spec.group_velocity / spec.spreading_velocity))


def _clearing_time(spec: WavePacketSpec, profile: PotentialProfile, n: float) -> float:
    v = spec.group_velocity
    s = spec.spreading_velocity
    c = profile.total_width - spec.x0
    # v t - c = n sigma(t), solved for t
    a = v * v - (n * s) ** 2
    return (v * c + math.sqrt((c * n * s) ** 2 + a * (n * spec.sigma_x) ** 2)) / a


def suggest_grid(spec: WavePacketSpec, profile: PotentialProfile, t_end: Optional[float] = None) -> SpatialGrid:
    """
    Grid with dx <= 2 pi / (20 k_max), k_max = k0 + 5 / (2 sigma_x), and walls
    at least ten spreads beyond the reflected and transmitted packets at ``t_end``.
    """
    if t_end is None:
        t_end = suggest_run_time(spec, profile)
    k_max = spec.k0 + 5.0 / (2.0 * spec.sigma_x)
    dx_max = 2.0 * math.pi / (20.0 * k_max)
    travel = spec.group_velocity * t_end
    spread = WALL_SIGMAS * spec.sigma_at(t_end)
    x_min = min(spec.x0 - WALL_SIGMAS * spec.sigma_x, -(travel + spec.x0) - spread)
    x_max = max(profile.total_width, spec.x0 + travel) + spread
    n_points = max(int(math.ceil((x_max - x_min) / dx_max)) + 1, 8)
    return make_grid(x_min, x_max, n_points)


def suggest_dt(grid: SpatialGrid, spec: WavePacketSpec) -> float:
    k_max = spec.k0 + 5.0 / (2.0 * spec.sigma_x)
    e_max = spec.mass.hbar2_over_2m * k_max ** 2
    return min(0.5 * cfl_guide(grid, spec.mass), 0.1 * constants().hbar / e_max)


class _SeriesRecorder(object):
    """Subscriber that turns evolve progress packets into region probabilities."""

    def __init__(self, grid: SpatialGrid, width: float, snapshot_times: Sequence[float] = ()):
        self.x = grid.points
        self.width = width
        self.samples: List[TimeSample] = []
        self.pending = sorted(snapshot_times)
        self.snapshots: Dict[float, np.ndarray] = {}
        self.left = self.x < 0.0
        self.right = self.x > width

    def __call__(self, packet: dict):
        payload = packet['payload']
        rho = np.abs(payload['psi']) ** 2
        cumulative = cumulative_trapezoid(rho, self.x, initial=0.0)
        x_lo, x_hi = float(self.x[0]), float(self.x[-1])
        prob_left = _region_probability(self.x, rho, cumulative, x_lo, 0.0)
        prob_barrier = _region_probability(self.x, rho, cumulative, 0.0, self.width) if self.width > 0.0 else 0.0
        prob_right = _region_probability(self.x, rho, cumulative, self.width, x_hi)
        self.samples.append(TimeSample(t_fs=payload['t_fs'],
                                       norm=payload['norm'],
                                       prob_left=prob_left,
                                       prob_barrier=prob_barrier,
                                       prob_right=prob_right,
                                       x_mean=_centroid(self.x, rho),
                                       x_left_mean=_centroid(self.x[self.left], rho[self.left]),
                                       x_right_mean=_centroid(self.x[self.right], rho[self.right])))
        while self.pending and payload['t_fs'] >= self.pending[0] - 1e-12:
            self.snapshots[self.pending.pop(0)] = rho.copy()


def _centroid(x: np.ndarray, rho: np.ndarray) -> float:
    total = np.sum(rho)
    if total <= 0.0:
        return float('nan')
    return float(np.sum(x * rho) / total)


def settle_index(series: Sequence[TimeSample], rate: float = SETTLE_RATE) -> Optional[int]:
    """
    First sample after the barrier occupation peak from which the left and
    right probabilities change by less than ``rate`` per fs for the rest of the run.
    """
    if len(series) < 2:
        return None
    peak = int(np.argmax([s.prob_barrier for s in series]))
    settled = None
    for i in range(len(series) - 1, 0, -1):
        span = series[i].t_fs - series[i - 1].t_fs
        moving = (abs(series[i].prob_right - series[i - 1].prob_right) / span > rate
                  or abs(series[i].prob_left - series[i - 1].prob_left) / span > rate)
        if moving:
            break
        settled = i - 1
    if settled is None:
        return None
    return max(settled, peak)


def compare_models(spec: WavePacketSpec, profile: PotentialProfile, run: EvolutionSettings,
                   grid: Optional[SpatialGrid] = None) -> ModelComparison:
    if len(profile.segments) > 1:
        raise ValidationError("model comparison needs a single barrier, got %d segments" % len(profile.segments))
    if grid is None:
        grid = suggest_grid(spec, profile, run.t_end)
    psi = init_gaussian(spec, grid)
    width = profile.total_width
    v0 = profile.segments[0].height if profile.segments else profile.lead_height

    ahead = region_probability(psi, 0.0, grid.x_max) if grid.x_max > 0.0 else 0.0
    if ahead >= LEFT_TAIL_LIMIT:
        raise ValidationError("packet is not clear of the barrier: %.3g of it starts at x > 0" % ahead)

    spectrum = momentum_spectrum(psi)
    t_spec = spectral_transmission(spectrum, profile)
    classical = classical_filter_fraction(spectrum, v0 - profile.lead_height)

    recorder = _SeriesRecorder(grid, width, run.snapshot_times)
    events = EventHandler(src='evolve', event='progress')
    events.subscribe(name='series', on_event=recorder)
    final = evolve(psi, profile, run.dt, run.n_steps, events=events, record_every=run.record_every)

    flags = list(final.flags)
    series = tuple(recorder.samples)
    arrival = arrival_time(spec, profile)
    index = None
    if final.time < arrival:
        log.warning('COMPARE,run ends at t=%g fs before the packet can clear the barrier (%.4g fs)',
                    final.time, arrival)
        flags.append('not_arrived')
    else:
        index = settle_index(series)
    settled = index is not None
    if not settled:
        log.warning('COMPARE,transmitted probability not settled at t=%g fs', final.time)
        flags.append('unsettled')
    exact = series[index].prob_right if settled else series[-1].prob_right
    discrepancies = {'exact_minus_spectral': exact - t_spec,
                     'exact_minus_classical': exact - classical,
                     'spectral_minus_classical': t_spec - classical}
    debug_write(log, 'COMPARE', 'exact=%.6g spectral=%.6g classical=%.6g settled=%s'
                % (exact, t_spec, classical, settled), level=logging.INFO)
    return ModelComparison(spec=spec, profile=profile, barrier_width=width, v0=v0,
                           exact=float(min(max(exact, 0.0), 1.0)), t_spec=t_spec, classical_filter=classical,
                           discrepancies=discrepancies, settled=settled,
                           settle_time=series[index].t_fs if settled else None,
                           series=series, snapshots=recorder.snapshots, grid=grid, flags=tuple(flags))
