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
Tunneling time estimators: phase (group delay) time, dwell time, transit
time of a simulated packet, and their ratios to the uncertainty time
hbar / dE.
"""

__author__ = 'Sandboxzilla'

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import NumericalError, ValidationError
from ..utils import debug_write
from .analytic_barrier import RectangularBarrier, Regime, regime_of
from .transfer_matrix import PotentialProfile, RegionCoefficients, check_energy, solve, transmission_only
from .uncertainty import UncertaintyReport
from .units_core import EffectiveMass, check_finite, constants
from .wavepacket import ModelComparison

log = logging.getLogger(__name__)

DEFAULT_RELATIVE_STEP = 1e-4
CONVERGENCE = 1e-3
TIME_FLOOR = 1e-6          # fs, scale below which changes count as absolute
MAX_HALVINGS = 40
TINY_TRANSMISSION = 1e-100
MIN_TRANSMITTED = 1e-6
INCIDENT_LIMIT = 1e-6
LINGER_LIMIT = 1e-3
ORDER_BAND = (0.1, 10.0)
MIN_FIT_POINTS = 3
FILTER_LIMIT = 0.05        # relative centroid velocity change through the barrier

# five point first derivative, offsets -2..2
_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_OFFSETS = np.arange(-2, 3)


@dataclass(frozen=True)
class PhaseTime:
    value: float          # fs
    de: float             # eV, step of the reported value
    refinement: float     # relative change against the stencil at 2 de
    flags: Tuple[str, ...] = ()

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class PacketTransit:
    value: float          # fs, nan when no arrival could be fitted
    t_in: float
    t_out: float
    flags: Tuple[str, ...] = ()

    @property
    def reliable(self) -> bool:
        return not self.flags


@dataclass(frozen=True)
class TimeReport:
    energy: float
    phase_time: float
    dwell_time: float
    uncertainty_time: float
    packet_transit: Optional[float] = None
    profile: dict = field(default_factory=dict)
    mass: EffectiveMass = EffectiveMass()
    phase_de: float = 0.0
    phase_refinement: float = 0.0
    flags: Tuple[str, ...] = ()

    @property
    def has_barrier(self) -> bool:
        return bool(self.profile.get('segments'))


def traversal_phase(profile: PotentialProfile, energy: float) -> Tuple[float, float]:
    """
    Phase of the transmitted wave relative to free flight across the profile
    and |t|^2.  Zero for an empty profile.
    """
    result = transmission_only(profile, energy)
    k = math.sqrt((energy - profile.lead_height) / profile.mass.hbar2_over_2m)
    return cmath.phase(result.t_amp * cmath.exp(1j * k * profile.total_width)), result.t_prob


def _stencil_phases(profile: PotentialProfile, energy: float, de: float) -> Optional[Tuple[np.ndarray, float]]:
    """Unwrapped phases on the stencil, or None when a jump reaches pi/2."""
    raw = []
    t_min = 1.0
    for offset in _OFFSETS:
        phase, t_prob = traversal_phase(profile, energy + offset * de)
        raw.append(phase)
        t_min = min(t_min, t_prob)
    phases = [raw[0]]
    for value in raw[1:]:
        jump = math.remainder(value - phases[-1], 2.0 * math.pi)
        if abs(jump) >= 0.5 * math.pi:
            return None
        phases.append(phases[-1] + jump)
    return np.array(phases), t_min


def _seam_inside(profile: PotentialProfile, lo: float, hi: float) -> Optional[float]:
    for seg in profile.segments:
        if lo <= seg.height <= hi:
            return seg.height
    return None


def _derivative(profile: PotentialProfile, centre: float, de: float) -> Optional[Tuple[float, float]]:
    stencil = _stencil_phases(profile, centre, de)
    if stencil is None:
        return None
    phases, t_min = stencil
    return constants().hbar * float(np.dot(_STENCIL, phases)) / de, t_min


def phase_time(profile: PotentialProfile, energy: float, de: Optional[float] = None) -> PhaseTime:
    """
    hbar d(phi)/dE of the transmission amplitude, phi measured against free
    flight over the profile so an empty profile gives zero.

    The step starts at ``de`` (default 1e-4 of the kinetic energy) and is
    halved until no segment height sits inside the stencil, the unwrapped
    phase moves less than pi/2 between neighbours and the result changes by
    less than 1e-3 against a stencil twice as wide.  An energy sitting on a
    segment height moves the stencil just above it.
    """
    check_energy(profile, energy)
    if de is None:
        de = DEFAULT_RELATIVE_STEP * (energy - profile.lead_height)
    check_finite("de", de)
    if de <= 0.0:
        raise ValidationError("de must be > 0, got %r" % (de,))
    flags = []
    centre = energy
    floor = profile.lead_height

    for _ in range(MAX_HALVINGS):
        reach = 4.0 * de    # half span of the coarse stencil
        if centre - reach <= floor:
            de *= 0.5
            continue
        seam = _seam_inside(profile, centre - reach, centre + reach)
        if seam is not None:
            if regime_of(energy, seam) is not Regime.AT:
                de *= 0.5
                continue
            centre = seam + 1.125 * reach
            if 'stencil_shifted' not in flags:
                log.warning('PHASE,E=%r on a segment height; stencil shifted to %r', energy, centre)
                flags.append('stencil_shifted')
            continue
        coarse = _derivative(profile, centre, 2.0 * de)
        fine = _derivative(profile, centre, de)
        if coarse is None or fine is None:
            de *= 0.5
            continue
        tau, t_min = fine
        change = abs(coarse[0] - tau) / max(abs(tau), TIME_FLOOR)
        if change < CONVERGENCE:
            if t_min < TINY_TRANSMISSION:
                log.warning('PHASE,|t|^2=%.3g at E=%r; phase is ill-conditioned', t_min, energy)
                flags.append('ill_conditioned')
            debug_write(log, 'PHASE', 'E=%r tau=%.10g de=%.3g change=%.3g' % (energy, tau, de, change))
            return PhaseTime(value=tau, de=de, refinement=change, flags=tuple(flags))
        de *= 0.5
    raise NumericalError("phase time at E=%r did not converge" % (energy,))


def _region_integral(region: RegionCoefficients) -> float:
    """Integral of |psi|^2 over one segment, in closed form."""
    w = region.x_right - region.x_ref
    q = region.wavenumber
    if region.kind == 'propagating':
        a, b = region.c_plus, region.c_minus
        cross = a * b.conjugate() * (cmath.exp(2j * q * w) - 1.0) / (2j * q)
        return (abs(a) ** 2 + abs(b) ** 2) * w + 2.0 * cross.real
    if region.kind == 'evanescent':
        g, c = region.growing_at_right, region.c_minus
        edge = -math.expm1(-2.0 * q * w) / (2.0 * q)
        return (abs(g) ** 2 + abs(c) ** 2) * edge + 2.0 * (g * c.conjugate()).real * math.exp(-q * w) * w
    a, b = region.c_plus, region.c_minus
    return abs(a) ** 2 * w + (a * b.conjugate()).real * w ** 2 + abs(b) ** 2 * w ** 3 / 3.0


def dwell_time(profile: PotentialProfile, energy: float) -> float:
    """Stationary probability inside the profile divided by the incident flux hbar k / m*."""
    check_energy(profile, energy)
    if not profile.segments:
        return 0.0
    _, coefficients = solve(profile, energy)
    inside = sum(_region_integral(region) for region in coefficients.regions[1:-1])
    k = math.sqrt((energy - profile.lead_height) / profile.mass.hbar2_over_2m)
    velocity = constants().hbar * k / profile.mass.mass
    return inside / velocity


def _fit_arrival(times: Sequence[float], positions: Sequence[float], plane: float) -> Tuple[float, float]:
    """Time the fitted centroid line crosses ``plane`` and its velocity."""
    slope, intercept = np.polyfit(np.asarray(times), np.asarray(positions), 1)
    if slope <= 0.0:
        return float('nan'), float(slope)
    return float((plane - intercept) / slope), float(slope)


def packet_transit(run: ModelComparison) -> PacketTransit:
    """
    Time between the incident centroid reaching x = 0 and the transmitted
    centroid leaving x = d, each extrapolated from the free flight part of
    the recorded series.
    """
    nan = float('nan')
    flags = []
    series = run.series
    if not run.settled:
        flags.append('unsettled')
    if series[-1].prob_right < MIN_TRANSMITTED:
        flags.append('transmitted_too_small')
    if flags:
        log.warning('TRANSIT,unreliable: %s', ', '.join(flags))
        return PacketTransit(value=nan, t_in=nan, t_out=nan, flags=tuple(flags))

    incident = [s for s in series if s.prob_barrier + s.prob_right < INCIDENT_LIMIT]
    start = next(i for i, s in enumerate(series) if s.t_fs >= run.settle_time)
    outgoing = [s for s in series[start:]
                if s.prob_right > MIN_TRANSMITTED and s.prob_barrier < LINGER_LIMIT * s.prob_right]
    if len(incident) < MIN_FIT_POINTS:
        flags.append('no_incident_flight')
    if len(outgoing) < MIN_FIT_POINTS:
        flags.append('no_transmitted_flight')
    if flags:
        log.warning('TRANSIT,unreliable: %s', ', '.join(flags))
        return PacketTransit(value=nan, t_in=nan, t_out=nan, flags=tuple(flags))

    t_in, v_in = _fit_arrival([s.t_fs for s in incident], [s.x_mean for s in incident], 0.0)
    t_out, v_out = _fit_arrival([s.t_fs for s in outgoing], [s.x_right_mean for s in outgoing], run.barrier_width)
    value = t_out - t_in
    if not math.isfinite(value):
        flags.append('centroid_not_moving')
        value = nan
    elif abs(v_out / v_in - 1.0) > FILTER_LIMIT:
        # barrier selected part of the spectrum; t_out - t_in is not a delay
        log.warning('TRANSIT,centroid speed %.4g nm/fs in, %.4g nm/fs out', v_in, v_out)
        flags.append('velocity_filtered')
    debug_write(log, 'TRANSIT', 't_in=%.6g t_out=%.6g transit=%.6g' % (t_in, t_out, value))
    return PacketTransit(value=value, t_in=t_in, t_out=t_out, flags=tuple(flags))


def time_report(profile: PotentialProfile, energy: float, uncertainty: UncertaintyReport,
                de: Optional[float] = None, transit: Optional[PacketTransit] = None) -> TimeReport:
    phase = phase_time(profile, energy, de)
    flags = list(phase.flags)
    packet = None
    if transit is not None:
        flags.extend('transit_%s' % flag for flag in transit.flags)
        packet = transit.value if transit.reliable else None
    return TimeReport(energy=energy, phase_time=phase.value, dwell_time=dwell_time(profile, energy),
                      uncertainty_time=uncertainty.delta_t, packet_transit=packet,
                      profile=profile.describe(), mass=profile.mass,
                      phase_de=phase.de, phase_refinement=phase.refinement, flags=tuple(flags))


@dataclass(frozen=True)
class TimeRatios:
    ratios: Dict[str, float]
    within_order: Dict[str, bool]
    flags: Tuple[str, ...] = ()

    @property
    def all_within_order(self) -> bool:
        return bool(self.within_order) and all(self.within_order.values())


def compare_with_uncertainty(report: TimeReport, uncertainty: UncertaintyReport) -> TimeRatios:
    """Each estimator over hbar / dE; empty for a profile without segments."""
    flags = []
    if report.mass != uncertainty.mass:
        log.warning('RATIOS,time report mass %r differs from the uncertainty mass %r',
                    report.mass.ratio, uncertainty.mass.ratio)
        flags.append('mass_mismatch')
    if not report.has_barrier:
        return TimeRatios(ratios={}, within_order={}, flags=tuple(flags))
    reference = uncertainty.delta_t
    ratios = {'phase_time': report.phase_time / reference,
              'dwell_time': report.dwell_time / reference}
    if report.packet_transit is not None:
        ratios['packet_transit'] = report.packet_transit / reference
    within = {name: ORDER_BAND[0] <= value <= ORDER_BAND[1] for name, value in ratios.items()}
    return TimeRatios(ratios=ratios, within_order=within, flags=tuple(flags))


def phase_time_vs_width(v0: float, energy: float, widths: Sequence[float],
                        mass: EffectiveMass = EffectiveMass()) -> List[Tuple[float, float]]:
    """Phase time against barrier width; saturates with width once the barrier is opaque."""
    rows = []
    for width in widths:
        profile = PotentialProfile.single(RectangularBarrier(v0=v0, d=float(width), mass=mass))
        rows.append((float(width), phase_time(profile, energy).value))
    return rows
