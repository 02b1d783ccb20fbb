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
Scattering off an arbitrary piecewise constant potential.

Each segment is turned into a 2x2 scattering matrix expressed in the lead
medium (zero thickness lead gaps between neighbouring segments) and the
segments are chained with the Redheffer star product.  Every stored quantity
stays bounded by one in magnitude, so opaque barriers never overflow the
way products of raw transfer matrices do.

Region coefficients are recovered from prefix/suffix products of the same
scattering matrices and checked by substituting them back into the
continuity conditions at every interface.
"""

__author__ = 'Sandboxzilla'

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ValidationError
from ..utils import OrderedResults, debug_write
from .analytic_barrier import RectangularBarrier, Regime, TransmissionResult, regime_of
from .units_core import EffectiveMass, check_finite

log = logging.getLogger(__name__)

RESIDUAL_LIMIT = 1e-10
UNITARITY_LIMIT = 1e-10


@dataclass(frozen=True)
class Segment:
    width: float   # nm
    height: float  # eV

    def __post_init__(self):
        check_finite("segment", self.width, self.height)
        if self.width <= 0.0:
            raise ValidationError("segment width must be > 0, got %r" % (self.width,))


@dataclass(frozen=True)
class PotentialProfile:
    """
    Segments laid out left to right starting at x = 0, between two leads at
    ``lead_height``.  An empty profile is free propagation.
    """
    segments: Tuple[Segment, ...] = ()
    lead_height: float = 0.0
    mass: EffectiveMass = EffectiveMass()

    def __post_init__(self):
        check_finite("lead height", self.lead_height)
        segments = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        object.__setattr__(self, 'segments', segments)

    @classmethod
    def single(cls, barrier: RectangularBarrier) -> 'PotentialProfile':
        if barrier.d == 0.0:
            return cls(segments=(), mass=barrier.mass)
        return cls(segments=(Segment(barrier.d, barrier.v0),), mass=barrier.mass)

    @classmethod
    def double(cls, v0: float, d: float, gap: float,
               mass: EffectiveMass = EffectiveMass(), lead_height: float = 0.0) -> 'PotentialProfile':
        return cls(segments=(Segment(d, v0), Segment(gap, lead_height), Segment(d, v0)),
                   lead_height=lead_height, mass=mass)

    @property
    def total_width(self) -> float:
        return float(sum(s.width for s in self.segments))

    @property
    def max_height(self) -> float:
        return max([s.height for s in self.segments], default=self.lead_height)

    @property
    def is_single_barrier(self) -> bool:
        return len(self.segments) == 1 and self.segments[0].height > self.lead_height

    def interfaces(self) -> np.ndarray:
        """Interface positions X_0 = 0 < X_1 < ... < X_N."""
        return np.concatenate(([0.0], np.cumsum([s.width for s in self.segments])))

    def reversed(self) -> 'PotentialProfile':
        return replace(self, segments=tuple(reversed(self.segments)))

    def split_segment(self, index: int, fraction: float) -> 'PotentialProfile':
        """Cut one segment in two pieces of equal height."""
        if not 0.0 < fraction < 1.0:
            raise ValidationError("split fraction must be in (0, 1), got %r" % (fraction,))
        seg = self.segments[index]
        pieces = (Segment(seg.width * fraction, seg.height), Segment(seg.width * (1.0 - fraction), seg.height))
        return replace(self, segments=self.segments[:index] + pieces + self.segments[index + 1:])

    def cell_average(self, x, h: float) -> np.ndarray:
        """Mean potential over the cells [x - h/2, x + h/2]; keeps the barrier width exact off-grid."""
        x = np.asarray(x, dtype=float)
        edges = self.interfaces()
        length = edges[-1]
        lead = self.lead_height
        cumulative = np.concatenate(([0.0], np.cumsum([s.width * s.height for s in self.segments])))

        def antiderivative(points):
            inside = np.interp(points, edges, cumulative)
            inside = np.where(points < 0.0, lead * points, inside)
            return np.where(points > length, cumulative[-1] + lead * (points - length), inside)

        return (antiderivative(x + 0.5 * h) - antiderivative(x - 0.5 * h)) / h

    def describe(self) -> dict:
        return {'segments': [[s.width, s.height] for s in self.segments],
                'lead_height': self.lead_height,
                'mass_ratio': self.mass.ratio}


@dataclass(frozen=True)
class RegionCoefficients:
    """
    Wavefunction of one region about the reference point ``x_ref``:

    - ``lead`` / ``propagating``: c_plus exp(iq(x-x_ref)) + c_minus exp(-iq(x-x_ref))
    - ``evanescent``: c_plus exp(q(x-x_ref)) + c_minus exp(-q(x-x_ref)), q = alpha
    - ``linear`` (energy at the segment height): c_plus + c_minus (x - x_ref)
    """
    kind: str
    wavenumber: float
    x_ref: float
    x_right: float
    c_plus: complex
    c_minus: complex
    # growing evanescent term referenced at x_right; c_plus underflows for opaque segments
    growing_at_right: complex = 0j

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        q = self.wavenumber
        if self.kind in ('lead', 'propagating'):
            return self.c_plus * np.exp(1j * q * (x - self.x_ref)) + self.c_minus * np.exp(-1j * q * (x - self.x_ref))
        if self.kind == 'evanescent':
            return self.growing_at_right * np.exp(q * (x - self.x_right)) + self.c_minus * np.exp(-q * (x - self.x_ref))
        return self.c_plus + self.c_minus * (x - self.x_ref)


@dataclass(frozen=True)
class ScatteringCoefficients:
    """
    Left lead, each segment, right lead.  For a single barrier the pairs are
    (A, B), (C, D), (E, 0) with A = 1.
    """
    regions: Tuple[RegionCoefficients, ...]
    residual: float
    interfaces: Tuple[float, ...] = field(default=())

    @property
    def pairs(self) -> List[Tuple[complex, complex]]:
        return [(r.c_plus, r.c_minus) for r in self.regions]

    def evaluate(self, x) -> np.ndarray:
        """Stationary wavefunction at the positions ``x``."""
        x = np.asarray(x, dtype=float)
        edges = np.asarray(self.interfaces, dtype=float)
        index = np.searchsorted(edges, x, side='right')
        psi = np.zeros(x.shape, dtype=complex)
        for i, region in enumerate(self.regions):
            mask = index == i
            if np.any(mask):
                psi[mask] = region.evaluate(x[mask])
        return psi


@dataclass(frozen=True)
class SweepRow:
    energy: float
    t_prob: float
    r_prob: float
    t_amp: complex
    r_amp: complex
    regime: str
    residual: float
    flags: Tuple[str, ...] = ()


# (r11, t12, t21, r22): reflection from the left, right-to-left, left-to-right,
# reflection from the right
SMatrix = Tuple[complex, complex, complex, complex]
IDENTITY: SMatrix = (0j, 1 + 0j, 1 + 0j, 0j)


def star(a: SMatrix, b: SMatrix) -> SMatrix:
    """Redheffer star product: ``a`` on the left, ``b`` on the right."""
    a11, a12, a21, a22 = a
    b11, b12, b21, b22 = b
    denom = 1.0 - a22 * b11
    return (a11 + a12 * b11 * a21 / denom,
            a12 * b12 / denom,
            b21 * a21 / denom,
            b22 + b21 * a22 * b12 / denom)


def _local_q2(profile: PotentialProfile, energy: float, height: float) -> float:
    """(E - V) 2m*/hbar^2 in 1/nm^2, exactly zero on the E = V seam."""
    if regime_of(energy, height) is Regime.AT:
        return 0.0
    return (energy - height) / profile.mass.hbar2_over_2m


def segment_smatrix(k: float, q2: float, width: float) -> SMatrix:
    """Scattering matrix of one segment embedded in the lead medium."""
    k2 = k * k
    if q2 > 0.0:
        q = math.sqrt(q2)
        c = math.cos(q * width)
        s = math.sin(q * width) / q
        den = c - 1j * (q2 + k2) * s / (2.0 * k)
        t = 1.0 / den
        r = 1j * (q2 - k2) * s / (2.0 * k) / den
    elif q2 == 0.0:
        den = 1.0 - 0.5j * k * width
        t = 1.0 / den
        r = -0.5j * k * width / den
    else:
        alpha = math.sqrt(-q2)
        aw = alpha * width
        th = math.tanh(aw) / alpha
        sech = 2.0 * math.exp(-aw) / (1.0 + math.exp(-2.0 * aw))
        den = 1.0 - 1j * (q2 + k2) * th / (2.0 * k)
        t = sech / den
        r = 1j * (q2 - k2) * th / (2.0 * k) / den
    return (complex(r), complex(t), complex(t), complex(r))


def check_energy(profile: PotentialProfile, energy: float):
    check_finite("energy", energy)
    if energy <= profile.lead_height:
        raise ValidationError("energy %r must exceed the lead height %r" % (energy, profile.lead_height))


def _lead_wavenumber(profile: PotentialProfile, energy: float) -> float:
    return math.sqrt((energy - profile.lead_height) / profile.mass.hbar2_over_2m)


def _regime(profile: PotentialProfile, energy: float) -> Regime:
    if not profile.segments:
        return Regime.ABOVE
    return regime_of(energy, profile.max_height)


def transmission_only(profile: PotentialProfile, energy: float) -> TransmissionResult:
    """Transmission without region coefficients; the fast path for sweeps over energy."""
    check_energy(profile, energy)
    k = _lead_wavenumber(profile, energy)
    total = IDENTITY
    for seg in profile.segments:
        total = star(total, segment_smatrix(k, _local_q2(profile, energy, seg.height), seg.width))
    r11, _, t21, _ = total
    return TransmissionResult(energy=energy,
                              t_prob=abs(t21) ** 2,
                              r_prob=abs(r11) ** 2,
                              t_amp=t21 * cmath.exp(-1j * k * profile.total_width),
                              r_amp=r11,
                              regime=_regime(profile, energy))


def solve(profile: PotentialProfile, energy: float) -> Tuple[TransmissionResult, ScatteringCoefficients]:
    check_energy(profile, energy)
    k = _lead_wavenumber(profile, energy)
    n = len(profile.segments)
    edges = profile.interfaces()
    q2s = [_local_q2(profile, energy, seg.height) for seg in profile.segments]
    layers = [segment_smatrix(k, q2, seg.width) for q2, seg in zip(q2s, profile.segments)]

    prefix = [IDENTITY]
    for layer in layers:
        prefix.append(star(prefix[-1], layer))
    suffix = [IDENTITY]
    for layer in reversed(layers):
        suffix.append(star(layer, suffix[-1]))
    suffix.reverse()

    # lead-medium amplitudes in the zero thickness gap at each interface
    psi = np.empty(n + 1, dtype=complex)
    dpsi = np.empty(n + 1, dtype=complex)
    for m in range(n + 1):
        _, _, t_left, r_left = prefix[m]
        r_right = suffix[m][0]
        a = t_left / (1.0 - r_left * r_right)
        b = r_right * a
        psi[m] = a + b
        dpsi[m] = 1j * k * (a - b)

    r11, _, t21, _ = prefix[-1]
    length = profile.total_width
    t_amp = t21 * cmath.exp(-1j * k * length)

    regions = [RegionCoefficients('lead', k, 0.0, 0.0, 1.0 + 0j, r11)]
    residual = 0.0
    for j, (seg, q2) in enumerate(zip(profile.segments, q2s)):
        region, worst = _segment_region(k, q2, edges[j], edges[j + 1],
                                        psi[j], dpsi[j], psi[j + 1], dpsi[j + 1])
        regions.append(region)
        residual = max(residual, worst)
    regions.append(RegionCoefficients('lead', k, 0.0, length, t_amp, 0j))

    result = TransmissionResult(energy=energy,
                                t_prob=abs(t21) ** 2,
                                r_prob=abs(r11) ** 2,
                                t_amp=t_amp,
                                r_amp=r11,
                                regime=_regime(profile, energy))
    debug_write(log, 'SOLVE', 'E=%r segments=%d T=%r residual=%.3g' % (energy, n, result.t_prob, residual))
    return result, ScatteringCoefficients(regions=tuple(regions), residual=residual,
                                          interfaces=tuple(float(x) for x in edges))


def _segment_region(k, q2, x_left, x_right, psi_l, dpsi_l, psi_r, dpsi_r):
    """Coefficients of one segment plus the worst continuity residual at its two edges."""
    w = x_right - x_left

    def mismatch(value, target, scale):
        return abs(value - target) / max(1.0, abs(target)) / scale

    if q2 > 0.0:
        q = math.sqrt(q2)
        c_plus = 0.5 * (psi_l + dpsi_l / (1j * q))
        c_minus = 0.5 * (psi_l - dpsi_l / (1j * q))
        ep, em = cmath.exp(1j * q * w), cmath.exp(-1j * q * w)
        worst = max(mismatch(c_plus * ep + c_minus * em, psi_r, 1.0),
                    mismatch(1j * q * (c_plus * ep - c_minus * em), dpsi_r, k))
        return RegionCoefficients('propagating', q, x_left, x_right, c_plus, c_minus), worst
    if q2 == 0.0:
        worst = max(mismatch(psi_l + dpsi_l * w, psi_r, 1.0), mismatch(dpsi_l, dpsi_r, k))
        return RegionCoefficients('linear', 0.0, x_left, x_right, psi_l, dpsi_l), worst
    alpha = math.sqrt(-q2)
    decay = math.exp(-alpha * w)
    falling = 0.5 * (psi_l - dpsi_l / alpha)   # exp(-alpha(x - x_left))
    rising = 0.5 * (psi_r + dpsi_r / alpha)    # exp(+alpha(x - x_right))
    worst = max(mismatch(rising * decay + falling, psi_l, 1.0),
                mismatch(alpha * (rising * decay - falling), dpsi_l, k),
                mismatch(rising + falling * decay, psi_r, 1.0),
                mismatch(alpha * (rising - falling * decay), dpsi_r, k))
    return RegionCoefficients('evanescent', alpha, x_left, x_right, rising * decay, falling, rising), worst


def _sweep_row(profile: PotentialProfile, energy: float) -> SweepRow:
    try:
        result, coefficients = solve(profile, energy)
    except Exception as exp:
        log.warning('SWEEP,E=%r failed: %s', energy, exp)
        nan = float('nan')
        return SweepRow(energy, nan, nan, complex(nan, nan), complex(nan, nan), 'failed', nan,
                        ('solve_failed: %s' % exp,))
    flags = []
    if coefficients.residual > RESIDUAL_LIMIT:
        flags.append('residual')
    if abs(result.t_prob + result.r_prob - 1.0) > UNITARITY_LIMIT:
        flags.append('unitarity')
    return SweepRow(energy=energy, t_prob=result.t_prob, r_prob=result.r_prob,
                    t_amp=result.t_amp, r_amp=result.r_amp, regime=result.regime.value,
                    residual=coefficients.residual, flags=tuple(flags))


def sweep_energies(profile: PotentialProfile, energies: Sequence[float],
                   workers: Optional[int] = None) -> List[SweepRow]:
    """Solve at each energy; rows come back in input order whatever order the workers finish in."""
    energies = [float(e) for e in energies]
    results = OrderedResults(expected=len(energies))

    def work(index, energy):
        results.put(index, _sweep_row(profile, energy))

    if workers is None or workers <= 1:
        for index, energy in enumerate(energies):
            work(index, energy)
        return list(results)

    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix='sweep') as pool:
        futures = [pool.submit(work, index, energy) for index, energy in enumerate(energies)]
        rows = list(results)
    for future in futures:
        future.result()
    return rows


def sweep(profile: PotentialProfile, e_min: float, e_max: float, n: int,
          workers: Optional[int] = None) -> List[SweepRow]:
    check_finite("sweep range", e_min, e_max)
    if not profile.lead_height < e_min < e_max:
        raise ValidationError("sweep needs lead height < e_min < e_max, got %r < %r < %r"
                              % (profile.lead_height, e_min, e_max))
    if int(n) != n or n < 2:
        raise ValidationError("sweep needs an integer n >= 2, got %r" % (n,))
    energies = np.linspace(e_min, e_max, int(n))
    rows = sweep_energies(profile, energies, workers=workers)
    debug_write(log, 'SWEEP', '%d rows on [%r, %r], %d flagged'
                % (len(rows), e_min, e_max, sum(1 for r in rows if r.flags)), level=logging.INFO)
    return rows
