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
Uncertainty relations.

Two conventions live side by side here.  ``paper_estimate`` is back of the
envelope arithmetic with dx dp = hbar and dE = dp^2 / m*; it reproduces the
textbook Si-SiO2 estimate and is labelled as such in its report.  The
wavefunction level checks use the Robertson bound with exact moments on the
grid, so a Gaussian saturates x-p at hbar / 2.
"""

__author__ = 'Sandboxzilla'

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sparse

from ..errors import NumericalError, ValidationError
from ..utils import debug_write
from .units_core import EffectiveMass, SpatialGrid, check_finite, constants, momentum_to_si, time_to_si
from .wavepacket import WaveFunction

log = logging.getLogger(__name__)

HERMITIAN_LIMIT = 1e-12
NORM_LIMIT = 1e-6
HOLD_SLACK = 1e-10
WALL_LIMIT = 1e-12          # probability allowed on the outermost points
DENSE_LIMIT = 2048
MIN_SAMPLES = 100
COMPARABLE = (0.1, 10.0)
WALL_POINTS = 2


@dataclass(frozen=True)
class UncertaintyReport:
    delta_x: float        # nm
    delta_p: float        # eV fs / nm
    delta_p_si: float     # kg m / s
    p_assumed: float      # eV fs / nm
    delta_e: float        # eV
    delta_t: float        # fs
    delta_t_si: float     # s
    mass: EffectiveMass
    paper_convention: bool = True

    def as_dict(self) -> dict:
        return {'delta_x_nm': self.delta_x,
                'delta_p_ev_fs_per_nm': self.delta_p,
                'delta_p_si': self.delta_p_si,
                'p_assumed_ev_fs_per_nm': self.p_assumed,
                'delta_e_ev': self.delta_e,
                'delta_t_fs': self.delta_t,
                'delta_t_si': self.delta_t_si,
                'mass_ratio': self.mass.ratio,
                'convention': 'paper' if self.paper_convention else 'robertson'}


@dataclass(frozen=True)
class BarrierComparison:
    v0: float
    ratio: float          # delta_e / v0
    comparable: bool


@dataclass(frozen=True, eq=False)
class Observable:
    grid: SpatialGrid
    matrix: sparse.spmatrix
    label: str = ''
    hermiticity: float = field(init=False)

    def __post_init__(self):
        matrix = sparse.csr_matrix(self.matrix, dtype=complex)
        if matrix.shape != (self.grid.n_points, self.grid.n_points):
            raise ValidationError("observable '%s' has shape %s on a %d point grid"
                                  % (self.label, matrix.shape, self.grid.n_points))
        object.__setattr__(self, 'matrix', matrix)
        difference = matrix - matrix.conj().T
        residual = float(abs(difference).max()) if difference.nnz else 0.0
        if residual > HERMITIAN_LIMIT:
            raise ValidationError("observable '%s' is not Hermitian: residual %.3g" % (self.label, residual))
        object.__setattr__(self, 'hermiticity', residual)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.matrix @ amplitudes


@dataclass(frozen=True)
class RobertsonResult:
    label: str
    mean_a: float
    mean_b: float
    delta_a: float
    delta_b: float
    lhs: float
    rhs: float
    holds: bool
    flags: tuple = ()


@dataclass(frozen=True)
class EnsembleResult:
    n_samples: int
    seed: int
    delta_a: float
    delta_b: float
    product: float
    exact_delta_a: float
    exact_delta_b: float

    @property
    def exact_product(self) -> float:
        return self.exact_delta_a * self.exact_delta_b


def paper_estimate(delta_x: float, mass: EffectiveMass) -> UncertaintyReport:
    """
    Position spread to time spread with the back of the envelope chain:
    dp = hbar / dx, p ~ dp, dE = p dp / m* and dt = hbar / dE.
    """
    check_finite("delta_x", delta_x)
    if delta_x <= 0.0:
        raise ValidationError("delta_x must be > 0, got %r" % (delta_x,))
    hbar = constants().hbar
    delta_p = hbar / delta_x
    p_assumed = delta_p
    delta_e = p_assumed * delta_p / mass.mass
    delta_t = hbar / delta_e
    report = UncertaintyReport(delta_x=delta_x, delta_p=delta_p, delta_p_si=momentum_to_si(delta_p),
                               p_assumed=p_assumed, delta_e=delta_e, delta_t=delta_t,
                               delta_t_si=time_to_si(delta_t), mass=mass)
    debug_write(log, 'ESTIMATE', 'dx=%g dp=%.6g dE=%.6g dt=%.6g' % (delta_x, delta_p, delta_e, delta_t))
    return report


def barrier_comparison(report: UncertaintyReport, v0: float) -> BarrierComparison:
    """Energy spread relative to a barrier height; comparable when the ratio is within a decade."""
    check_finite("v0", v0)
    if v0 <= 0.0:
        raise ValidationError("v0 must be > 0, got %r" % (v0,))
    ratio = report.delta_e / v0
    return BarrierComparison(v0=v0, ratio=ratio, comparable=COMPARABLE[0] <= ratio <= COMPARABLE[1])


def position_observable(grid: SpatialGrid) -> Observable:
    return Observable(grid=grid, matrix=sparse.diags([grid.points.astype(complex)], [0]), label='x')


def momentum_observable(grid: SpatialGrid) -> Observable:
    """-i hbar d/dx with central differences and zero amplitude beyond the ends."""
    scale = -1j * constants().hbar / (2.0 * grid.dx)
    off = np.ones(grid.n_points - 1)
    derivative = sparse.diags([-off, off], [-1, 1])
    return Observable(grid=grid, matrix=scale * derivative, label='p')


def _expect(psi: np.ndarray, applied: np.ndarray, dx: float) -> complex:
    return complex(np.vdot(psi, applied) * dx)


def _check_state(psi: WaveFunction, *observables: Observable):
    for observable in observables:
        if observable.grid != psi.grid:
            raise ValidationError("observable '%s' lives on a different grid than the state" % observable.label)
    if abs(psi.norm - 1.0) > NORM_LIMIT:
        raise ValidationError("state is not normalized: norm %.12g" % psi.norm)


def _near_wall(psi: WaveFunction) -> bool:
    rho = psi.density
    edge = (np.sum(rho[:WALL_POINTS]) + np.sum(rho[-WALL_POINTS:])) * psi.grid.dx
    return edge > WALL_LIMIT


def robertson_check(psi: WaveFunction, a: Observable, b: Observable) -> RobertsonResult:
    _check_state(psi, a, b)
    dx = psi.grid.dx
    amplitudes = psi.amplitudes
    a_psi = a.apply(amplitudes)
    b_psi = b.apply(amplitudes)
    mean_a = _expect(amplitudes, a_psi, dx).real
    mean_b = _expect(amplitudes, b_psi, dx).real
    # <A^2> = |A psi|^2 for Hermitian A
    var_a = float(np.vdot(a_psi, a_psi).real * dx) - mean_a ** 2
    var_b = float(np.vdot(b_psi, b_psi).real * dx) - mean_b ** 2
    delta_a = math.sqrt(max(var_a, 0.0))
    delta_b = math.sqrt(max(var_b, 0.0))
    # <[A,B]> = <A psi|B psi> - <B psi|A psi> = 2i Im <A psi|B psi>
    rhs = abs(_expect(a_psi, b_psi, dx).imag)
    lhs = delta_a * delta_b
    flags = ()
    if _near_wall(psi):
        log.warning('ROBERTSON,state reaches the grid walls; the discrete commutator is degraded there')
        flags = ('near_wall',)
    result = RobertsonResult(label='%s,%s' % (a.label, b.label), mean_a=mean_a, mean_b=mean_b,
                             delta_a=delta_a, delta_b=delta_b, lhs=lhs, rhs=rhs,
                             holds=lhs >= rhs - HOLD_SLACK, flags=flags)
    debug_write(log, 'ROBERTSON', 'lhs=%.10g rhs=%.10g holds=%s' % (lhs, rhs, result.holds))
    return result


def random_state(grid: SpatialGrid, rng: np.random.Generator, margin: int = WALL_POINTS) -> WaveFunction:
    """Normalized i.i.d. complex Gaussian amplitudes, zero on the ``margin`` outermost points."""
    if margin < 0 or 2 * margin >= grid.n_points:
        raise ValidationError("margin %r leaves no free points on a %d point grid" % (margin, grid.n_points))
    amplitudes = rng.standard_normal(grid.n_points) + 1j * rng.standard_normal(grid.n_points)
    if margin:
        amplitudes[:margin] = 0.0
        amplitudes[-margin:] = 0.0
    return WaveFunction(grid=grid, amplitudes=amplitudes).normalized()


def _born_samples(observable: Observable, amplitudes: np.ndarray, dx: float,
                  n_samples: int, rng: np.random.Generator) -> np.ndarray:
    values, vectors = scipy.linalg.eigh(observable.matrix.toarray())
    weights = np.abs(vectors.conj().T @ amplitudes) ** 2 * dx
    weights /= weights.sum()
    return rng.choice(values, size=n_samples, p=weights)


def ensemble_demo(psi: WaveFunction, a: Observable, b: Observable, n_samples: int,
                  seed: Optional[int] = None) -> EnsembleResult:
    """
    Measure ``a`` on ``n_samples`` fresh copies of ``psi`` and ``b`` on another
    ``n_samples`` copies, sampling eigenvalues with Born weights.
    """
    _check_state(psi, a, b)
    if int(n_samples) != n_samples or n_samples < MIN_SAMPLES:
        raise ValidationError("n_samples must be an integer >= %d, got %r" % (MIN_SAMPLES, n_samples))
    if psi.grid.n_points > DENSE_LIMIT:
        raise NumericalError("dense eigendecomposition is capped at %d grid points, got %d"
                             % (DENSE_LIMIT, psi.grid.n_points))
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % 2 ** 63)
    log.info('ENSEMBLE,seed=%d n=%d', seed, n_samples)
    rng = np.random.default_rng(seed)
    dx = psi.grid.dx
    samples_a = _born_samples(a, psi.amplitudes, dx, int(n_samples), rng)
    samples_b = _born_samples(b, psi.amplitudes, dx, int(n_samples), rng)
    exact = robertson_check(psi, a, b)
    delta_a = float(np.std(samples_a, ddof=1))
    delta_b = float(np.std(samples_b, ddof=1))
    return EnsembleResult(n_samples=int(n_samples), seed=seed, delta_a=delta_a, delta_b=delta_b,
                          product=delta_a * delta_b, exact_delta_a=exact.delta_a, exact_delta_b=exact.delta_b)
