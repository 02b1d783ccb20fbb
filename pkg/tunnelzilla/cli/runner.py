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
Experiment runners behind the command line subcommands.

Each runner writes its data files into the output directory plus one
``<kind>.json`` summary, and returns a RunSummary.  JSON is written with
sorted keys so two runs with the same config and seed differ only in the
``timestamp`` entry.
"""

__author__ = 'Sandboxzilla'

import csv
import json
import logging
import math
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .. import __version__
from ..errors import NumericalError
from ..physics.analytic_barrier import RectangularBarrier, resonance_energies
from ..physics.timing import compare_with_uncertainty, packet_transit, phase_time_vs_width, time_report
from ..physics.transfer_matrix import PotentialProfile, solve, sweep
from ..physics.uncertainty import (barrier_comparison, ensemble_demo, momentum_observable, paper_estimate,
                                   position_observable, random_state, robertson_check)
from ..physics.units_core import constants
from ..physics.wavepacket import (EvolutionSettings, ModelComparison, WavePacketSpec, compare_models,
                                  init_gaussian, suggest_dt, suggest_grid, suggest_run_time)
from ..utils import debug_write
from .config import ExperimentConfig, uncertainty_grid

log = logging.getLogger(__name__)

TRANSMISSION_COLUMNS = ('energy_ev', 't_prob', 'r_prob', 't_re', 't_im', 'r_re', 'r_im', 'regime', 'residual')
LOG_NAME = 'tunnelzilla.log'
SERIES_COLUMNS = ('t_fs', 'norm', 'prob_left', 'prob_barrier', 'prob_right', 'x_mean')

# printed figures of the textbook estimate for dx = 1 nm, m* = 0.07 m
REFERENCE_DELTA_P_SI = 1.054e-25
REFERENCE_DELTA_E = 1.1
REFERENCE_DELTA_T_SI = 1e-15


@dataclass
class RunSummary:
    kind: str
    config: Dict[str, Any]
    headline: Dict[str, Any] = field(default_factory=dict)
    files: List[str] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    started: float = field(default_factory=time.time)
    wall_clock: float = 0.0

    def flag(self, name: str, message: Optional[str] = None):
        if name not in self.flags:
            self.flags.append(name)
        if message:
            log.warning('RUN,%s: %s', name, message)

    def as_dict(self) -> Dict[str, Any]:
        return {'tool': 'tunnelzilla',
                'version': __version__,
                'kind': self.kind,
                'config': self.config,
                'results': self.headline,
                'manifest': sorted(self.files),
                'flags': list(self.flags),
                'timestamp': {'utc': datetime.fromtimestamp(self.started, tz=timezone.utc).isoformat(),
                              'wall_clock_s': self.wall_clock}}


def _number(value: Any) -> Any:
    """JSON safe copy: NaN and infinities become null, tuples become lists, numpy scalars become floats."""
    if isinstance(value, dict):
        return {str(key): _number(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_number(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence[Any]]):
    with open(path, 'w', newline='', encoding='utf-8') as csv_file:
        writer = csv.writer(csv_file, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(value) for value in row])


def write_json(path: Path, document: Dict[str, Any]):
    with open(path, 'w', encoding='utf-8') as json_file:
        json.dump(_number(document), json_file, indent=2, sort_keys=True, allow_nan=False)
        json_file.write('\n')


def finish(summary: RunSummary, out_dir: Path) -> RunSummary:
    name = '%s.json' % summary.kind
    summary.files.append(name)
    if (out_dir / LOG_NAME).exists():
        summary.files.append(LOG_NAME)
    summary.wall_clock = time.time() - summary.started
    write_json(out_dir / name, summary.as_dict())
    debug_write(log, 'RUN', '%s done in %.3f s, flags=%s' % (summary.kind, summary.wall_clock, summary.flags),
                level=logging.INFO)
    return summary


def _resonances(profile: PotentialProfile, count: int) -> List[Dict[str, float]]:
    if count == 0 or not profile.is_single_barrier:
        return []
    segment = profile.segments[0]
    if segment.height <= 0.0:
        return []
    barrier = RectangularBarrier(v0=segment.height, d=segment.width, mass=profile.mass)
    result = []
    for energy in resonance_energies(barrier, count):
        stationary, _ = solve(profile, energy)
        result.append({'n': len(result) + 1, 'energy_ev': energy, 't_prob': stationary.t_prob})
    return result


def run_transmission(config: ExperimentConfig, out_dir: Path) -> RunSummary:
    summary = RunSummary(kind=config.kind, config=config.echo())
    profile = config.potential_profile()
    rows = sweep(profile, config.sweep.e_min, config.sweep.e_max, config.sweep.n, workers=config.workers)
    failed = [row for row in rows if row.regime == 'failed']
    if len(failed) == len(rows):
        raise NumericalError("every sweep energy failed; first error: %s" % (failed[0].flags,))

    write_csv(out_dir / 'transmission.csv', TRANSMISSION_COLUMNS,
              [(row.energy, row.t_prob, row.r_prob, row.t_amp.real, row.t_amp.imag,
                row.r_amp.real, row.r_amp.imag, row.regime, row.residual) for row in rows])
    summary.files.append('transmission.csv')

    flagged = [row for row in rows if row.flags]
    if flagged:
        summary.flag('flagged_rows', '%d of %d sweep rows flagged' % (len(flagged), len(rows)))
    t_values = [row.t_prob for row in rows if row.regime != 'failed']
    summary.headline = {'profile': profile.describe(),
                        'rows': len(rows),
                        'flagged_rows': [{'energy_ev': row.energy, 'flags': list(row.flags)} for row in flagged],
                        't_min': min(t_values),
                        't_max': max(t_values),
                        'max_residual': max(row.residual for row in rows if row.regime != 'failed'),
                        'resonances': _resonances(profile, config.sweep.resonances)}
    return finish(summary, out_dir)


def _reproduction(report) -> Dict[str, Any]:
    def relative(value, reference, tolerance):
        error = abs(value - reference) / reference
        return {'value': value, 'reference': reference, 'relative_error': error,
                'tolerance': tolerance, 'pass': error <= tolerance}

    order = math.log10(report.delta_t_si / REFERENCE_DELTA_T_SI)
    return {'delta_p_si': relative(report.delta_p_si, REFERENCE_DELTA_P_SI, 0.005),
            'delta_e_ev': relative(report.delta_e, REFERENCE_DELTA_E, 0.05),
            'delta_t_si': {'value': report.delta_t_si, 'reference': REFERENCE_DELTA_T_SI,
                           'decades_off': order, 'tolerance': 'order_of_magnitude', 'pass': abs(order) <= 1.0}}


def run_estimate(config: ExperimentConfig, out_dir: Path) -> RunSummary:
    summary = RunSummary(kind=config.kind, config=config.echo())
    report = paper_estimate(config.uncertainty.delta_x, config.mass)
    headline = {'report': report.as_dict(), 'paper_reproduction': _reproduction(report)}
    if config.barrier.v0 is not None:
        comparison = barrier_comparison(report, config.barrier.v0)
        headline['barrier_comparison'] = {'v0_ev': comparison.v0, 'delta_e_over_v0': comparison.ratio,
                                          'comparable': comparison.comparable}
    summary.headline = headline
    return finish(summary, out_dir)


def _evolution(config: ExperimentConfig, spec: WavePacketSpec, profile: PotentialProfile):
    t_end = config.grid.t_end if config.grid.t_end is not None else suggest_run_time(spec, profile)
    grid = config.grid_override() or suggest_grid(spec, profile, t_end)
    dt = config.grid.dt if config.grid.dt is not None else suggest_dt(grid, spec)
    n_steps = int(math.ceil(t_end / dt - 1e-9))
    settings = EvolutionSettings(dt=dt, n_steps=n_steps, record_every=config.grid.record_every,
                                 snapshot_times=tuple(config.grid.snapshots))
    return grid, settings


def simulate(config: ExperimentConfig) -> ModelComparison:
    spec = config.packet_spec()
    profile = config.potential_profile()
    grid, settings = _evolution(config, spec, profile)
    log.info('PACKET,%d points dx=%.4g nm, %d steps of %.4g fs', grid.n_points, grid.dx, settings.n_steps, settings.dt)
    return compare_models(spec, profile, settings, grid=grid)


def _snapshot_name(t_fs: float) -> str:
    return 'snapshot_t%s.dat' % ('%.6g' % t_fs).replace('.', 'p')


def run_packet(config: ExperimentConfig, out_dir: Path) -> RunSummary:
    summary = RunSummary(kind=config.kind, config=config.echo())
    run = simulate(config)
    write_csv(out_dir / 'packet_series.csv', SERIES_COLUMNS,
              [(s.t_fs, s.norm, s.prob_left, s.prob_barrier, s.prob_right, s.x_mean) for s in run.series])
    summary.files.append('packet_series.csv')
    x = run.grid.points
    for t_fs, density in sorted(run.snapshots.items()):
        name = _snapshot_name(t_fs)
        np.savetxt(out_dir / name, np.column_stack([x, density]), fmt='%.17g', header='x_nm density_per_nm')
        summary.files.append(name)

    for flag in run.flags:
        summary.flag(flag)
    transit = packet_transit(run)
    spec = run.spec
    norms = [s.norm for s in run.series]
    summary.headline = {'exact_transmitted': run.exact,
                        't_spec': run.t_spec,
                        'classical_filter': run.classical_filter,
                        'discrepancies': run.discrepancies,
                        'settled': run.settled,
                        'settle_time_fs': run.settle_time,
                        'max_norm_deviation': max(abs(n - 1.0) for n in norms),
                        'transit_fs': transit.value,
                        'transit_flags': list(transit.flags),
                        'ballistic_fs': run.barrier_width / spec.group_velocity,
                        'grid': {'x_min': run.grid.x_min, 'x_max': run.grid.x_max, 'n_points': run.grid.n_points},
                        'flags': list(run.flags)}
    return finish(summary, out_dir)


def run_times(config: ExperimentConfig, out_dir: Path) -> RunSummary:
    summary = RunSummary(kind=config.kind, config=config.echo())
    profile = config.potential_profile()
    uncertainty = paper_estimate(config.uncertainty.delta_x, config.mass)
    transit = packet_transit(simulate(config)) if config.timing.packet else None
    report = time_report(profile, config.timing.energy, uncertainty, de=config.timing.de, transit=transit)
    ratios = compare_with_uncertainty(report, uncertainty)
    for flag in report.flags + ratios.flags:
        summary.flag(flag)
    if config.timing.assert_order and ratios.ratios and not ratios.all_within_order:
        summary.flag('order_disagreement', 'time estimators are not within a decade of hbar/dE: %s' % ratios.ratios)

    headline = {'energy_ev': report.energy,
                'profile': report.profile,
                'phase_time_fs': report.phase_time,
                'phase_de_ev': report.phase_de,
                'phase_refinement': report.phase_refinement,
                'dwell_time_fs': report.dwell_time,
                'packet_transit_fs': report.packet_transit,
                'uncertainty_time_fs': report.uncertainty_time,
                'ratios': ratios.ratios,
                'within_order': ratios.within_order,
                'flags': list(report.flags + ratios.flags)}
    if config.timing.widths:
        headline['phase_time_vs_width'] = [{'d_nm': d, 'phase_time_fs': tau} for d, tau in
                                           phase_time_vs_width(config.barrier.v0, config.timing.energy,
                                                               config.timing.widths, config.mass)]
    summary.headline = headline
    return finish(summary, out_dir)


def _robertson_row(state: str, result) -> Dict[str, Any]:
    return {'state': state, 'pair': result.label, 'delta_a': result.delta_a, 'delta_b': result.delta_b,
            'lhs': result.lhs, 'rhs': result.rhs, 'holds': result.holds, 'flags': list(result.flags)}


def run_check_uncertainty(config: ExperimentConfig, out_dir: Path) -> RunSummary:
    summary = RunSummary(kind=config.kind, config=config.echo())
    section = config.uncertainty
    grid = uncertainty_grid(config)
    x, p = position_observable(grid), momentum_observable(grid)
    log.info('CHECK,seed=%d', config.seed)
    rows = []
    gaussian = init_gaussian(WavePacketSpec(x0=section.x0, sigma_x=section.sigma_x, e0=section.e0,
                                            mass=config.mass), grid)
    if section.states in ('gaussian', 'both'):
        rows.append(_robertson_row('gaussian', robertson_check(gaussian, x, p)))
        rows.append(_robertson_row('gaussian', robertson_check(gaussian, x, x)))
    if section.states in ('random', 'both'):
        rng = np.random.default_rng(config.seed)
        for index in range(section.n_random):
            state = random_state(grid, rng, section.margin)
            rows.append(_robertson_row('random_%d' % index, robertson_check(state, x, p)))
    if not all(row['holds'] for row in rows):
        summary.flag('robertson_violated', 'uncertainty relation failed on %d states'
                     % sum(1 for row in rows if not row['holds']))
    headline = {'seed': config.seed, 'hbar_over_2': 0.5 * constants().hbar,
                'grid': {'x_min': grid.x_min, 'x_max': grid.x_max, 'n_points': grid.n_points},
                'results': rows, 'all_hold': all(row['holds'] for row in rows)}
    if section.ensemble_samples:
        ensemble = ensemble_demo(gaussian, x, p, section.ensemble_samples, seed=config.seed)
        headline['ensemble'] = {'n_samples': ensemble.n_samples, 'seed': ensemble.seed,
                                'delta_a': ensemble.delta_a, 'delta_b': ensemble.delta_b,
                                'product': ensemble.product, 'exact_product': ensemble.exact_product}
    summary.headline = headline
    return finish(summary, out_dir)


RUNNERS: Dict[str, Callable[[ExperimentConfig, Path], RunSummary]] = {
    'transmission': run_transmission,
    'estimate': run_estimate,
    'packet': run_packet,
    'times': run_times,
    'check-uncertainty': run_check_uncertainty,
}
