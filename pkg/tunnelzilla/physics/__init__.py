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
__credits__ = 'Sandboxzilla'

from .units_core import (PhysicalConstants, EffectiveMass, SpatialGrid, constants, make_grid,
                         momentum_to_si, momentum_from_si, time_to_si)
from .analytic_barrier import (Regime, RectangularBarrier, TransmissionResult, wavevector, decay_constant,
                               transmission, resonance_energies)
from .transfer_matrix import (Segment, PotentialProfile, ScatteringCoefficients, SweepRow, solve,
                              transmission_only, sweep, sweep_energies)
from .numerov import numerov_transmission
from .wavepacket import (WavePacketSpec, WaveFunction, MomentumSpectrum, EvolutionSettings, ModelComparison,
                         init_gaussian, evolve, region_probability, momentum_spectrum, spectral_transmission,
                         classical_filter_fraction, compare_models, suggest_grid, suggest_dt)
from .uncertainty import (UncertaintyReport, Observable, RobertsonResult, EnsembleResult, paper_estimate,
                          barrier_comparison, position_observable, momentum_observable, robertson_check,
                          random_state, ensemble_demo)
from .timing import (PhaseTime, PacketTransit, TimeReport, TimeRatios, phase_time, dwell_time, packet_transit,
                     time_report, compare_with_uncertainty, phase_time_vs_width)
