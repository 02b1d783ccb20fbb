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
Numerov shooting through a piecewise constant profile.

An independent check on the scattering-matrix solver: start from a pure
transmitted wave in the right lead, march the stationary equation
psi'' = 2m*(V - E)/hbar^2 psi backwards to the left lead and split the result
into incident and reflected plane waves.  The potential is cell-averaged on
the grid so interfaces do not need to coincide with grid points.
"""

__author__ = 'Sandboxzilla'

import logging
import math

import numpy as np

from ..errors import ValidationError
from ..utils import debug_write
from .transfer_matrix import PotentialProfile, check_energy

log = logging.getLogger(__name__)

DEFAULT_STEP = 2e-5  # nm


def numerov_transmission(profile: PotentialProfile, energy: float, step: float = DEFAULT_STEP) -> float:
    check_energy(profile, energy)
    if not (math.isfinite(step) and step > 0.0):
        raise ValidationError("numerov step must be > 0, got %r" % (step,))

    length = profile.total_width
    n_steps = max(int(math.ceil(length / step)), 1)
    h = length / n_steps if length > 0.0 else step
    # grid index n sits at x = n h, n = -2 .. n_steps + 1
    index = np.arange(-2, n_steps + 2)
    x = index * h
    g = (profile.cell_average(x, h) - energy) / profile.mass.hbar2_over_2m
    weight = (1.0 - h * h * g / 12.0).tolist()
    centre = (2.0 * (1.0 + 5.0 * h * h * g / 12.0)).tolist()

    # discrete lead wavenumber of the Numerov recurrence
    g_lead = (profile.lead_height - energy) / profile.mass.hbar2_over_2m
    kappa = math.acos((1.0 + 5.0 * h * h * g_lead / 12.0) / (1.0 - h * h * g_lead / 12.0)) / h

    psi = [0j] * len(x)
    psi[-1] = complex(np.exp(1j * kappa * x[-1]))
    psi[-2] = complex(np.exp(1j * kappa * x[-2]))
    for i in range(len(x) - 2, 0, -1):
        psi[i - 1] = (centre[i] * psi[i] - weight[i + 1] * psi[i + 1]) / weight[i - 1]

    # psi = A exp(i kappa x) + B exp(-i kappa x) at x[0], x[1], both in the left lead
    matrix = np.array([[np.exp(1j * kappa * x[0]), np.exp(-1j * kappa * x[0])],
                       [np.exp(1j * kappa * x[1]), np.exp(-1j * kappa * x[1])]])
    incident, _ = np.linalg.solve(matrix, np.array([psi[0], psi[1]]))
    t_prob = 1.0 / abs(incident) ** 2
    debug_write(log, 'NUMEROV', 'E=%r steps=%d T=%r' % (energy, n_steps, t_prob))
    return float(t_prob)
