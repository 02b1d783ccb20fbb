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
Experiment configuration.

The file format is line based::

    # comment
    [section]
    key = value     # trailing comment

Keys are only accepted in the section that documents them; anything unknown
is an error that names the line.  Parsing fills in defaults and then checks
the values the chosen experiment needs against the preconditions of the
physics modules, so a bad config fails before any computation starts.
"""

__author__ = 'Sandboxzilla'

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Callable, Dict, Optional, Tuple

from ..errors import ValidationError
from ..physics.analytic_barrier import RectangularBarrier
from ..physics.transfer_matrix import PotentialProfile
from ..physics.units_core import EffectiveMass, SpatialGrid, make_grid
from ..physics.wavepacket import WavePacketSpec, check_fits

KINDS = ('transmission', 'packet', 'estimate', 'times', 'check-uncertainty')
STATES = ('gaussian', 'random', 'both')
SEED_LIMIT = 2 ** 64
DENSE_LIMIT = 2048


@dataclass(frozen=True)
class BarrierConfig:
    v0: Optional[float] = None
    d: Optional[float] = None
    mass_ratio: float = 1.0
    lead: float = 0.0


@dataclass(frozen=True)
class ProfileConfig:
    # (width nm, height eV) from the left lead to the right lead
    segments: Optional[Tuple[Tuple[float, float], ...]] = None


@dataclass(frozen=True)
class SweepConfig:
    e_min: Optional[float] = None
    e_max: Optional[float] = None
    n: int = 512
    resonances: int = 5


@dataclass(frozen=True)
class PacketConfig:
    x0: Optional[float] = None
    sigma_x: float = 1.0
    e0: Optional[float] = None


@dataclass(frozen=True)
class GridConfig:
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    n_points: Optional[int] = None
    dt: Optional[float] = None
    t_end: Optional[float] = None
    record_every: int = 10
    snapshots: Tuple[float, ...] = ()


@dataclass(frozen=True)
class UncertaintyConfig:
    delta_x: float = 1.0
    states: str = 'gaussian'
    n_random: int = 100
    ensemble_samples: int = 0
    x0: float = 0.0
    sigma_x: float = 1.0
    e0: float = 0.01
    margin: int = 2


@dataclass(frozen=True)
class TimingConfig:
    energy: Optional[float] = None
    de: Optional[float] = None
    widths: Tuple[float, ...] = ()
    packet: bool = False
    assert_order: bool = False


@dataclass(frozen=True)
class OutputConfig:
    out_dir: Optional[str] = None
    log_file: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    seed: int = 0
    workers: int = 1
    barrier: BarrierConfig = BarrierConfig()
    profile: ProfileConfig = ProfileConfig()
    sweep: SweepConfig = SweepConfig()
    packet: PacketConfig = PacketConfig()
    grid: GridConfig = GridConfig()
    uncertainty: UncertaintyConfig = UncertaintyConfig()
    timing: TimingConfig = TimingConfig()
    output: OutputConfig = OutputConfig()

    @property
    def mass(self) -> EffectiveMass:
        return EffectiveMass(self.barrier.mass_ratio)

    @property
    def has_profile(self) -> bool:
        return self.profile.segments is not None or (self.barrier.v0 is not None and self.barrier.d is not None)

    def potential_profile(self) -> PotentialProfile:
        """[profile] segments when given, otherwise the [barrier] rectangle."""
        if self.profile.segments is not None:
            return PotentialProfile(segments=self.profile.segments, lead_height=self.barrier.lead, mass=self.mass)
        if self.barrier.v0 is None or self.barrier.d is None:
            raise ValidationError("experiment '%s' needs [barrier] v0 and d or [profile] segments" % self.kind)
        single = PotentialProfile.single(RectangularBarrier(v0=self.barrier.v0, d=self.barrier.d, mass=self.mass))
        return PotentialProfile(segments=single.segments, lead_height=self.barrier.lead, mass=self.mass)

    def packet_spec(self) -> WavePacketSpec:
        if self.packet.x0 is None or self.packet.e0 is None:
            raise ValidationError("experiment '%s' needs [packet] x0 and e0" % self.kind)
        return WavePacketSpec(x0=self.packet.x0, sigma_x=self.packet.sigma_x, e0=self.packet.e0, mass=self.mass)

    def grid_override(self) -> Optional[SpatialGrid]:
        values = (self.grid.x_min, self.grid.x_max, self.grid.n_points)
        if all(v is None for v in values):
            return None
        if any(v is None for v in values):
            raise ValidationError("[grid] x_min, x_max and n_points must be given together")
        return make_grid(*values)

    def echo(self) -> Dict[str, Any]:
        """Every setting, defaults included; enough to repeat the run."""
        return asdict(self)


# -- value converters ---------------------------------------------------------

def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not a finite number")
    return value


def _int(text: str) -> int:
    return int(text, 10)


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ('true', 'yes', 'on', '1'):
        return True
    if lowered in ('false', 'no', 'off', '0'):
        return False
    raise ValueError("expected true or false")


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(_float(item) for item in text.split(',') if item.strip())


def _segments(text: str) -> Tuple[Tuple[float, float], ...]:
    """``width:height, width:height``; ``none`` for a free profile."""
    if text.lower() == 'none':
        return ()
    result = []
    for item in text.split(','):
        width, sep, height = item.partition(':')
        if not sep:
            raise ValueError("segment '%s' is not width:height" % item.strip())
        result.append((_float(width), _float(height)))
    return tuple(result)


def _choice(options: Tuple[str, ...]) -> Callable[[str], str]:
    def convert(text: str) -> str:
        if text not in options:
            raise ValueError("expected one of %s" % ', '.join(options))
        return text
    return convert


SCHEMA: Dict[str, Dict[str, Callable[[str], Any]]] = {
    'run': {'kind': _choice(KINDS), 'seed': _int, 'workers': _int},
    'barrier': {'v0': _float, 'd': _float, 'mass_ratio': _float, 'lead': _float},
    'profile': {'segments': _segments},
    'sweep': {'e_min': _float, 'e_max': _float, 'n': _int, 'resonances': _int},
    'packet': {'x0': _float, 'sigma_x': _float, 'e0': _float},
    'grid': {'x_min': _float, 'x_max': _float, 'n_points': _int, 'dt': _float, 't_end': _float,
             'record_every': _int, 'snapshots': _floats},
    'uncertainty': {'delta_x': _float, 'states': _choice(STATES), 'n_random': _int,
                    'ensemble_samples': _int, 'x0': _float, 'sigma_x': _float, 'e0': _float, 'margin': _int},
    'timing': {'energy': _float, 'de': _float, 'widths': _floats, 'packet': _bool, 'assert_order': _bool},
    'output': {'out_dir': str, 'log_file': _bool},
}

_SECTION_TYPES = {'barrier': BarrierConfig, 'profile': ProfileConfig, 'sweep': SweepConfig,
                  'packet': PacketConfig, 'grid': GridConfig, 'uncertainty': UncertaintyConfig,
                  'timing': TimingConfig, 'output': OutputConfig}


def _read(text: str) -> Dict[str, Dict[str, Any]]:
    values: Dict[str, Dict[str, Any]] = {name: {} for name in SCHEMA}
    section = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if line.startswith('['):
            if not line.endswith(']'):
                raise ValidationError("malformed section header '%s'" % line, line=number)
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ValidationError("unknown section '%s'" % section, line=number)
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ValidationError("expected 'key = value', got '%s'" % line, line=number)
        if section is None:
            raise ValidationError("key '%s' outside of any section" % key, line=number, key=key)
        if key not in SCHEMA[section]:
            raise ValidationError("unknown key '%s' in [%s]" % (key, section), line=number, key=key)
        if key in values[section]:
            raise ValidationError("key '%s' repeated in [%s]" % (key, section), line=number, key=key)
        if not value:
            raise ValidationError("key '%s' has no value" % key, line=number, key=key)
        try:
            values[section][key] = SCHEMA[section][key](value)
        except ValueError as exp:
            raise ValidationError("bad value for '%s': %s" % (key, exp), line=number, key=key) from exp
    return values


def parse_config(text: str, kind: Optional[str] = None) -> ExperimentConfig:
    """
    Parse and validate a config.

    :param text: the config file contents
    :param kind: experiment to validate for; overrides ``[run] kind``
    :return: the validated config with defaults filled in
    """
    values = _read(text)
    run = values['run']
    kind = kind or run.get('kind')
    if kind is None:
        raise ValidationError("no experiment kind: give a subcommand or [run] kind")
    if kind not in KINDS:
        raise ValidationError("unknown experiment kind '%s'" % kind)
    sections = {name: cls(**values[name]) for name, cls in _SECTION_TYPES.items()}
    config = ExperimentConfig(kind=kind, seed=run.get('seed', 0), workers=run.get('workers', 1), **sections)
    validate(config)
    return config


def validate(config: ExperimentConfig):
    """Check everything ``config.kind`` will use; raises ValidationError naming the precondition."""
    if not 0 <= config.seed < SEED_LIMIT:
        raise ValidationError("seed must be in [0, 2^64), got %r" % (config.seed,))
    if config.workers < 1:
        raise ValidationError("workers must be >= 1, got %r" % (config.workers,))
    EffectiveMass(config.barrier.mass_ratio)
    if config.kind == 'transmission':
        _check_transmission(config)
    elif config.kind == 'estimate':
        _check_delta_x(config.uncertainty)
        if config.barrier.v0 is not None and config.barrier.v0 <= 0.0:
            raise ValidationError("v0 must be > 0, got %r" % (config.barrier.v0,))
    elif config.kind == 'packet':
        _check_packet(config)
    elif config.kind == 'times':
        profile = config.potential_profile()
        _check_delta_x(config.uncertainty)
        if config.timing.energy is None:
            raise ValidationError("experiment 'times' needs [timing] energy")
        if config.timing.energy <= profile.lead_height:
            raise ValidationError("[timing] energy %r must exceed the lead height %r"
                                  % (config.timing.energy, profile.lead_height))
        if config.timing.de is not None and config.timing.de <= 0.0:
            raise ValidationError("[timing] de must be > 0, got %r" % (config.timing.de,))
        if any(w <= 0.0 for w in config.timing.widths):
            raise ValidationError("[timing] widths must all be > 0")
        if config.timing.widths and config.barrier.v0 is None:
            raise ValidationError("[timing] widths needs [barrier] v0")
        if config.timing.packet:
            _check_packet(config)
    elif config.kind == 'check-uncertainty':
        _check_uncertainty(config)


def _check_delta_x(section: UncertaintyConfig):
    if section.delta_x <= 0.0:
        raise ValidationError("[uncertainty] delta_x must be > 0, got %r" % (section.delta_x,))


def _check_transmission(config: ExperimentConfig):
    profile = config.potential_profile()
    sweep = config.sweep
    if sweep.e_min is None or sweep.e_max is None:
        raise ValidationError("experiment 'transmission' needs [sweep] e_min and e_max")
    if not profile.lead_height < sweep.e_min < sweep.e_max:
        raise ValidationError("sweep needs lead height < e_min < e_max, got %r < %r < %r"
                              % (profile.lead_height, sweep.e_min, sweep.e_max))
    if sweep.n < 2:
        raise ValidationError("[sweep] n must be >= 2, got %r" % (sweep.n,))
    if sweep.resonances < 0:
        raise ValidationError("[sweep] resonances must be >= 0, got %r" % (sweep.resonances,))


def _check_packet(config: ExperimentConfig):
    profile = config.potential_profile()
    if len(profile.segments) > 1:
        raise ValidationError("packet runs need a single barrier, got %d segments" % len(profile.segments))
    if profile.lead_height != 0.0:
        raise ValidationError("packet runs need a zero lead height, got %r" % (profile.lead_height,))
    spec = config.packet_spec()
    grid = config.grid_override()
    if grid is not None:
        check_fits(spec, grid)
    timing = config.grid
    if timing.dt is not None and timing.dt <= 0.0:
        raise ValidationError("[grid] dt must be > 0, got %r" % (timing.dt,))
    if timing.t_end is not None and timing.t_end <= 0.0:
        raise ValidationError("[grid] t_end must be > 0, got %r" % (timing.t_end,))
    if timing.record_every < 1:
        raise ValidationError("[grid] record_every must be >= 1, got %r" % (timing.record_every,))
    if any(t < 0.0 for t in timing.snapshots):
        raise ValidationError("[grid] snapshots must be >= 0")


def _check_uncertainty(config: ExperimentConfig):
    section = config.uncertainty
    if section.sigma_x <= 0.0 or section.e0 <= 0.0:
        raise ValidationError("[uncertainty] sigma_x and e0 must be > 0")
    if section.n_random < 1:
        raise ValidationError("[uncertainty] n_random must be >= 1, got %r" % (section.n_random,))
    if section.ensemble_samples and section.ensemble_samples < 100:
        raise ValidationError("[uncertainty] ensemble_samples must be 0 or >= 100, got %r"
                              % (section.ensemble_samples,))
    grid = uncertainty_grid(config)
    if section.ensemble_samples and grid.n_points > DENSE_LIMIT:
        raise ValidationError("ensemble sampling needs a grid of at most %d points, got %d"
                              % (DENSE_LIMIT, grid.n_points))
    if section.margin < 0 or 2 * section.margin >= grid.n_points:
        raise ValidationError("[uncertainty] margin %r does not fit the grid" % (section.margin,))
    spec = WavePacketSpec(x0=section.x0, sigma_x=section.sigma_x, e0=section.e0, mass=config.mass)
    check_fits(spec, grid)


def uncertainty_grid(config: ExperimentConfig) -> SpatialGrid:
    grid = config.grid_override()
    if grid is None:
        grid = make_grid(-15.0, 15.0, DENSE_LIMIT)
    return grid


def defaults() -> Dict[str, Dict[str, Any]]:
    """Default value of every key, by section."""
    table = {'run': {'kind': None, 'seed': 0, 'workers': 1}}
    for name, cls in _SECTION_TYPES.items():
        table[name] = {f.name: f.default for f in fields(cls)}
    return table
