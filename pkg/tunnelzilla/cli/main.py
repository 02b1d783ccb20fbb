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
Command line entry point::

    tunnelzilla <subcommand> --config <path> [--out-dir <path>] [--seed <u64>] [--quiet]

Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 success with warnings.
"""

__author__ = 'Sandboxzilla'

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from ..errors import ValidationError
from ..utils import LoggerWrapper, exit_on_error
from ..utils.logger import EXIT_OK, EXIT_WARNINGS
from .config import KINDS, parse_config
from .runner import LOG_NAME, RUNNERS

ENV_OUT_DIR = 'TUNNELZILLA_OUT_DIR'
DEFAULT_OUT_DIR = './out'

EPILOG = """\
Defaults (see docs/config.md for every key):
  [run]          seed = 0, workers = 1
  [barrier]      mass_ratio = 1.0, lead = 0.0
  [sweep]        n = 512, resonances = 5
  [packet]       sigma_x = 1.0
  [grid]         record_every = 10; grid, dt and t_end sized from the packet
  [uncertainty]  delta_x = 1.0, states = gaussian, n_random = 100, ensemble_samples = 0
  [output]       out_dir = ./out (after --out-dir and $%s), log_file = true
""" % ENV_OUT_DIR


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    arg_parser = _ArgumentParser(prog='tunnelzilla',
                                 description='1-D tunneling: transmission, wave packets, uncertainty and '
                                             'tunneling time estimates',
                                 epilog=EPILOG,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    arg_parser.add_argument('subcommand',
                            choices=KINDS,
                            help='experiment to run')
    arg_parser.add_argument('--config',
                            metavar='path',
                            type=str,
                            required=True,
                            help='experiment config file')
    arg_parser.add_argument('--out-dir',
                            metavar='path',
                            type=str,
                            default=None,
                            help='output directory (overrides $%s and [output] out_dir)' % ENV_OUT_DIR)
    arg_parser.add_argument('--seed',
                            metavar='u64',
                            type=int,
                            default=None,
                            help='random seed (overrides [run] seed)')
    arg_parser.add_argument('--quiet',
                            action='store_true',
                            help='only warnings and errors on the console')
    return arg_parser


def resolve_out_dir(flag: Optional[str], configured: Optional[str]) -> Path:
    for candidate in (flag, os.environ.get(ENV_OUT_DIR), configured, DEFAULT_OUT_DIR):
        if candidate:
            return Path(candidate).expanduser()


@exit_on_error()
def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as exp:
        raise ValidationError("cannot read config '%s': %s" % (args.config, exp)) from exp
    config = parse_config(text, kind=args.subcommand)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
        if not 0 <= config.seed < 2 ** 64:
            raise ValidationError("--seed must be in [0, 2^64), got %r" % (args.seed,))
    out_dir = resolve_out_dir(args.out_dir, config.output.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    LoggerWrapper.reset()
    log = LoggerWrapper(name=LOG_NAME,
                        location=out_dir,
                        console_level=logging.WARNING if args.quiet else logging.INFO,
                        file_output=config.output.log_file)
    log.info('MAIN,%s with %s into %s', config.kind, args.config, out_dir)
    summary = RUNNERS[config.kind](config, out_dir)
    if summary.flags:
        log.warning('MAIN,finished with warnings: %s', ', '.join(summary.flags))
        return EXIT_WARNINGS
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
