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

import functools
import logging
import sys
from logging.handlers import MemoryHandler
from pathlib import Path
from typing import Callable, Optional

from ..errors import NumericalError, ValidationError

ROOT_NAME = 'tunnelzilla'

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_WARNINGS = 3


class LoggerWrapper(logging.Logger):
    """
    Process wide configuration of the ``tunnelzilla`` logger.

    Library modules log through ``logging.getLogger(__name__)``; they are all
    children of the ``tunnelzilla`` logger, so the handlers installed here see
    every record.  Calling the wrapper again returns the configured instance.
    """
    __instance = None

    def __new__(cls,
                name: str = 'tunnelzilla.log',
                level: int = None,
                show_level: bool = True,
                show_thread: bool = True,
                show_module: bool = True,
                show_method: bool = True,
                console_output: bool = True,
                console_level: int = None,
                file_output: bool = True,
                location: Optional[Path] = None) -> logging.Logger:
        if LoggerWrapper.__instance is None:

            name = Path(name).expanduser()
            if len(name.suffix) == 0:
                name = Path(str(name) + '.log')

            if location is None:
                location = name.parent if len(str(name.parent)) > 1 else Path('.')
            location = Path(location).expanduser()
            name = Path(name.name)

            instance = logging.getLogger(ROOT_NAME)

            if level is None:
                level = logging.DEBUG

            format_str = '%(asctime)s.%(msecs)03d,'
            if show_level:
                format_str += '[%(levelname)s],'
            if show_module or show_method or show_thread:
                format_str += '['
                if show_thread:
                    format_str += '%(threadName)s'
                if show_module:
                    format_str += ':%(module)s'
                if show_method:
                    format_str += ':%(funcName)s'
                if show_module:
                    format_str += ':%(lineno)d'
                format_str += '],'

            instance.setLevel(level=level)
            instance.propagate = False
            instance.formatter = logging.Formatter(format_str + '%(message)s', datefmt='%Y-%m-%d %H:%M:%S')

            if instance.hasHandlers():
                instance.handlers.clear()

            if console_output:
                stream_handler = logging.StreamHandler()
                stream_handler.set_name(name='console')
                stream_handler.setLevel(console_level if console_level is not None else level)
                stream_handler.setFormatter(instance.formatter)
                instance.addHandler(stream_handler)

            if file_output:
                location.mkdir(parents=True, exist_ok=True)
                file_handler = logging.FileHandler(Path(location, name))
                file_handler.set_name(name=name.stem)
                file_handler.setFormatter(instance.formatter)
                instance.addHandler(file_handler)

            LoggerWrapper.__instance = instance

        return LoggerWrapper.__instance

    @staticmethod
    def reset():
        """Drop the configured instance and close its handlers."""
        if LoggerWrapper.__instance is not None:
            for handler in list(LoggerWrapper.__instance.handlers):
                LoggerWrapper.__instance.removeHandler(handler)
                handler.close()
            LoggerWrapper.__instance.propagate = True
        LoggerWrapper.__instance = None


def debug_write(log: logging.Logger, topic: str, data, level: int = logging.DEBUG):
    """Log one ``topic,data`` entry."""
    if log.isEnabledFor(level):
        log.log(level, '%s,%s', topic, data)


class _TailHandler(MemoryHandler):
    """Keeps the last ``capacity`` records and hands them over only when an error arrives."""

    def shouldFlush(self, record):
        if len(self.buffer) > self.capacity:
            del self.buffer[0]
        return record.levelno >= self.flushLevel


def exit_on_error(logger: logging.Logger = None, capacity: int = 100):
    """
    Turn a CLI entry point into one that returns an exit code.

    ValidationError maps to 1, NumericalError and anything unexpected to 2.
    When the console is quieter than DEBUG, the last ``capacity`` records are
    replayed on stderr if the call fails.
    """

    def decorator(fn: Callable[..., int]):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            log = logger if logger is not None else logging.getLogger(ROOT_NAME)
            trail = logging.StreamHandler(sys.stderr)
            trail.setFormatter(getattr(log, 'formatter', None) or logging.Formatter('%(message)s'))
            mem_handler = _TailHandler(capacity, flushLevel=logging.ERROR, target=trail)
            quiet = any(isinstance(handler, logging.StreamHandler)
                        and not isinstance(handler, logging.FileHandler)
                        and handler.level > logging.DEBUG for handler in log.handlers)
            if quiet:
                log.addHandler(mem_handler)
            try:
                return fn(*args, **kwargs)
            except ValidationError as exp:
                log.error('VALIDATION,%s', exp)
                return EXIT_VALIDATION
            except NumericalError as exp:
                log.exception('NUMERICAL,%s', exp, exc_info=exp)
                return EXIT_NUMERICAL
            except Exception as exp:
                log.exception('Call Failed', exc_info=exp)
                return EXIT_NUMERICAL
            finally:
                super(MemoryHandler, mem_handler).flush()
                if quiet:
                    log.removeHandler(mem_handler)

        return wrapper

    return decorator
