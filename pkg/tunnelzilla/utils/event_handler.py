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

from typing import Any, Callable, Dict


class EventHandler(object):
    """
    Synchronous publish/subscribe channel.

    Every subscriber receives a packet dictionary with the keys ``src``,
    ``event``, ``dest`` (the subscriber name), ``cookie`` (whatever the
    subscriber registered with) and ``payload``.  Subscribers run in
    subscription order on the posting thread.

    The time stepper uses one of these to publish progress snapshots; the
    model comparison subscribes a recorder to it.
    """

    def __init__(self, **kwargs):
        # packet is the token passed to the subscriber callbacks
        self.packet = kwargs
        if 'src' not in self.packet:
            raise KeyError("src key not defined")
        self.packet.setdefault('event', self.packet['src'])
        self.packet.setdefault('dest', None)
        self.packet.setdefault('payload', None)
        self.packet.setdefault('cookie', None)
        self.cb_routines: Dict[str, Dict[str, Any]] = {}

    @property
    def has_subscribers(self) -> bool:
        return len(self.cb_routines) > 0

    def subscribe(self, name: str, on_event: Callable[[dict], Any], cookie: Any = None):
        """
        Register ``on_event`` under ``name``.  A name that is already
        subscribed keeps its first callback.

        :return: the EventHandler instance.  Allows chaining
        """
        if name not in self.cb_routines:
            self.cb_routines[name] = {'on_event': on_event, 'cookie': cookie}
        return self

    def post(self, payload, **kwargs):
        packet = self.packet.copy()
        packet.update(kwargs)
        packet['payload'] = payload
        for name, cb_routine in self.cb_routines.copy().items():
            cb_routine['on_event'](dict(packet, dest=name, cookie=cb_routine['cookie']))
        return self
