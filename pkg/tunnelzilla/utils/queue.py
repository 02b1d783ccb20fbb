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

from threading import Condition
from typing import Any, Dict, Iterator, Optional


class OrderedResults:
    """
    Thread safe hand-off of indexed results that are consumed in index order.

    Workers ``put(index, item)`` in whatever order they finish; the consumer
    iterates and receives items ``0, 1, 2, ...`` strictly in sequence,
    blocking until the next expected index is available.
    """

    def __init__(self, expected: int):
        self.expected = expected
        self.items: Dict[int, Any] = {}
        self.next_index = 0
        self.condition = Condition()

    @property
    def empty(self):
        return self.size == 0

    @property
    def size(self):
        with self.condition:
            return len(self.items)

    @property
    def done(self):
        return self.next_index >= self.expected

    def put(self, index: int, item: Any):
        if not 0 <= index < self.expected:
            raise IndexError("result index %d outside [0, %d)" % (index, self.expected))
        with self.condition:
            self.items[index] = item
            self.condition.notify_all()

    def get(self, timeout: Optional[float] = None):
        """
        Return the next item in index order, or None when the wait timed out
        or every item has already been consumed.
        """
        with self.condition:
            if self.done:
                return None
            if not self.condition.wait_for(lambda: self.next_index in self.items, timeout=timeout):
                return None
            item = self.items.pop(self.next_index)
            self.next_index += 1
            return item

    def __iter__(self) -> Iterator[Any]:
        while not self.done:
            yield self.get()

    def __len__(self):
        return self.size
