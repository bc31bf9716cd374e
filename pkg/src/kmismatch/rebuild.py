"""Epoch-based rebuilding, amortized and deamortized.

A :class:`RebuildingStructure` owns a pattern/text pair and a state object
that stays valid for ``epoch_length`` updates after it was built. Subclasses
provide ``build_steps``, a generator that yields elementary step counts and
returns a fresh state exposing ``updates_left``, ``apply_update`` and
``query``.

:class:`LazyRebuilder` runs two such structures with staggered epochs of
``ceil(k/2)`` updates. One of them is always active and current; the other
rebuilds from its snapshot with a fixed per-update step budget during the
first half of the epoch, then replays its backlog two updates at a time.
"""
from __future__ import annotations

import math
from collections import deque
from typing import Sequence

from .core import Answer, normalize_target
from .counters import Counters
from .errors import BadK, IndexOutOfRange, PreconditionViolation
from .static import Steps, drain
from .strings import StringPair


class RebuildingStructure:
    def __init__(self, pattern: Sequence[int], text: Sequence[int], k: int, *,
                 epoch_length: int | None = None, counters: Counters | None = None,
                 verify: bool = False, seed: int | None = None, eager: bool = True):
        m, n = len(pattern), len(text)
        if n > 2 * m or m > n:
            raise PreconditionViolation(f"need m <= n <= 2m, got m={m}, n={n}")
        if not 1 <= k <= m:
            raise BadK(f"k={k} outside [1..{m}]")
        self.k, self.m, self.n = k, m, n
        self.epoch_length = k if epoch_length is None else epoch_length
        if self.epoch_length < 1:
            raise ValueError("epoch_length must be positive")
        self.counters = counters if counters is not None else Counters()
        self.strings = StringPair.create(pattern, text, seed=seed, verify=verify, counters=self.counters)
        self.state = None
        self.last_rebuild_steps = 0
        if eager:
            self.rebuild()

    @property
    def threshold(self) -> int:
        """Rebuild threshold: every k-occurrence stays inside it for a whole epoch."""
        return min(self.m, self.k + self.epoch_length)

    def build_steps(self) -> Steps:
        raise NotImplementedError

    def rebuild(self) -> None:
        self.state, steps = drain(self.build_steps())
        self.counters.rebuild_steps += steps
        self.last_rebuild_steps = steps

    def check_index(self, target: str, i: int) -> str:
        target = normalize_target(target)
        size = self.m if target == "P" else self.n
        if not 0 <= i < size:
            raise IndexOutOfRange(f"update {target}[{i}] outside [0..{size})")
        return target

    def update(self, target: str, i: int, c: int) -> None:
        target = self.check_index(target, i)
        if self.state.updates_left == 0:
            self.rebuild()
        self.state.apply_update(target, i, c)

    def query(self, i: int) -> Answer:
        if not 0 <= i <= self.n - self.m:
            raise IndexOutOfRange(f"query {i} outside [0..{self.n - self.m}]")
        return self.state.query(i)


class LazyRebuilder:
    """Two staggered instances; queries always go to the one that is current."""

    def __init__(self, factory, k: int, counters: Counters | None = None):
        if k < 2:
            raise ValueError("the two-instance scheme needs k >= 2")
        self.counters = counters if counters is not None else Counters()
        self.k = k
        self.half = math.ceil(k / 2)
        self.first_half = math.ceil(self.half / 2)
        # each instance sees 2*half updates between consecutive rebuilds
        self.instances = [
            factory(epoch_length=2 * self.half, counters=self.counters, eager=False),
            factory(epoch_length=2 * self.half, counters=self.counters, eager=True),
        ]
        self.estimate = self.instances[1].last_rebuild_steps
        self.active = self.instances[1]
        self.inactive = self.instances[0]
        self.backlog: deque = deque()
        self.gen = None
        self.gen_steps = 0
        self.budget = 0
        self.updates = 0
        self.max_backlog = 0

    @property
    def m(self) -> int:
        return self.active.m

    @property
    def n(self) -> int:
        return self.active.n

    def _begin_epoch(self, e: int) -> None:
        self.inactive = self.instances[e % 2]
        self.active = self.instances[1 - e % 2]
        assert not self.backlog and self.gen is None
        self.inactive.state = None
        self.gen = self.inactive.build_steps()
        self.gen_steps = 0
        self.budget = max(1, math.ceil(self.estimate / self.first_half))

    def _advance(self, budget: float) -> None:
        spent = 0
        try:
            while spent < budget:
                spent += next(self.gen)
        except StopIteration as stop:
            self.inactive.state = stop.value
            self.gen = None
        self.gen_steps += spent
        self.counters.rebuild_steps += spent
        if self.gen is None:
            self.inactive.last_rebuild_steps = self.gen_steps
            self.estimate = self.gen_steps

    def _replay(self, count: float) -> None:
        state = self.inactive.state
        while self.backlog and count > 0:
            state.apply_update(*self.backlog.popleft())
            count -= 1

    def update(self, target: str, i: int, c: int) -> None:
        target = self.active.check_index(target, i)
        e, pos = divmod(self.updates, self.half)
        if pos == 0:
            self._begin_epoch(e)
        self.active.state.apply_update(target, i, c)
        self.backlog.append((target, i, c))
        self.max_backlog = max(self.max_backlog, len(self.backlog))
        if self.gen is not None:
            self._advance(self.budget)
        else:
            self._replay(2)
        if pos == self.half - 1:
            if self.gen is not None:
                self._advance(math.inf)
            self._replay(math.inf)
        self.updates += 1

    def query(self, i: int) -> Answer:
        return self.active.query(i)
