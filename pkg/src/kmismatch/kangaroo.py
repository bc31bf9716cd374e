"""Fast-update structure: substitutions go straight to the dynamic strings,
queries walk the alignment mismatch by mismatch with LCE jumps."""
from __future__ import annotations

from typing import Sequence

from .core import INF, Answer, normalize_target
from .counters import Counters
from .errors import BadK, IndexOutOfRange, PreconditionViolation
from .strings import StringPair


class KangarooStructure:
    def __init__(self, pattern: Sequence[int], text: Sequence[int], k: int, *,
                 counters: Counters | None = None, verify: bool = False, seed: int | None = None):
        m, n = len(pattern), len(text)
        if n > 2 * m or m > n:
            raise PreconditionViolation(f"need m <= n <= 2m, got m={m}, n={n}")
        if not 1 <= k <= m:
            raise BadK(f"k={k} outside [1..{m}]")
        self.counters = counters if counters is not None else Counters()
        self.strings = StringPair.create(pattern, text, seed=seed, verify=verify, counters=self.counters)
        self.k = k
        self.m = m
        self.n = n

    def update(self, target: str, i: int, c: int) -> None:
        s = self.strings.get(normalize_target(target))
        self.strings.engine.substitute(s, i, c)

    def query(self, i: int) -> Answer:
        m = self.m
        if not 0 <= i <= self.n - m:
            raise IndexOutOfRange(f"query {i} outside [0..{self.n - m}]")
        lce = self.strings.engine.lce
        P, T, k = self.strings.P, self.strings.T, self.k
        pos = mism = 0
        while True:
            pos += lce(P, pos, T, i + pos, m - pos)
            if pos >= m:
                return mism
            mism += 1
            if mism > k:
                return INF
            pos += 1
            if pos >= m:
                return mism
