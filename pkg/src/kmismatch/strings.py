"""Dynamic strings under substitutions with fingerprint-based LCE.

Each string keeps its characters in a plain list (constant-time access), a
numpy mirror for vectorised scans, and a Fenwick tree over ``c_i * B**i``
modulo the Mersenne prime ``2**61 - 1``. A substring fingerprint is a
difference of two prefix sums, so equality of two fragments costs four
O(log n) prefix queries and a substitution costs one O(log n) point update.

Longest common prefix first compares a handful of characters directly (most
extensions in practice are short), then gallops and binary-searches with
fingerprints. In ``verify`` mode each fingerprint-derived answer is re-checked
by a direct scan and the scanned value is returned.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .counters import Counters
from .errors import IndexOutOfRange, PreconditionViolation

MOD = (1 << 61) - 1
_DIRECT = 8  # characters compared directly before switching to fingerprints

_ids = itertools.count()


class DynString:
    """Handle to a maintained string. Length never changes."""

    __slots__ = ("engine", "id", "chars", "array", "_tree", "version")

    def __init__(self, engine: StringEngine, chars: list[int]):
        self.engine = engine
        self.id = next(_ids)
        self.chars = chars
        self.array = np.asarray(chars, dtype=np.int64)
        self.version = 0
        self._tree = _fenwick_build([c * p % MOD for c, p in zip(chars, engine._powers(len(chars)))])

    @property
    def length(self) -> int:
        return len(self.chars)

    def __len__(self) -> int:
        return len(self.chars)

    def __repr__(self) -> str:
        return f"DynString(id={self.id}, length={self.length}, version={self.version})"

    def fragment(self, start: int = 0, end: int | None = None) -> Fragment:
        end = self.length if end is None else end
        if not 0 <= start <= end <= self.length:
            raise IndexOutOfRange(f"fragment [{start}, {end}) of length-{self.length} string")
        return Fragment(self, start, end)

    def _prefix(self, r: int) -> int:
        tree = self._tree
        s = 0
        while r > 0:
            s += tree[r]
            r &= r - 1
        return s % MOD


class Fragment(NamedTuple):
    source: DynString
    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start

    def chars(self) -> list[int]:
        return self.source.chars[self.start:self.end]

    def array(self) -> np.ndarray:
        return self.source.array[self.start:self.end]


class ArithmeticProgression(NamedTuple):
    start: int
    difference: int
    count: int

    def positions(self) -> list[int]:
        return [self.start + j * self.difference for j in range(self.count)]

    def __contains__(self, i) -> bool:  # type: ignore[override]
        if self.count == 0:
            return False
        if self.difference == 0:
            return i == self.start
        off = i - self.start
        return off >= 0 and off % self.difference == 0 and off // self.difference < self.count


def progression_of(positions: Sequence[int]) -> ArithmeticProgression:
    """Compact a sorted list known to be an arithmetic progression."""
    if not positions:
        return ArithmeticProgression(0, 0, 0)
    if len(positions) == 1:
        return ArithmeticProgression(positions[0], 0, 1)
    diff = positions[1] - positions[0]
    if any(b - a != diff for a, b in zip(positions, positions[1:])):
        raise AssertionError(f"occurrences {positions} do not form a progression")
    return ArithmeticProgression(positions[0], diff, len(positions))


def _fenwick_build(values: list[int]) -> list[int]:
    n = len(values)
    tree = [0] + values
    for i in range(1, n + 1):
        j = i + (i & -i)
        if j <= n:
            tree[j] = (tree[j] + tree[i]) % MOD
    return tree


class StringEngine:
    """A family of dynamic strings sharing one fingerprint base."""

    def __init__(self, alphabet_size: int | None = None, seed: int | None = None,
                 verify: bool = False, counters: Counters | None = None):
        self.alphabet_size = alphabet_size
        self.verify = verify
        self.counters = counters if counters is not None else Counters()
        self.base = random.Random(seed).randrange(1 << 20, MOD - 1)
        self._pow = [1]
        self.collisions = 0

    def _powers(self, n: int) -> list[int]:
        pw = self._pow
        b = self.base
        while len(pw) <= n:
            pw.append(pw[-1] * b % MOD)
        return pw

    def _check_char(self, c: int) -> None:
        if c < 0 or (self.alphabet_size is not None and c >= self.alphabet_size):
            raise ValueError(f"character code {c} outside alphabet of size {self.alphabet_size}")

    # -- family maintenance -------------------------------------------------

    def insert_string(self, chars: Iterable[int]) -> DynString:
        chars = [int(c) for c in chars]
        for c in chars:
            self._check_char(c)
        return DynString(self, chars)

    def substitute(self, s: DynString, i: int, c: int) -> None:
        if not 0 <= i < len(s.chars):
            raise IndexOutOfRange(f"substitute at {i} in length-{len(s.chars)} string")
        self._check_char(c)
        old = s.chars[i]
        s.version += 1
        if old == c:
            return
        s.chars[i] = c
        s.array[i] = c
        delta = (c - old) * self._powers(i)[i] % MOD
        tree = s._tree
        n = len(s.chars)
        j = i + 1
        while j <= n:
            tree[j] = (tree[j] + delta) % MOD
            j += j & -j

    # -- PILLAR primitives ----------------------------------------------------

    def access(self, s: DynString | Fragment, i: int) -> int:
        if isinstance(s, Fragment):
            if not 0 <= i < len(s):
                raise IndexOutOfRange(i)
            return s.source.chars[s.start + i]
        if not 0 <= i < len(s.chars):
            raise IndexOutOfRange(i)
        return s.chars[i]

    def length(self, s: DynString | Fragment) -> int:
        return len(s)

    def extract(self, f: DynString | Fragment, start: int, end: int) -> Fragment:
        if isinstance(f, DynString):
            f = f.fragment()
        if not 0 <= start <= end <= len(f):
            raise IndexOutOfRange(f"extract [{start}, {end}) of length-{len(f)} fragment")
        return Fragment(f.source, f.start + start, f.start + end)

    def lcp(self, a: Fragment, b: Fragment) -> int:
        return self.lce(a.source, a.start, b.source, b.start, min(len(a), len(b)))

    def lcp_r(self, a: Fragment, b: Fragment) -> int:
        return self.lce_r(a.source, a.end, b.source, b.end, min(len(a), len(b)))

    def ipm(self, p: Fragment, t: Fragment) -> ArithmeticProgression:
        m = len(p)
        if m < 1:
            raise PreconditionViolation("IPM needs a non-empty pattern")
        if len(t) > 2 * m:
            raise PreconditionViolation(f"IPM needs |t| <= 2|p|, got {len(t)} > {2 * m}")
        pc = p.chars()
        tc = t.chars()
        occ = [i for i in range(len(tc) - m + 1) if tc[i:i + m] == pc]
        self.counters.char_comparisons += (len(tc) - m + 1) * m if len(tc) >= m else 0
        return progression_of(occ)

    # -- longest common extensions -------------------------------------------

    def _equal(self, a: DynString, i: int, b: DynString, j: int, h: int) -> bool:
        pw = self._pow
        ha = a._prefix(i + h) - a._prefix(i)
        hb = b._prefix(j + h) - b._prefix(j)
        return ha * pw[j] % MOD == hb * pw[i] % MOD

    def lce(self, a: DynString, i: int, b: DynString, j: int, limit: int) -> int:
        """Length of the longest common prefix of a[i:] and b[j:], capped at ``limit``."""
        self.counters.lcp_calls += 1
        ca, cb = a.chars, b.chars
        stop = limit if limit < _DIRECT else _DIRECT
        h = 0
        while h < stop and ca[i + h] == cb[j + h]:
            h += 1
        self.counters.char_comparisons += h + (h < stop)
        if h < stop or h == limit:
            return h
        self._powers(max(i, j) + 1)
        lo = h
        while True:
            probe = min(limit, 2 * lo)
            if self._equal(a, i, b, j, probe):
                lo = probe
                if probe == limit:
                    break
            else:
                hi = probe
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if self._equal(a, i, b, j, mid):
                        lo = mid
                    else:
                        hi = mid
                break
        if self.verify:
            lo = self._verify_lce(ca, i, cb, j, limit, lo)
        return lo

    def _verify_lce(self, ca, i, cb, j, limit, got) -> int:
        h = 0
        while h < limit and ca[i + h] == cb[j + h]:
            h += 1
        if h != got:
            self.collisions += 1
        return h

    def lce_r(self, a: DynString, i_end: int, b: DynString, j_end: int, limit: int) -> int:
        """Longest common suffix of a[:i_end] and b[:j_end], capped at ``limit``."""
        self.counters.lcp_calls += 1
        ca, cb = a.chars, b.chars
        stop = limit if limit < _DIRECT else _DIRECT
        h = 0
        while h < stop and ca[i_end - 1 - h] == cb[j_end - 1 - h]:
            h += 1
        self.counters.char_comparisons += h + (h < stop)
        if h < stop or h == limit:
            return h
        self._powers(max(i_end, j_end) + 1)
        lo = h
        while True:
            probe = min(limit, 2 * lo)
            if self._equal(a, i_end - probe, b, j_end - probe, probe):
                lo = probe
                if probe == limit:
                    break
            else:
                hi = probe
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if self._equal(a, i_end - mid, b, j_end - mid, mid):
                        lo = mid
                    else:
                        hi = mid
                break
        if self.verify:
            h = 0
            while h < limit and ca[i_end - 1 - h] == cb[j_end - 1 - h]:
                h += 1
            if h != lo:
                self.collisions += 1
            lo = h
        return lo


@dataclass
class StringPair:
    """Pattern and text living in one engine; the shape every dynamic structure starts from."""

    engine: StringEngine
    P: DynString
    T: DynString

    @classmethod
    def create(cls, pattern: Sequence[int], text: Sequence[int], *, seed: int | None = None,
               verify: bool = False, counters: Counters | None = None,
               alphabet_size: int | None = None) -> StringPair:
        engine = StringEngine(alphabet_size=alphabet_size, seed=seed, verify=verify, counters=counters)
        return cls(engine, engine.insert_string(pattern), engine.insert_string(text))

    def get(self, target: str) -> DynString:
        return self.P if target == "P" else self.T
