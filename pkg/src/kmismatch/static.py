"""Static k-mismatch solver and structure analyser.

``occ_k`` reports every alignment whose Hamming distance is at most ``k``.
Two exact evaluation strategies are available: kangaroo counting with LCE
queries on the string engine (cost (n-m+1)(k+1) LCE calls in the worst case),
and a vectorised filter that compares column blocks of all alignments at once
and discards an alignment as soon as its running count exceeds ``k``. The
``auto`` method picks kangaroo for very small thresholds.

``analyze`` implements the occurrence/periodicity dichotomy: either few
occurrences (returned explicitly) or a short primitive approximate period Q of
the pattern together with the mismatch sets of the pattern and of the text
fragment spanned by the occurrences. All periodic-case guarantees are checked
before returning.

Work is written as generators that yield elementary step counts, so callers
that need to spread a rebuild over several updates can advance it piecemeal.
``drain`` runs such a generator to completion.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Generator, Iterator, Sequence, Union

import numpy as np

from .counters import Counters
from .errors import BadK, StructureNotFound
from .strings import Fragment, StringEngine

OCC_FACTOR = 864
PERIOD_FACTOR = 128
_BLOCK_ROWS = 64
_FIRST_COLS = 32
_KANGAROO_MAX_K = 2

Steps = Generator[int, None, object]


def drain(gen: Steps) -> tuple[object, int]:
    """Run a step generator to completion; return (result, total steps)."""
    total = 0
    while True:
        try:
            total += next(gen)
        except StopIteration as stop:
            return stop.value, total


def fill_steps(target: dict, items: Sequence[tuple[int, int]], chunk: int = _BLOCK_ROWS) -> Steps:
    """Insert ``items`` into ``target`` a slice at a time, one step per entry."""
    for lo in range(0, len(items), chunk):
        part = items[lo:lo + chunk]
        target.update(part)
        yield len(part)


# -- result types -------------------------------------------------------------

@dataclass(frozen=True)
class OccurrenceSet:
    entries: tuple[tuple[int, int], ...]
    threshold: int

    def __post_init__(self):
        prev = -1
        for i, d in self.entries:
            if i <= prev or d > self.threshold or d < 0:
                raise ValueError(f"malformed occurrence entry ({i}, {d})")
            prev = i

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    @property
    def positions(self) -> list[int]:
        return [i for i, _ in self.entries]

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)


@dataclass(frozen=True)
class Progression:
    start: int
    difference: int
    count: int
    distance: int

    def positions(self) -> list[int]:
        return [self.start + j * self.difference for j in range(self.count)]


@dataclass(frozen=True)
class ProgressionSet:
    progressions: tuple[Progression, ...]
    difference: int
    threshold: int

    def expand(self) -> OccurrenceSet:
        entries = sorted((i, p.distance) for p in self.progressions for i in p.positions())
        return OccurrenceSet(tuple(entries), self.threshold)


@dataclass(frozen=True)
class Explicit:
    occurrences: OccurrenceSet


@dataclass(frozen=True)
class Periodic:
    """Periodic outcome; ``start``/``end`` delimit T' inside the analysed text."""

    start: int
    end: int
    period: tuple[int, ...]
    pattern_mismatches: tuple[int, ...]
    text_mismatches: tuple[int, ...]
    occurrences: OccurrenceSet


AnalysisResult = Union[Explicit, Periodic]


# -- helpers ------------------------------------------------------------------

def _as_fragments(P, T, counters: Counters | None) -> tuple[Fragment, Fragment]:
    if isinstance(P, Fragment) and isinstance(T, Fragment):
        return P, T
    if isinstance(P, Fragment):
        engine = P.source.engine
    elif isinstance(T, Fragment):
        engine = T.source.engine
    else:
        engine = StringEngine(counters=counters)
    p = P if isinstance(P, Fragment) else engine.insert_string(P).fragment()
    t = T if isinstance(T, Fragment) else engine.insert_string(T).fragment()
    return p, t


def _check_k(k: int, m: int) -> None:
    if not 1 <= k <= m:
        raise BadK(f"k={k} outside [1..{m}]")


def mismatches_vs_period(S: Sequence[int] | np.ndarray, Q: Sequence[int]) -> list[int]:
    s = np.asarray(S, dtype=np.int64)
    if len(s) == 0:
        return []
    ext = np.resize(np.asarray(Q, dtype=np.int64), len(s))
    return np.flatnonzero(s != ext).tolist()


# -- occurrences ----------------------------------------------------------------

def _kangaroo_steps(p: Fragment, t: Fragment, k: int) -> Steps:
    engine = p.source.engine
    m = len(p)
    P, ps = p.source, p.start
    T, ts = t.source, t.start
    entries = []
    for i in range(len(t) - m + 1):
        pos = 0
        mism = 0
        calls = 0
        while True:
            h = engine.lce(P, ps + pos, T, ts + i + pos, m - pos)
            calls += 1
            pos += h
            if pos >= m:
                break
            mism += 1
            if mism > k:
                break
            pos += 1
            if pos >= m:
                break
        if mism <= k:
            entries.append((i, mism))
        yield calls
    return OccurrenceSet(tuple(entries), k)


def _filter_steps(p: Fragment, t: Fragment, k: int, counters: Counters | None) -> Steps:
    P = p.array()
    T = t.array()
    m = len(P)
    count = len(T) - m + 1
    entries = []
    if count <= 0:
        return OccurrenceSet((), k)
    windows = np.lib.stride_tricks.sliding_window_view(T, m)
    bounds = [0]
    width = _FIRST_COLS
    while bounds[-1] < m:
        bounds.append(min(m, bounds[-1] + width))
        width *= 2
    for lo in range(0, count, _BLOCK_ROWS):
        rows = np.arange(lo, min(count, lo + _BLOCK_ROWS))
        dist = np.zeros(len(rows), dtype=np.int64)
        for a, b in zip(bounds, bounds[1:]):
            dist += np.count_nonzero(windows[rows, a:b] != P[a:b], axis=1)
            if counters is not None:
                counters.char_comparisons += len(rows) * (b - a)
            yield len(rows)
            keep = dist <= k
            rows, dist = rows[keep], dist[keep]
            if len(rows) == 0:
                break
        entries.extend(zip(rows.tolist(), dist.tolist()))
    return OccurrenceSet(tuple(entries), k)


def occ_k_steps(P, T, k: int, *, method: str = "auto", counters: Counters | None = None) -> Steps:
    p, t = _as_fragments(P, T, counters)
    m = len(p)
    _check_k(k, m)
    if m > len(t):
        return OccurrenceSet((), k)
    if method == "auto":
        method = "kangaroo" if k <= _KANGAROO_MAX_K and len(t) - m < 64 else "filter"
    if method == "kangaroo":
        return (yield from _kangaroo_steps(p, t, k))
    if method == "filter":
        return (yield from _filter_steps(p, t, k, counters))
    raise ValueError(f"unknown method {method!r}")


def occ_k(P, T, k: int, *, method: str = "auto", counters: Counters | None = None) -> OccurrenceSet:
    """All positions with at most ``k`` mismatches, with exact distances."""
    return drain(occ_k_steps(P, T, k, method=method, counters=counters))[0]


def compact(occ: OccurrenceSet) -> ProgressionSet:
    """Greedy maximal progressions sharing the minimal gap as their difference."""
    pos = occ.positions
    q = min((b - a for a, b in zip(pos, pos[1:])), default=1)
    dist = occ.as_dict()
    used = set()
    out = []
    for i in pos:
        if i in used:
            continue
        d = dist[i]
        c = 1
        while dist.get(i + c * q) == d and (i + c * q) not in used:
            used.add(i + c * q)
            c += 1
        used.add(i)
        out.append(Progression(i, q, c, d))
    return ProgressionSet(tuple(out), q, occ.threshold)


# -- periodicity ----------------------------------------------------------------

def is_primitive(Q: Sequence[int]) -> bool:
    """True iff Q is not a proper power; Q occurs in QQ only at 0 and |Q| iff primitive."""
    q = list(Q)
    n = len(q)
    if n == 0:
        raise ValueError("empty string")
    qq = q + q
    return not any(qq[i:i + n] == q for i in range(1, n))


def _find_period_steps(P: np.ndarray, k: int, max_len: int | None = None) -> Steps:
    m = len(P)
    if max_len is None:
        max_len = m // (PERIOD_FACTOR * k)
    for q in range(1, max_len + 1):
        Q = []
        for r in range(q):
            counts = np.bincount(P[r::q])
            Q.append(int(np.argmax(counts)))
        yield m
        ext = np.resize(np.asarray(Q, dtype=np.int64), m)
        if int(np.count_nonzero(P != ext)) < 2 * k:
            # a smaller majority string would have verified first if Q were a power
            assert is_primitive(Q), f"first accepted majority string {Q} is not primitive"
            return tuple(Q)
    return None


def find_period(P, k: int, max_len: int | None = None) -> tuple[int, ...] | None:
    """Shortest per-residue majority string Q with HD(P, Q*) < 2k, or None."""
    arr = P.array() if isinstance(P, Fragment) else np.asarray(P, dtype=np.int64)
    _check_k(k, len(arr))
    return drain(_find_period_steps(arr, k, max_len))[0]


def analysis_windows(n: int, m: int) -> list[tuple[int, int]]:
    """One or two overlapping windows of length <= ceil(3m/2) covering every alignment."""
    w = min(n, -(-3 * m // 2))
    if w >= n:
        return [(0, n)]
    return [(0, w), (n - w, n)]


def window_for(i: int, windows: list[tuple[int, int]], m: int) -> int:
    for idx, (a, b) in enumerate(windows):
        if a <= i and i + m <= b:
            return idx
    raise AssertionError(f"alignment {i} not covered by {windows}")


def analyze_steps(P, T, k: int, *, occ_factor: int = OCC_FACTOR, period_factor: int = PERIOD_FACTOR,
                  method: str = "auto", counters: Counters | None = None, strict: bool = True) -> Steps:
    p, t = _as_fragments(P, T, counters)
    m = len(p)
    _check_k(k, m)
    occ = yield from occ_k_steps(p, t, k, method=method, counters=counters)
    if len(occ) <= occ_factor * k:
        return Explicit(occ)
    parr = p.array()
    Q = yield from _find_period_steps(parr, k, m // (period_factor * k))
    if Q is None:
        if not strict:
            return Explicit(occ)
        raise StructureNotFound(f"{len(occ)} occurrences at k={k} but no period of length <= {m // (period_factor * k)}")
    q = len(Q)
    pos = occ.positions
    start, end = pos[0], pos[-1] + m
    tarr = t.array()[start:end]
    mp = mismatches_vs_period(parr, Q)
    mt = mismatches_vs_period(tarr, Q)
    yield m + (end - start)
    problems = []
    if q > m / (period_factor * k):
        problems.append(f"|Q|={q} > m/({period_factor}k)")
    if len(mp) >= 2 * k:
        problems.append(f"HD(P,Q*)={len(mp)} >= 2k")
    if len(mt) >= 6 * k:
        problems.append(f"HD(T',Q*)={len(mt)} >= 6k")
    if not is_primitive(Q):
        problems.append("Q not primitive")
    if any((i - start) % q for i in pos):
        problems.append("occurrence in T' not a multiple of |Q|")
    if problems:
        if not strict:
            return Explicit(occ)
        raise StructureNotFound("; ".join(problems))
    return Periodic(start, end, Q, tuple(mp), tuple(mt), occ)


def analyze(P, T, k: int, *, occ_factor: int = OCC_FACTOR, period_factor: int = PERIOD_FACTOR,
            method: str = "auto", counters: Counters | None = None) -> AnalysisResult:
    """Few occurrences explicitly, or the periodic structure behind many of them."""
    p, t = _as_fragments(P, T, counters)
    if 2 * len(t) > 3 * len(p) + 1:
        raise ValueError(f"analysis window of length {len(t)} exceeds ceil(3m/2) for m={len(p)}")
    return drain(analyze_steps(p, t, k, occ_factor=occ_factor, period_factor=period_factor,
                               method=method, counters=counters))[0]
