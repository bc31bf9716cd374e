"""Brute-force reference implementations.

Everything here is a direct transcription of a definition: nested loops, no
indexing structures, no shortcuts. These functions are the ground truth for
the property and differential tests and must stay obviously correct.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import INF, Answer, PATTERN, normalize_target
from .errors import EmptyQ, LengthMismatch
from .static import OccurrenceSet


def hd(a: Sequence, b: Sequence) -> int:
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} != {len(b)}")
    return sum(1 for x, y in zip(a, b) if x != y)


def query_naive(P: Sequence, T: Sequence, k: int, i: int) -> Answer:
    m = len(P)
    if not 0 <= i <= len(T) - m:
        raise IndexError(i)
    d = hd(P, T[i:i + m])
    return d if d <= k else INF


def occ_k_naive(P: Sequence, T: Sequence, k: int) -> OccurrenceSet:
    m = len(P)
    entries = []
    for i in range(len(T) - m + 1):
        d = hd(P, T[i:i + m])
        if d <= k:
            entries.append((i, d))
    return OccurrenceSet(tuple(entries), k)


def cross_corr_naive(T: Sequence, P: Sequence) -> list[int]:
    """[T (x) P](i) for i in [0, |T|+|P|); zero outside that range."""
    n, m = len(T), len(P)
    out = [0] * (n + m)
    for a in range(n):
        for b in range(m):
            if T[a] == P[b]:
                out[a + m - 1 - b] += 1
    return out


def mismatches_vs_qstar(S: Sequence, Q: Sequence) -> list[int]:
    if len(Q) == 0:
        raise EmptyQ("Q must be non-empty")
    return [i for i in range(len(S)) if S[i] != Q[i % len(Q)]]


def second_difference_naive(f: dict[int, int] | Sequence[int], rho: int) -> dict[int, int]:
    """Delta_rho applied twice to a finitely supported function, as a sparse dict."""
    g = dict(enumerate(f)) if not isinstance(f, dict) else dict(f)

    def delta(h):
        out = {}
        for i in set(h) | {i + rho for i in h}:
            v = h.get(i, 0) - h.get(i - rho, 0)
            if v:
                out[i] = v
        return out

    return delta(delta(g))


class NaiveStructure:
    """Reference array with linear-time queries."""

    def __init__(self, pattern: Sequence[int], text: Sequence[int], k: int):
        self.P = list(pattern)
        self.T = list(text)
        self.k = k

    def update(self, target: str, i: int, c: int) -> None:
        s = self.P if normalize_target(target) == PATTERN else self.T
        if not 0 <= i < len(s):
            raise IndexError(i)
        s[i] = c

    def query(self, i: int) -> Answer:
        return query_naive(self.P, self.T, self.k, i)


@dataclass
class DiffReport:
    ok: bool
    ops: int
    op_index: int | None = None
    got: Answer | None = None
    expected: Answer | None = None


def differential_run(workload, structure) -> DiffReport:
    """Replay ``workload`` on ``structure`` and on a reference array in lockstep.

    ``structure`` must already hold the workload's initial pattern and text.
    """
    ref = NaiveStructure(workload.pattern, workload.text, workload.config.k)
    for idx, op in enumerate(workload.ops):
        if op.kind == "update":
            ref.update(op.target, op.index, op.char)
            structure.update(op.target, op.index, op.char)
        else:
            want = ref.query(op.index)
            got = structure.query(op.index)
            if got != want:
                return DiffReport(False, idx + 1, idx, got, want)
    return DiffReport(True, len(workload.ops))
