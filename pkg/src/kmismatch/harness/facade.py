"""One interface over every structure, with block routing for long texts.

Texts longer than 2m are split into overlapping blocks of length at most 2m
that start at multiples of m. Each alignment is owned by exactly one block,
pattern substitutions are sent to every block and text substitutions to the
one or two blocks covering the position.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..core import Answer, PATTERN, normalize_target
from ..counters import Counters
from ..epoch import fast_query
from ..errors import IndexOutOfRange, PreconditionViolation
from ..kangaroo import KangarooStructure
from ..oracle import NaiveStructure
from ..tradeoff import tradeoff

STRUCTURES = ("kangaroo", "fastq", "tradeoff", "oracle")


@dataclass(frozen=True)
class Block:
    start: int
    end: int
    query_lo: int
    query_hi: int  # inclusive

    def owns(self, i: int) -> bool:
        return self.query_lo <= i <= self.query_hi


def decompose_long_text(n: int, m: int) -> list[Block]:
    """Blocks of length <= 2m at offsets 0, m, 2m, ...; query ranges partition [0..n-m]."""
    if not 1 <= m <= n:
        raise PreconditionViolation(f"need 1 <= m <= n, got m={m}, n={n}")
    nb = max(1, -(-(n - m) // m))
    blocks = []
    for b in range(nb):
        start = b * m
        end = min(start + 2 * m, n)
        hi = n - m if b == nb - 1 else start + m - 1
        blocks.append(Block(start, end, start, hi))
    return blocks


def designated_block(i: int, n: int, m: int) -> int:
    nb = max(1, -(-(n - m) // m))
    return min(i // m, nb - 1)


def make_structure(structure: str, pattern: Sequence[int], text: Sequence[int], k: int, *,
                   x: int = 1, deamortize: bool = False, counters: Counters | None = None,
                   verify: bool = False, seed: int | None = None):
    """A single structure for m <= n <= 2m."""
    if structure == "kangaroo":
        return KangarooStructure(pattern, text, k, counters=counters, verify=verify, seed=seed)
    if structure == "fastq":
        return fast_query(pattern, text, k, deamortize=deamortize, counters=counters,
                          verify=verify, seed=seed)
    if structure == "tradeoff":
        return tradeoff(pattern, text, k, x=x, deamortize=deamortize, counters=counters,
                        verify=verify, seed=seed)
    if structure == "oracle":
        return NaiveStructure(pattern, text, k)
    raise ValueError(f"unknown structure {structure!r}; pick one of {', '.join(STRUCTURES)}")


class DynamicKMismatch:
    """``update(target, i, c)`` / ``query(i)`` for any text length n >= m."""

    def __init__(self, pattern: Sequence[int], text: Sequence[int], k: int, *,
                 structure: str = "kangaroo", x: int = 1, deamortize: bool = False,
                 counters: Counters | None = None, verify: bool = False, seed: int | None = None):
        self.m, self.n, self.k = len(pattern), len(text), k
        self.counters = counters if counters is not None else Counters()
        self.structure = structure
        self.blocks = decompose_long_text(self.n, self.m)
        self.parts = [
            make_structure(structure, pattern, text[b.start:b.end], k, x=x, deamortize=deamortize,
                           counters=self.counters, verify=verify, seed=seed)
            for b in self.blocks
        ]

    def update(self, target: str, i: int, c: int) -> None:
        target = normalize_target(target)
        if target == PATTERN:
            if not 0 <= i < self.m:
                raise IndexOutOfRange(f"update P[{i}] outside [0..{self.m})")
            for part in self.parts:
                part.update(PATTERN, i, c)
            return
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"update T[{i}] outside [0..{self.n})")
        for b, part in zip(self.blocks, self.parts):
            if b.start <= i < b.end:
                part.update(target, i - b.start, c)

    def query(self, i: int) -> Answer:
        if not 0 <= i <= self.n - self.m:
            raise IndexOutOfRange(f"query {i} outside [0..{self.n - self.m}]")
        b = designated_block(i, self.n, self.m)
        return self.parts[b].query(i - self.blocks[b].start)
