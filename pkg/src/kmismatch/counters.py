"""Deterministic work counters.

Every structure takes an optional :class:`Counters` and bumps the fields that
correspond to the elementary operations it performs. Counters never depend on
timing, so two runs of the same workload produce identical values.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields


@dataclass
class Counters:
    lcp_calls: int = 0
    char_comparisons: int = 0
    set_ops: int = 0
    conv_point_mults: int = 0
    prefix_accesses: int = 0
    rebuild_steps: int = 0
    heavy_letters: int = 0
    buffer_scans: int = 0

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def copy(self) -> Counters:
        return Counters(**asdict(self))

    def as_dict(self) -> dict[str, int]:
        return asdict(self)

    def __sub__(self, other: Counters) -> Counters:
        return Counters(**{n: getattr(self, n) - getattr(other, n) for n in self.names()})

    def __add__(self, other: Counters) -> Counters:
        return Counters(**{n: getattr(self, n) + getattr(other, n) for n in self.names()})

    def total(self) -> int:
        return sum(asdict(self).values())
