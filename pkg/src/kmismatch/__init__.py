"""Dynamic k-mismatch: fast-update, fast-query and trade-off structures.

Every structure keeps a pattern P and a text T under character substitutions
and answers ``query(i)`` with HD(P, T[i..i+m)) when it is at most k and with
``math.inf`` otherwise.
"""
from .core import INF, PATTERN, TEXT
from .counters import Counters
from .epoch import FastQueryStructure, fast_query
from .errors import (
    BadK,
    DivergenceDetected,
    EmptyQ,
    EpochExhausted,
    IndexOutOfRange,
    LengthMismatch,
    NonPrimitiveQ,
    PreconditionViolation,
    StructureNotFound,
    UniverseTooLarge,
)
from .harness import DynamicKMismatch, InstanceConfig, Workload, run
from .kangaroo import KangarooStructure
from .oracle import NaiveStructure
from .static import analyze, compact, find_period, occ_k
from .strings import StringEngine
from .tradeoff import TradeoffStructure, tradeoff

__version__ = "0.1.0"

__all__ = [
    "INF", "PATTERN", "TEXT", "Counters", "FastQueryStructure", "fast_query", "BadK",
    "DivergenceDetected", "EmptyQ", "EpochExhausted", "IndexOutOfRange", "LengthMismatch",
    "NonPrimitiveQ", "PreconditionViolation", "StructureNotFound", "UniverseTooLarge",
    "DynamicKMismatch", "InstanceConfig", "Workload", "run", "KangarooStructure", "NaiveStructure",
    "analyze", "compact", "find_period", "occ_k", "StringEngine", "TradeoffStructure", "tradeoff",
]
