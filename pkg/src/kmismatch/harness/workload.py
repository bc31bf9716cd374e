"""Instance configuration, workloads and their generators.

A workload file is JSON lines: one header record, then one record per op.
Characters are decimal code points and an infinite answer is the string
``"inf"``, so files diff cleanly and replay without the generator's seed.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..core import INF, PATTERN, TEXT, Answer, normalize_target
from ..errors import BadK, NonPrimitiveQ, PreconditionViolation, UniverseTooLarge
from ..static import is_primitive
from .facade import STRUCTURES


@dataclass(frozen=True)
class InstanceConfig:
    n: int
    m: int
    k: int
    sigma: int = 2
    structure: str = "kangaroo"
    x: int = 1
    seed: int = 0
    verify: bool = False
    deamortize: bool = False
    direct: bool = False  # forbid block decomposition, i.e. require n <= 2m

    def __post_init__(self):
        if not 1 <= self.m <= self.n:
            raise PreconditionViolation(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.direct and self.n > 2 * self.m:
            raise PreconditionViolation(f"direct instance needs n <= 2m, got m={self.m}, n={self.n}")
        if not 1 <= self.k <= self.m:
            raise BadK(f"k={self.k} outside [1..{self.m}]")
        if self.sigma < 1:
            raise ValueError("sigma must be positive")
        if self.structure not in STRUCTURES:
            raise ValueError(f"unknown structure {self.structure!r}")
        if self.structure == "tradeoff" and not 1 <= self.x <= self.k:
            raise ValueError(f"x={self.x} outside [1..{self.k}]")

    def with_(self, **changes) -> InstanceConfig:
        return replace(self, **changes)


@dataclass
class Op:
    kind: str  # "update" or "query"
    index: int
    target: str | None = None
    char: int | None = None
    expected: Answer | None = None

    def to_record(self) -> dict:
        if self.kind == "update":
            return {"record": "update", "target": self.target, "index": self.index, "char": self.char}
        rec = {"record": "query", "index": self.index}
        if self.expected is not None:
            rec["expected"] = "inf" if self.expected == INF else self.expected
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> Op:
        if rec["record"] == "update":
            return cls("update", int(rec["index"]), normalize_target(rec["target"]), int(rec["char"]))
        if rec["record"] == "query":
            exp = rec.get("expected")
            if exp is not None:
                exp = INF if exp == "inf" else int(exp)
            return cls("query", int(rec["index"]), expected=exp)
        raise ValueError(f"unknown record type {rec['record']!r}")


def update(target: str, index: int, char: int) -> Op:
    return Op("update", index, normalize_target(target), char)


def query(index: int, expected: Answer | None = None) -> Op:
    return Op("query", index, expected=expected)


@dataclass
class Workload:
    config: InstanceConfig
    pattern: list[int]
    text: list[int]
    ops: list[Op]
    meta: dict = field(default_factory=dict)

    @property
    def updates(self) -> int:
        return sum(op.kind == "update" for op in self.ops)

    @property
    def queries(self) -> int:
        return len(self.ops) - self.updates

    def to_lines(self) -> Iterable[str]:
        header = {"record": "header", "config": asdict(self.config),
                  "pattern": self.pattern, "text": self.text, "meta": self.meta}
        yield json.dumps(header, separators=(",", ":"), sort_keys=True)
        for op in self.ops:
            yield json.dumps(op.to_record(), separators=(",", ":"), sort_keys=True)

    def dumps(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, data: str) -> Workload:
        lines = [ln for ln in data.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty workload")
        head = json.loads(lines[0])
        if head.get("record") != "header":
            raise ValueError("first record must be the header")
        config = InstanceConfig(**head["config"])
        ops = [Op.from_record(json.loads(ln)) for ln in lines[1:]]
        return cls(config, list(head["pattern"]), list(head["text"]), ops, head.get("meta", {}))

    @classmethod
    def load(cls, path: str | Path) -> Workload:
        return cls.loads(Path(path).read_text())

    def annotated(self) -> Workload:
        """Copy whose queries carry the reference answers."""
        P = np.asarray(self.pattern, dtype=np.int64)
        T = np.asarray(self.text, dtype=np.int64)
        m, k = len(P), self.config.k
        ops = []
        for op in self.ops:
            if op.kind == "update":
                (P if op.target == PATTERN else T)[op.index] = op.char
                ops.append(op)
            else:
                d = int(np.count_nonzero(P != T[op.index:op.index + m]))
                ops.append(query(op.index, d if d <= k else INF))
        return Workload(self.config, list(self.pattern), list(self.text), ops, dict(self.meta))


def default_k(m: int) -> int:
    """ceil(sqrt(m))."""
    return math.isqrt(m - 1) + 1


def _random_ops(rng: random.Random, n: int, m: int, sigma: int, op_count: int,
                query_ratio: float) -> list[Op]:
    ops = []
    for _ in range(op_count):
        if rng.random() < query_ratio:
            ops.append(query(rng.randrange(n - m + 1)))
        elif rng.random() < 0.5:
            ops.append(update(PATTERN, rng.randrange(m), rng.randrange(sigma)))
        else:
            ops.append(update(TEXT, rng.randrange(n), rng.randrange(sigma)))
    return ops


def gen_random(n: int, m: int, sigma: int, seed: int, op_count: int, query_ratio: float = 0.5,
               *, k: int | None = None, **config) -> Workload:
    """Uniform characters and a uniform update/query mix."""
    cfg = InstanceConfig(n, m, default_k(m) if k is None else k, sigma, seed=seed, **config)
    rng = random.Random(seed)
    P = [rng.randrange(sigma) for _ in range(m)]
    T = [rng.randrange(sigma) for _ in range(n)]
    return Workload(cfg, P, T, _random_ops(rng, n, m, sigma, op_count, query_ratio))


def _plant(rng: random.Random, s: list[int], errors: int, sigma: int) -> list[int]:
    where = rng.sample(range(len(s)), min(errors, len(s)))
    for i in where:
        s[i] = rng.choice([c for c in range(sigma) if c != s[i]])
    return sorted(where)


def gen_periodic(Q: Sequence[int], copies: int, planted_errors: int, seed: int, *,
                 k: int | None = None, op_count: int = 0, query_ratio: float = 0.5,
                 sigma: int | None = None, **config) -> Workload:
    """P = Q^copies and T = Q^(2 copies), each with ``planted_errors`` substitutions."""
    if not Q:
        raise NonPrimitiveQ("Q must be non-empty")
    if not is_primitive(Q):
        raise NonPrimitiveQ(f"{list(Q)} is a proper power")
    sigma = max(max(Q) + 2, 2) if sigma is None else sigma
    rng = random.Random(seed)
    P = list(Q) * copies
    T = list(Q) * (2 * copies)
    mp = _plant(rng, P, planted_errors, sigma)
    mt = _plant(rng, T, planted_errors, sigma)
    m, n = len(P), len(T)
    k = max(1, planted_errors) if k is None else k
    cfg = InstanceConfig(n, m, min(k, m), sigma, seed=seed, **config)
    ops = _random_ops(rng, n, m, sigma, op_count, query_ratio)
    return Workload(cfg, P, T, ops, {"Q": list(Q), "planted_pattern": mp, "planted_text": mt})


def gen_threesum(A: Iterable[int], B: Iterable[int], C: Iterable[int], N: int, *,
                 m: int | None = None, **config) -> Workload:
    """Gadget instance: a query at c+N drops below the trivial bound iff a+b+c=0 is solvable."""
    A, B, C = sorted(set(A)), sorted(set(B)), sorted(set(C))
    for name, S in (("A", A), ("B", B), ("C", C)):
        if any(not -N <= v < N for v in S):
            raise ValueError(f"{name} not inside [-{N}..{N})")
    k = max(1, len(A) + len(B))
    if m is None:
        m = max(2 * N, k, 1)
    if m < 2 * N:
        raise UniverseTooLarge(f"m={m} < 2N={2 * N}")
    n = 2 * m
    cfg = InstanceConfig(n, m, k, 2, **config)
    ops = [update(PATTERN, a + N, 1) for a in A]
    ops += [update(TEXT, 2 * N - b, 1) for b in B]
    ops += [query(c + N) for c in C]
    return Workload(cfg, [0] * m, [0] * n, ops, {"A": A, "B": B, "C": C, "N": N})


def threesum_reported(workload: Workload, answers: Sequence[Answer]) -> list[int]:
    """Decode the C values whose query shows a distance drop."""
    meta = workload.meta
    A, B, C, N = meta["A"], meta["B"], meta["C"], meta["N"]
    m = workload.config.m
    ones_T = {2 * N - b for b in B}
    qs = [a for op, a in zip(workload.ops, answers) if op.kind == "query"]
    out = []
    for c, ans in zip(C, qs):
        lo = c + N
        bound = len(A) + sum(1 for t in ones_T if lo <= t < lo + m)
        if ans < bound:
            out.append(c)
    return out


def threesum_solutions(A: Iterable[int], B: Iterable[int], C: Iterable[int]) -> list[int]:
    sums = {a + b for a in A for b in B}
    return sorted(c for c in set(C) if -c in sums)


def gen_omv(M: Sequence[Sequence[int]], vectors: Sequence[Sequence[int]], **config) -> Workload:
    """Gadget instance: row i of Mv is 1 iff the query at i*m answers below 2q."""
    p, q = len(M), len(M[0])
    m, n = 3 * q, 3 * p * q
    text = []
    for i in range(p):
        for j in range(q):
            text += [1, 1, 1] if M[i][j] else [1, 0, 0]
    cfg = InstanceConfig(n, m, 2 * q, 2, **config)
    ops = []
    for v in vectors:
        if len(v) != q:
            raise ValueError(f"vector of length {len(v)}, expected {q}")
        for j in range(q):
            block = (1, 1, 1) if v[j] else (0, 0, 1)
            ops += [update(PATTERN, 3 * j + t, block[t]) for t in range(3)]
        ops += [query(i * m) for i in range(p)]
    return Workload(cfg, [0] * m, text, ops, {"p": p, "q": q})


def omv_reported(workload: Workload, answers: Sequence[Answer]) -> list[list[int]]:
    """Per vector, the 0/1 row indicators decoded from the query answers."""
    p, q = workload.meta["p"], workload.meta["q"]
    qs = [a for op, a in zip(workload.ops, answers) if op.kind == "query"]
    return [[int(a < 2 * q) for a in qs[v * p:(v + 1) * p]] for v in range(len(qs) // p)]
