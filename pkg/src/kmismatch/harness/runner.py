"""Replay workloads, optionally in lockstep with the oracle, and report counters."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..core import Answer
from ..counters import Counters
from ..errors import DivergenceDetected
from ..oracle import NaiveStructure
from .facade import DynamicKMismatch
from .workload import InstanceConfig, Workload

CSV_COLUMNS = ["structure", "n", "m", "k", "x", "op_index_max", *Counters.names(), "wall_ms"]


@dataclass
class RunResult:
    config: InstanceConfig
    counters: Counters
    answers: list[Answer | None]
    build: Counters
    per_op_max: Counters
    op_index_max: int | None
    wall_ms: float
    per_op: list[Counters] | None = field(default=None, repr=False)

    def csv_row(self) -> dict:
        c = self.config
        row = {"structure": c.structure, "n": c.n, "m": c.m, "k": c.k,
               "x": c.x if c.structure == "tradeoff" else "",
               "op_index_max": "" if self.op_index_max is None else self.op_index_max}
        row.update(self.counters.as_dict())
        row["wall_ms"] = f"{self.wall_ms:.1f}"
        return row


def build(workload: Workload, config: InstanceConfig | None = None,
          counters: Counters | None = None) -> DynamicKMismatch:
    c = config or workload.config
    return DynamicKMismatch(workload.pattern, workload.text, c.k, structure=c.structure, x=c.x,
                            deamortize=c.deamortize, counters=counters, seed=c.seed)


def run(workload: Workload, config: InstanceConfig | None = None, *, structure=None,
        keep_per_op: bool = False, track: bool = True) -> RunResult:
    """Execute ``workload``; with ``config.verify`` every query is checked as it is answered.

    Reference answers come from the workload when annotated, otherwise from a
    brute-force array updated alongside. ``structure`` substitutes a prebuilt
    object (used for fault injection). ``track=False`` skips the per-op
    counter bookkeeping, leaving ``per_op_max`` empty.
    """
    config = config or workload.config
    if config.k != workload.config.k or config.n != len(workload.text) or config.m != len(workload.pattern):
        raise ValueError("config does not match the workload instance")
    counters = Counters() if structure is None else getattr(structure, "counters", Counters())
    t0 = time.perf_counter()
    ds = build(workload, config, counters) if structure is None else structure
    built = counters.copy()
    ref = None
    if config.verify and any(op.kind == "query" and op.expected is None for op in workload.ops):
        ref = NaiveStructure(workload.pattern, workload.text, config.k)
    answers: list[Answer | None] = []
    per_op = [] if keep_per_op else None
    peak = Counters()
    peak_total, peak_index = -1, None
    before = counters.copy()
    for idx, op in enumerate(workload.ops):
        if op.kind == "update":
            ds.update(op.target, op.index, op.char)
            if ref is not None:
                ref.update(op.target, op.index, op.char)
            answers.append(None)
        else:
            got = ds.query(op.index)
            answers.append(got)
            if config.verify:
                want = op.expected if op.expected is not None else ref.query(op.index)
                if got != want:
                    raise DivergenceDetected(idx, got, want)
        if not track:
            continue
        after = counters.copy()
        delta = after - before
        before = after
        for name in Counters.names():
            v = getattr(delta, name)
            if v > getattr(peak, name):
                setattr(peak, name, v)
        tot = delta.total()
        if tot > peak_total:
            peak_total, peak_index = tot, idx
        if per_op is not None:
            per_op.append(delta)
    wall = (time.perf_counter() - t0) * 1000
    return RunResult(config, counters.copy(), answers, built, peak, peak_index, wall, per_op)


def sweep(workload: Workload, config: InstanceConfig, x_values: Iterable[int]) -> list[RunResult]:
    """Rerun the same workload on the trade-off structure once per x."""
    return [run(workload, config.with_(structure="tradeoff", x=x)) for x in x_values]


def to_csv(results: Sequence[RunResult], *, with_wall: bool = True) -> str:
    cols = CSV_COLUMNS if with_wall else CSV_COLUMNS[:-1]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(r.csv_row())
    return buf.getvalue()


def update_split(result: RunResult, workload: Workload) -> tuple[Counters, Counters]:
    """Per-op counters summed over updates and over queries (needs ``keep_per_op``)."""
    if result.per_op is None:
        raise ValueError("run with keep_per_op=True")
    upd, qry = Counters(), Counters()
    for op, c in zip(workload.ops, result.per_op):
        if op.kind == "update":
            upd = upd + c
        else:
            qry = qry + c
    return upd, qry


__all__ = ["CSV_COLUMNS", "RunResult", "build", "run", "sweep", "to_csv", "update_split"]
