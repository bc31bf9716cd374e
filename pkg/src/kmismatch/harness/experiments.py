"""Experiment drivers shared by the scripts and the acceptance suite."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator

from ..core import PATTERN, TEXT
from ..errors import DivergenceDetected
from .runner import run
from .workload import Op, Workload, default_k, gen_periodic, gen_random, query, update

# -- differential grid --------------------------------------------------------

GRID_N = (64, 256, 1024, 2048)
GRID_SIGMA = (2, 4, 26)
GRID_K = ("1", "sqrt", "m")


@dataclass(frozen=True)
class GridCase:
    index: int
    n: int
    m: int
    sigma: int
    k: int
    seed: int


def grid_cases(count: int = 200, ops: int = 2000, base_seed: int = 1000) -> Iterator[tuple[GridCase, Workload]]:
    """Seeded random workloads cycling through every (n, sigma, k-regime) combination."""
    combos = list(itertools.product(GRID_N, GRID_SIGMA, GRID_K))
    for w in range(count):
        n, sigma, regime = combos[w % len(combos)]
        seed = base_seed + w
        m = random.Random(seed).randint((n + 1) // 2, n)
        k = {"1": 1, "sqrt": default_k(m), "m": m}[regime]
        wl = gen_random(n, m, sigma, seed, ops, 0.5, k=k).annotated()
        yield GridCase(w, n, m, sigma, k, seed), wl


def structure_variants(k: int) -> list[tuple[str, dict]]:
    xs = sorted({1, default_k(k), k})
    return ([("kangaroo", {}), ("fastq", {}), ("fastq", {"deamortize": True})]
            + [("tradeoff", {"x": x}) for x in xs])


@dataclass
class GridOutcome:
    workloads: int = 0
    runs: int = 0
    queries_checked: int = 0
    failures: list = field(default_factory=list)


def differential_grid(count: int = 200, ops: int = 2000) -> GridOutcome:
    """Every structure variant against the reference answers; divergences are collected."""
    out = GridOutcome()
    for case, wl in grid_cases(count, ops):
        out.workloads += 1
        for name, kw in structure_variants(case.k):
            cfg = wl.config.with_(structure=name, verify=True, **kw)
            try:
                run(wl, cfg, track=False)
            except DivergenceDetected as err:
                out.failures.append((case, name, kw, err.op_index, err.got, err.expected))
            out.runs += 1
            out.queries_checked += wl.queries
    return out


# -- deamortization -----------------------------------------------------------

@dataclass
class SmoothnessReport:
    epoch_total: float        # mean amortized rebuild work per epoch
    amortized_mean: float     # epoch_total / k
    deamortized_max: int      # largest rebuild work charged to one update
    ratio: float


def smoothness(wl: Workload, epochs: int) -> SmoothnessReport:
    """Compare per-update rebuild work of the two-instance scheme with the amortized mean."""
    k = wl.config.k
    a = run(wl, wl.config.with_(structure="fastq", deamortize=False), keep_per_op=True)
    d = run(wl, wl.config.with_(structure="fastq", deamortize=True), keep_per_op=True)
    total = a.build.rebuild_steps + sum(c.rebuild_steps for c in a.per_op)
    epoch_total = total / epochs
    mean = epoch_total / k
    dmax = max(c.rebuild_steps for c in d.per_op)
    return SmoothnessReport(epoch_total, mean, dmax, dmax / mean)


def smoothness_workloads(n: int = 4096, k: int = 64, epochs: int = 10) -> list[tuple[str, Workload]]:
    """Update-only streams of exactly ``epochs`` epochs: random and planted-periodic."""
    ops = k * (epochs - 1)  # the initial build is the first epoch's rebuild
    m = n // 2
    out = [(f"random sigma={s}", gen_random(n, m, s, 70 + s, ops, 0.0, k=k)) for s in (2, 4, 26)]
    for Q in ((0, 1), (0, 0, 1), (0, 1, 2, 3)):
        out.append((f"periodic Q={''.join(map(str, Q))}",
                    gen_periodic(Q, m // len(Q), k // 4, 7, k=k, op_count=ops, query_ratio=0.0)))
    return out


# -- trade-off sweep ------------------------------------------------------------

SWEEP_X = (1, 4, 16, 64, 256, 1024)


@dataclass
class SweepPoint:
    x: int
    updates: int
    queries: int
    buffer_scans: int
    flush_work: int
    heavy_letters: int

    @property
    def scans_per_query(self) -> float:
        return self.buffer_scans / self.queries

    @property
    def flush_work_per_update(self) -> float:
        return self.flush_work / self.updates


def sweep_workload(n: int = 1 << 13, k: int = 1 << 10, seed: int = 5, errors: int = 64,
                   churn: bool = True) -> Workload:
    """One epoch of alternating updates and queries on a planted-periodic instance.

    P and T start as (01)* with ``errors`` planted substitutions each, so every
    even alignment is a candidate and the convolution branch is taken. With
    ``churn`` each update either repairs a live error or plants a new one, so
    the number of errors stays near its initial value; otherwise updates
    write random letters at random positions and the errors accumulate.
    Queries hit random alignments.
    """
    wl = gen_periodic((0, 1), n // 4, errors, seed, k=k, sigma=2)
    rng = random.Random(seed)
    m = len(wl.pattern)
    size = {PATTERN: m, TEXT: n}
    live = {PATTERN: set(wl.meta["planted_pattern"]), TEXT: set(wl.meta["planted_text"])}
    ops: list[Op] = []
    for _ in range(k):
        tg = rng.choice((PATTERN, TEXT))
        if not churn:
            ops.append(update(tg, rng.randrange(size[tg]), rng.randrange(2)))
        else:
            if live[tg] and rng.random() < 0.5:
                i = rng.choice(sorted(live[tg]))
            else:
                i = rng.randrange(size[tg])
            if i in live[tg]:
                live[tg].discard(i)
                ops.append(update(tg, i, i % 2))
            else:
                live[tg].add(i)
                ops.append(update(tg, i, 1 - i % 2))
        ops.append(query(rng.randrange(n - m + 1)))
    wl.ops = ops
    wl.meta["churn"] = churn
    return wl


def tradeoff_sweep(wl: Workload, xs=SWEEP_X) -> list[SweepPoint]:
    """Per x: buffer scans over queries and convolution work over non-rebuild updates."""
    points = []
    for x in xs:
        r = run(wl, wl.config.with_(structure="tradeoff", x=x), keep_per_op=True)
        upd = qry = scans = work = heavy = 0
        for op, c in zip(wl.ops, r.per_op):
            if op.kind == "query":
                qry += 1
                scans += c.buffer_scans
            elif c.rebuild_steps == 0:
                upd += 1
                work += c.conv_point_mults
                heavy += c.heavy_letters
        points.append(SweepPoint(x, upd, qry, scans, work, heavy))
    return points
