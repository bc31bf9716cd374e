"""Update/query trade-off structure.

Each epoch of k updates starts from O = Occ_2k(P, T). With few candidates
(|O| <= n/k) their distances are maintained explicitly. Otherwise the closest
pair of candidates gives a shift rho that is an approximate period of P and
of T' = T[min O .. m + max O), so the per-letter backward differences

    dT_c = Delta_rho[T'_c]        dP_c = Delta_rho[(P^R)_c]

are sparse, and so is their sum of convolutions D, which equals the second
difference of the cross-correlation T' (x) P. The correlation itself is
recovered from D by weighted prefix sums within one residue class mod rho:

    [T' (x) P](i) = (i//rho + 1) * S1(i) - S2(i)
    S1(i) = sum of D(i') over i' <= i, i' = i mod rho
    S2(i) = same sum weighted by i'//rho

Updates adjust the factors at once but the convolutions only every x updates
(a flush). At a flush, letters whose factor weight or pending update count
reached t = ceil(sqrt(nk/x)) are recomputed from scratch; all other letters
replay their buffered point changes one by one against the opposite factor.
Queries read the snapshot distance and correct it with the buffered records.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import INF, Answer, PATTERN, thresholded
from .counters import Counters
from .epoch import ExplicitDistances
from .errors import EpochExhausted
from .rebuild import LazyRebuilder, RebuildingStructure
from .static import Steps, fill_steps, occ_k_steps
from .strings import StringPair


@dataclass(frozen=True)
class TradeoffConfig:
    x: int
    t: int

    @classmethod
    def for_instance(cls, n: int, k: int, x: int) -> TradeoffConfig:
        if not 1 <= x <= k:
            raise ValueError(f"x={x} outside [1..{k}]")
        # smallest t with t*t >= n*k/x
        t = math.isqrt(-(-n * k // x))
        while t * t * x < n * k:
            t += 1
        return cls(x, max(1, t))


@dataclass
class UpdateRecord:
    target: str
    index: int
    snapshot_char: int
    current_char: int
    seq: int


def convolve(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, int]:
    """Exact integer convolution; returns (result, work) using the cheaper route.

    Direct support-pair multiplication costs |supp a| * |supp b|; the transform
    route costs N log2 N for the padded length N.
    """
    out_len = len(a) + len(b) - 1
    ia, ib = np.flatnonzero(a), np.flatnonzero(b)
    pairs = len(ia) * len(ib)
    N = 1 << max(1, (out_len - 1).bit_length())
    fft_cost = N * N.bit_length()
    out = np.zeros(out_len, dtype=np.int64)
    if pairs == 0:
        return out, 0
    if pairs <= fft_cost:
        np.add.at(out, (ia[:, None] + ib[None, :]).ravel(), (a[ia][:, None] * b[ib][None, :]).ravel())
        return out, pairs
    fa = np.fft.rfft(a.astype(np.float64), N)
    fb = np.fft.rfft(b.astype(np.float64), N)
    out[:] = np.rint(np.fft.irfft(fa * fb, N)[:out_len]).astype(np.int64)
    return out, fft_cost


def delta_rho(indicator: np.ndarray, rho: int) -> np.ndarray:
    out = np.zeros(len(indicator) + rho, dtype=np.int64)
    out[:len(indicator)] += indicator
    out[rho:] -= indicator
    return out


class _Letter:
    __slots__ = ("dT", "dP", "C", "wT", "wP")

    def __init__(self, dT: np.ndarray, dP: np.ndarray, C: np.ndarray):
        self.dT, self.dP, self.C = dT, dP, C
        self.wT = int(np.count_nonzero(dT))
        self.wP = int(np.count_nonzero(dP))

    @property
    def weight(self) -> int:
        return self.wT + self.wP


class ConvState:
    """Conv-mode epoch state for T' = T[ell..r) with shift rho."""

    def __init__(self, strings: StringPair, k: int, ell: int, r: int, rho: int,
                 config: TradeoffConfig, counters: Counters, updates_left: int):
        self.strings = strings
        self.k = k
        self.m = len(strings.P)
        self.ell, self.r, self.rho = ell, r, rho
        self.config = config
        self.counters = counters
        self.updates_left = updates_left
        self.LT = r - ell
        self.span = self.LT + self.m + 2 * rho
        self.letters: dict[int, _Letter] = {}
        self.D = np.zeros(self.span, dtype=np.int64)
        self.cum1 = np.zeros(self.span, dtype=np.int64)
        self.cum2 = np.zeros(self.span, dtype=np.int64)
        self.buffer: dict[tuple[str, int], UpdateRecord] = {}
        self.pending: dict[int, int] = {}
        self.since_flush = 0
        self.seq = 0
        self.flushes = 0

    # -- construction --------------------------------------------------------

    def build_steps(self) -> Steps:
        T = self.strings.T.array[self.ell:self.r]
        PR = self.strings.P.array[::-1]
        for c in np.union1d(np.unique(T), np.unique(PR)).tolist():
            dT = delta_rho((T == c).astype(np.int64), self.rho)
            dP = delta_rho((PR == c).astype(np.int64), self.rho)
            C, work = self._full(dT, dP)
            self.letters[c] = _Letter(dT, dP, C)
            self.D += C
            self.counters.conv_point_mults += work
            yield 1 + work
        self._refresh_prefix(range(self.rho))
        yield self.span

    def _full(self, dT: np.ndarray, dP: np.ndarray) -> tuple[np.ndarray, int]:
        conv, work = convolve(dT, dP)
        C = np.zeros(self.span, dtype=np.int64)
        C[:len(conv)] = conv
        return C, work

    def _letter(self, c: int) -> _Letter:
        let = self.letters.get(c)
        if let is None:
            let = _Letter(np.zeros(self.LT + self.rho, dtype=np.int64),
                          np.zeros(self.m + self.rho, dtype=np.int64),
                          np.zeros(self.span, dtype=np.int64))
            self.letters[c] = let
        return let

    def _refresh_prefix(self, residues) -> None:
        rho = self.rho
        for r0 in residues:
            d = self.D[r0::rho]
            self.cum1[r0::rho] = np.cumsum(d)
            self.cum2[r0::rho] = np.cumsum(np.arange(len(d), dtype=np.int64) * d)

    # -- factor maintenance --------------------------------------------------

    def _point(self, target: str, i: int) -> int:
        """Position in the factor domain touched by a substitution at i."""
        return i - self.ell if target != PATTERN else self.m - 1 - i

    def _shift_factor(self, let: _Letter, target: str, p: int, s: int) -> None:
        arr = let.dT if target != PATTERN else let.dP
        before = int(arr[p] != 0) + int(arr[p + self.rho] != 0)
        arr[p] += s
        arr[p + self.rho] -= s
        after = int(arr[p] != 0) + int(arr[p + self.rho] != 0)
        if target != PATTERN:
            let.wT += after - before
        else:
            let.wP += after - before

    def weights(self) -> dict[int, int]:
        return {c: let.weight for c, let in self.letters.items()}

    def total_weight(self) -> int:
        return sum(let.weight for let in self.letters.values())

    # -- epoch operations ----------------------------------------------------

    def apply_update(self, target: str, i: int, c: int) -> None:
        if self.updates_left <= 0:
            raise EpochExhausted("epoch budget used up; rebuild first")
        s = self.strings.get(target)
        old = s.chars[i]
        inside = target == PATTERN or self.ell <= i < self.r
        if old != c and inside:
            key = (target, i)
            rec = self.buffer.get(key)
            if rec is None:
                self.buffer[key] = UpdateRecord(target, i, old, c, self.seq)
            else:
                rec.current_char = c
            self.seq += 1
            self.pending[old] = self.pending.get(old, 0) + 1
            self.pending[c] = self.pending.get(c, 0) + 1
            p = self._point(target, i)
            self._shift_factor(self._letter(old), target, p, -1)
            self._shift_factor(self._letter(c), target, p, +1)
        self.strings.engine.substitute(s, i, c)
        self.updates_left -= 1
        self.since_flush += 1
        if self.since_flush >= self.config.x:
            self.flush()

    def flush(self) -> None:
        t = self.config.t
        records = list(self.buffer.values())
        dirty: set[int] = set()
        for c in sorted(self.pending):
            let = self.letters[c]
            if let.weight >= t or self.pending[c] >= t:
                C, work = self._full(let.dT, let.dP)
                diff = C - let.C
                self.D += diff
                let.C = C
                self.counters.heavy_letters += 1
                self.counters.conv_point_mults += work
                dirty.update(np.unique(np.flatnonzero(diff) % self.rho).tolist())
            else:
                self._replay_letter(c, let, records, dirty)
        self._refresh_prefix(sorted(dirty))
        self.buffer.clear()
        self.pending.clear()
        self.since_flush = 0
        self.flushes += 1

    def _record_deltas(self, c: int, records):
        for rec in records:
            s = (rec.current_char == c) - (rec.snapshot_char == c)
            if s:
                yield rec.target, self._point(rec.target, rec.index), s

    def _replay_letter(self, c: int, let: _Letter, records, dirty: set[int]) -> None:
        deltas = list(self._record_deltas(c, records))
        for target, p, s in reversed(deltas):
            self._shift_factor(let, target, p, -s)
        rho = self.rho
        for target, p, s in deltas:
            other = let.dP if target != PATTERN else let.dT
            idx = np.flatnonzero(other)
            if len(idx):
                vals = s * other[idx]
                let.C[p + idx] += vals
                let.C[p + rho + idx] -= vals
                self.D[p + idx] += vals
                self.D[p + rho + idx] -= vals
                dirty.update(np.unique((p + idx) % rho).tolist())
                self.counters.conv_point_mults += 2 * len(idx)
            self._shift_factor(let, target, p, s)

    def reconstruct(self, i: int) -> int:
        """Snapshot value of [T' (x) P](i)."""
        if i < 0:
            return 0
        rho = self.rho
        at = i
        if at >= self.span:
            at -= ((at - self.span) // rho + 1) * rho
        self.counters.prefix_accesses += 2
        return int((i // rho + 1) * self.cum1[at] - self.cum2[at])

    def query(self, i: int) -> Answer:
        m = self.m
        if i < self.ell or i > self.r - m:
            return INF
        d = m - self.reconstruct(i - self.ell + m - 1)
        if self.buffer:
            buf = self.buffer
            self.counters.buffer_scans += len(buf)
            P, T = self.strings.P.chars, self.strings.T.chars
            touched = set()
            for target, idx in buf:
                j = idx if target == PATTERN else idx - i
                if 0 <= j < m:
                    touched.add(j)
            for j in touched:
                rp = buf.get((PATTERN, j))
                rt = buf.get(("T", i + j))
                ps = rp.snapshot_char if rp else P[j]
                ts = rt.snapshot_char if rt else T[i + j]
                d += (P[j] != T[i + j]) - (ps != ts)
        return thresholded(d, self.k)

    def snapshot_second_difference(self) -> np.ndarray:
        return self.D.copy()


class ExplicitState:
    def __init__(self, strings: StringPair, k: int, dists: dict[int, int],
                 counters: Counters, updates_left: int):
        self.strings = strings
        self.k = k
        self.rep = ExplicitDistances(strings, dists, counters)
        self.updates_left = updates_left

    def apply_update(self, target: str, i: int, c: int) -> None:
        if self.updates_left <= 0:
            raise EpochExhausted("epoch budget used up; rebuild first")
        s = self.strings.get(target)
        old = s.chars[i]
        if old != c:
            self.rep.on_update(target, i, old, c)
        self.strings.engine.substitute(s, i, c)
        self.updates_left -= 1

    def query(self, i: int) -> Answer:
        d = self.rep.get(i)
        return INF if d is None else thresholded(d, self.k)


def _shift_mismatches(X: np.ndarray, rho: int) -> int:
    return int(np.count_nonzero(X[rho:] != X[:len(X) - rho]))


def build_tradeoff_steps(strings: StringPair, k: int, threshold: int, config: TradeoffConfig,
                         updates_left: int, counters: Counters) -> Steps:
    P, T = strings.P, strings.T
    m, n = len(P), len(T)
    O = yield from occ_k_steps(P.fragment(), T.fragment(), threshold, counters=counters)
    if len(O) * k <= n:
        dists: dict[int, int] = {}
        yield from fill_steps(dists, O.entries)
        counters.set_ops += len(dists)
        return ExplicitState(strings, k, dists, counters, updates_left)
    pos = O.positions
    rho = min(b - a for a, b in zip(pos, pos[1:]))
    assert rho <= k, f"closest candidates {rho} apart with |O|={len(O)} > n/k"
    ell, r = pos[0], pos[-1] + m
    # two candidates rho apart make rho an approximate period of P and of T'
    assert _shift_mismatches(P.array, rho) <= 2 * threshold
    assert _shift_mismatches(T.array[ell:r], rho) <= 8 * threshold + rho
    state = ConvState(strings, k, ell, r, rho, config, counters, updates_left)
    yield from state.build_steps()
    return state


class TradeoffStructure(RebuildingStructure):
    def __init__(self, pattern, text, k, *, x: int = 1, **kw):
        self.config = TradeoffConfig.for_instance(len(text), k, x)
        super().__init__(pattern, text, k, **kw)

    @property
    def threshold(self) -> int:
        return min(self.m, self.k + self.epoch_length)

    def build_steps(self) -> Steps:
        return build_tradeoff_steps(self.strings, self.k, self.threshold, self.config,
                                    self.epoch_length, self.counters)


def tradeoff(pattern, text, k: int, *, x: int = 1, deamortize: bool = False,
             counters: Counters | None = None, verify: bool = False, seed: int | None = None):
    counters = counters if counters is not None else Counters()
    if deamortize and k >= 2:
        def factory(**kw):
            return TradeoffStructure(pattern, text, k, x=x, verify=verify, seed=seed, **kw)
        return LazyRebuilder(factory, k, counters)
    return TradeoffStructure(pattern, text, k, x=x, counters=counters, verify=verify, seed=seed,
                             epoch_length=1 if deamortize else None)
