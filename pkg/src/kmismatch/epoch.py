"""Fast-query structure.

Every epoch starts with a static analysis at the doubled threshold. Positions
outside the resulting candidate set can be answered with infinity for the
rest of the epoch, because each update moves any distance by at most one.
Inside an analysis window the candidates are either kept explicitly with
their distances, or described through an approximate period Q of the
pattern:

    HD(P, T'[jq .. jq+m)) = |MP| + |MT in [jq, jq+m)| - mu_j

where MP and MT are the positions where P and T' disagree with Q repeated,
and mu_j corrects for pairs (rho, tau = jq + rho) that mismatch Q on both
sides: it adds 2 when P[rho] == T'[tau] and 1 otherwise.
"""
from __future__ import annotations

from typing import Sequence

from .core import INF, Answer, PATTERN, thresholded
from .counters import Counters
from .errors import EpochExhausted
from .rebuild import LazyRebuilder, RebuildingStructure
from .static import OCC_FACTOR, PERIOD_FACTOR, Explicit, Steps, analysis_windows, analyze_steps, fill_steps, window_for
from .strings import StringPair


class OrderedIndex:
    """Fenwick tree over a fixed universe [0, size): membership, rank, predecessor."""

    def __init__(self, size: int, counters: Counters | None = None):
        self.size = size
        self.tree = [0] * (size + 1)
        self.n = 0
        self.counters = counters

    def add(self, x: int, delta: int) -> None:
        self.n += delta
        tree = self.tree
        j = x + 1
        while j <= self.size:
            tree[j] += delta
            j += j & -j

    def rank(self, x: int) -> int:
        """Number of elements strictly below x."""
        if self.counters is not None:
            self.counters.prefix_accesses += 1
        x = min(max(x, 0), self.size)
        tree = self.tree
        s = 0
        while x > 0:
            s += tree[x]
            x &= x - 1
        return s

    def count(self, lo: int, hi: int) -> int:
        return self.rank(hi) - self.rank(lo)

    def kth(self, r: int) -> int:
        """Element of rank r (0-based)."""
        pos = 0
        step = 1 << self.size.bit_length()
        tree = self.tree
        while step:
            nxt = pos + step
            if nxt <= self.size and tree[nxt] <= r:
                pos = nxt
                r -= tree[nxt]
            step >>= 1
        return pos

    def predecessor(self, x: int) -> int | None:
        """Largest element <= x, or None."""
        r = self.rank(x + 1)
        return None if r == 0 else self.kth(r - 1)


class ExplicitDistances:
    """Distances of a fixed candidate set, kept current under substitutions."""

    def __init__(self, strings: StringPair, dists: dict[int, int], counters: Counters):
        self.strings = strings
        self.m = len(strings.P)
        self.dists = dists
        self.counters = counters

    def on_update(self, target: str, i: int, old: int, new: int) -> None:
        dists = self.dists
        if target == PATTERN:
            T = self.strings.T.chars
            for s in dists:
                t = T[s + i]
                dists[s] += (new != t) - (old != t)
            self.counters.char_comparisons += 2 * len(dists)
        else:
            P = self.strings.P.chars
            m = self.m
            touched = 0
            for s in dists:
                if s <= i < s + m:
                    p = P[i - s]
                    dists[s] += (new != p) - (old != p)
                    touched += 1
            self.counters.char_comparisons += 2 * touched

    def get(self, i: int) -> int | None:
        return self.dists.get(i)


class PeriodicRep:
    """Mismatch sets against Q* plus sparse mu corrections for T' = T[ell..r)."""

    def __init__(self, strings: StringPair, ell: int, r: int, Q: Sequence[int],
                 mp: Sequence[int], mt: Sequence[int], counters: Counters):
        self.strings = strings
        self.m = len(strings.P)
        self.ell, self.r = ell, r
        self.Q = tuple(Q)
        self.q = len(Q)
        self.J = (r - ell - self.m) // self.q
        self.counters = counters
        self.MP = set(mp)
        self.MT = set(mt)
        self.index = OrderedIndex(r - ell, counters)
        self.mu: dict[int, int] = {}

    def build_steps(self) -> Steps:
        for tau in self.MT:
            self.index.add(tau, 1)
        self.counters.set_ops += len(self.MP) + len(self.MT)
        yield len(self.MP) + len(self.MT)
        P, T, ell, q = self.strings.P.chars, self.strings.T.chars, self.ell, self.q
        by_residue: dict[int, list[int]] = {}
        for tau in self.MT:
            by_residue.setdefault(tau % q, []).append(tau)
        for rho in self.MP:
            taus = by_residue.get(rho % q, ())
            for tau in taus:
                j = (tau - rho) // q
                if 0 <= j <= self.J:
                    self._bump(j, 2 - (P[rho] != T[ell + tau]))
            yield 1 + len(taus)

    def _bump(self, j: int, delta: int) -> None:
        v = self.mu.get(j, 0) + delta
        if v:
            self.mu[j] = v
        else:
            del self.mu[j]

    def _pattern_pairs(self, rho: int, pc: int, sign: int) -> None:
        T, ell, q, J = self.strings.T.chars, self.ell, self.q, self.J
        for tau in self.MT:
            d = tau - rho
            if d % q == 0 and 0 <= d // q <= J:
                self._bump(d // q, sign * (2 - (pc != T[ell + tau])))
        self.counters.char_comparisons += len(self.MT)

    def _text_pairs(self, tau: int, tc: int, sign: int) -> None:
        P, q, J = self.strings.P.chars, self.q, self.J
        for rho in self.MP:
            d = tau - rho
            if d % q == 0 and 0 <= d // q <= J:
                self._bump(d // q, sign * (2 - (P[rho] != tc)))
        self.counters.char_comparisons += len(self.MP)

    def on_update(self, target: str, i: int, old: int, new: int) -> None:
        q, Q = self.q, self.Q
        if target == PATTERN:
            if i in self.MP:
                self._pattern_pairs(i, old, -1)
                self.MP.discard(i)
            if new != Q[i % q]:
                self.MP.add(i)
                self._pattern_pairs(i, new, +1)
            self.counters.set_ops += 1
            return
        if not self.ell <= i < self.r:
            return
        tau = i - self.ell
        if tau in self.MT:
            self._text_pairs(tau, old, -1)
            self.MT.discard(tau)
            self.index.add(tau, -1)
        if new != Q[tau % q]:
            self.MT.add(tau)
            self.index.add(tau, 1)
            self._text_pairs(tau, new, +1)
        self.counters.set_ops += 1

    def distance(self, j: int) -> int:
        lo = j * self.q
        return len(self.MP) + self.index.count(lo, lo + self.m) - self.mu.get(j, 0)

    def get(self, i: int) -> int | None:
        if i < self.ell or i > self.r - self.m or (i - self.ell) % self.q:
            return None
        return self.distance((i - self.ell) // self.q)

    def mu_brute_force(self, j: int) -> int:
        P, T, ell, q = self.strings.P.chars, self.strings.T.chars, self.ell, self.q
        total = 0
        for rho in range(self.m):
            tau = j * q + rho
            if P[rho] != self.Q[rho % q] and T[ell + tau] != self.Q[tau % q]:
                total += 2 - (P[rho] != T[ell + tau])
        return total


class EpochState:
    def __init__(self, strings: StringPair, k: int, windows: list[tuple[int, int]],
                 reps: list, updates_left: int):
        self.strings = strings
        self.k = k
        self.m = len(strings.P)
        self.windows = windows
        self.reps = reps
        self.updates_left = updates_left

    def apply_update(self, target: str, i: int, c: int) -> None:
        if self.updates_left <= 0:
            raise EpochExhausted("epoch budget used up; rebuild first")
        s = self.strings.get(target)
        old = s.chars[i]
        if old != c:
            for rep in self.reps:
                rep.on_update(target, i, old, c)
        self.strings.engine.substitute(s, i, c)
        self.updates_left -= 1

    def query(self, i: int) -> Answer:
        rep = self.reps[window_for(i, self.windows, self.m)]
        d = rep.get(i)
        return INF if d is None else thresholded(d, self.k)

    def periodic_reps(self) -> list[PeriodicRep]:
        return [r for r in self.reps if isinstance(r, PeriodicRep)]


def build_epoch_steps(strings: StringPair, k: int, threshold: int, updates_left: int,
                      occ_factor: int, counters: Counters, period_factor: int = PERIOD_FACTOR) -> Steps:
    m, n = len(strings.P), len(strings.T)
    windows = analysis_windows(n, m)
    reps = []
    pf = strings.P.fragment()
    # the existence guarantee only holds at the default cut-offs
    strict = occ_factor >= OCC_FACTOR and period_factor <= PERIOD_FACTOR
    for a, b in windows:
        res = yield from analyze_steps(pf, strings.T.fragment(a, b), threshold,
                                       occ_factor=occ_factor, period_factor=period_factor,
                                       counters=counters, strict=strict)
        if isinstance(res, Explicit):
            dists: dict[int, int] = {}
            yield from fill_steps(dists, [(a + i, d) for i, d in res.occurrences])
            counters.set_ops += len(dists)
            reps.append(ExplicitDistances(strings, dists, counters))
        else:
            rep = PeriodicRep(strings, a + res.start, a + res.end, res.period,
                              res.pattern_mismatches, res.text_mismatches, counters)
            yield from rep.build_steps()
            reps.append(rep)
    return EpochState(strings, k, windows, reps, updates_left)


class FastQueryStructure(RebuildingStructure):
    """Amortized variant: every ``epoch_length``-th update pays for a full rebuild.

    ``epoch_length=1`` gives the rebuild-after-every-update warm-up scheme.
    ``occ_factor`` (default 864) and ``period_factor`` (default 128) set the
    explicit/periodic cut-off |Occ| > occ_factor * k and the period length bound
    m / (period_factor * k). Lowering them exercises the periodic branch at small
    sizes; when a relaxed cut-off admits no verified period, the window falls
    back to explicit distances.
    """

    def __init__(self, pattern, text, k, *, occ_factor: int = OCC_FACTOR,
                 period_factor: int = PERIOD_FACTOR, **kw):
        self.occ_factor = occ_factor
        self.period_factor = period_factor
        super().__init__(pattern, text, k, **kw)

    def build_steps(self) -> Steps:
        return build_epoch_steps(self.strings, self.k, self.threshold, self.epoch_length,
                                 self.occ_factor, self.counters, self.period_factor)


def fast_query(pattern, text, k: int, *, deamortize: bool = False, counters: Counters | None = None,
               verify: bool = False, seed: int | None = None, occ_factor: int = OCC_FACTOR,
               period_factor: int = PERIOD_FACTOR, epoch_length: int | None = None):
    """Build the fast-query structure, optionally deamortized (k >= 2)."""
    counters = counters if counters is not None else Counters()
    if deamortize and k >= 2:
        def factory(**kw):
            return FastQueryStructure(pattern, text, k, occ_factor=occ_factor, period_factor=period_factor,
                                      verify=verify, seed=seed, **kw)
        return LazyRebuilder(factory, k, counters)
    if deamortize:
        epoch_length = 1
    return FastQueryStructure(pattern, text, k, occ_factor=occ_factor, period_factor=period_factor,
                              counters=counters, verify=verify, seed=seed, epoch_length=epoch_length)
