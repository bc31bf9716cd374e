import math
import random

import pytest
from hypothesis import given, strategies as st

from kmismatch.counters import Counters
from kmismatch.epoch import (
    EpochState,
    ExplicitDistances,
    FastQueryStructure,
    OrderedIndex,
    PeriodicRep,
    build_epoch_steps,
    fast_query,
)
from kmismatch.errors import EpochExhausted
from kmismatch.oracle import NaiveStructure, hd, occ_k_naive
from kmismatch.rebuild import LazyRebuilder
from kmismatch.static import drain
from kmismatch.strings import StringPair

from conftest import codes


@given(st.sets(st.integers(0, 99)), st.integers(0, 100), st.integers(0, 100))
def test_ordered_index(xs, lo, hi):
    lo, hi = min(lo, hi), max(lo, hi)
    idx = OrderedIndex(100)
    for x in xs:
        idx.add(x, 1)
    s = sorted(xs)
    assert idx.rank(lo) == sum(1 for x in s if x < lo)
    assert idx.count(lo, hi) == sum(1 for x in s if lo <= x < hi)
    below = [x for x in s if x <= lo]
    assert idx.predecessor(lo) == (below[-1] if below else None)


def worked_rep():
    strings = StringPair.create(codes("aaab"), codes("aaabab"))
    Q = codes("ab")
    rep = PeriodicRep(strings, 0, 6, Q, [1], [1], Counters())
    drain(rep.build_steps())
    return strings, rep


def test_worked_mu_example():
    strings, rep = worked_rep()
    assert rep.mu == {0: 2}
    assert rep.distance(0) == 1 + 1 - 2 == hd("aaab", "aaab")
    assert rep.distance(1) == hd("aaab", "abab")
    assert rep.get(1) is None  # odd residue


def test_worked_example_pattern_repair():
    strings, rep = worked_rep()
    # writing P[1] := Q[1] = 'b' removes 1 from MP and its mu contribution
    rep.on_update("P", 1, ord("a"), ord("b"))
    strings.engine.substitute(strings.P, 1, ord("b"))
    assert rep.MP == set()
    assert rep.mu == {}
    assert rep.distance(0) == hd("abab", "aaab")


def periodic_instance(rng, Q, copies, errors):
    P = list(Q) * copies
    T = list(Q) * (2 * copies)
    sigma = max(Q) + 2
    for s in (P, T):
        for i in rng.sample(range(len(s)), errors):
            s[i] = rng.choice([c for c in range(sigma) if c != s[i]])
    return P, T, sigma


def test_periodic_mode_mu_and_queries_match_oracle():
    rng = random.Random(4)
    for Q, copies, errors, k in [((0, 1), 40, 2, 2), ((0, 0, 1), 30, 3, 3), ((1, 0, 2, 0), 20, 1, 2)]:
        P, T, sigma = periodic_instance(rng, Q, copies, errors)
        s = FastQueryStructure(P, T, k, occ_factor=1, period_factor=1)
        ref = NaiveStructure(P, T, k)
        n, m = len(T), len(P)
        assert s.state.periodic_reps(), "planted instance should take the periodic branch"
        for step in range(3 * k * 8):
            tg = rng.choice("PT")
            i = rng.randrange(m if tg == "P" else n)
            c = rng.randrange(sigma) if rng.random() < 0.3 else Q[i % len(Q)] if tg == "P" else rng.randrange(sigma)
            s.update(tg, i, c)
            ref.update(tg, i, c)
            for rep in s.state.periodic_reps():
                for j in range(0, rep.J + 1):
                    if (j + step) % 16 == 0:
                        assert rep.mu.get(j, 0) == rep.mu_brute_force(j)
            for q in range(n - m + 1):
                assert s.query(q) == ref.query(q)


def test_periodic_branch_at_default_cutoff():
    rng = random.Random(10)
    m, n, k = 4096, 6144, 1
    P, T = [0] * m, [0] * n
    P[rng.randrange(m)] = 1
    T[rng.randrange(n)] = 1
    s = FastQueryStructure(P, T, k)
    reps = s.state.periodic_reps()
    assert len(reps) == 1 and reps[0].Q == (0,)
    ref = NaiveStructure(P, T, k)
    for _ in range(k):
        i = rng.randrange(n)
        s.update("T", i, 1)
        ref.update("T", i, 1)
    for q in range(0, n - m + 1, 7):
        assert s.query(q) == ref.query(q)


def test_no_candidates_gives_empty_explicit():
    s = FastQueryStructure([0] * 20, [1] * 30, 2)
    assert all(isinstance(r, ExplicitDistances) and not r.dists for r in s.state.reps)
    assert all(s.query(i) == math.inf for i in range(11))


def test_explicit_flip_to_match_decrements():
    P = [0, 0, 0, 0]
    T = [0, 1, 0, 0, 0, 0]
    s = FastQueryStructure(P, T, 2)
    assert s.query(0) == 1
    s.update("T", 1, 0)
    assert s.query(0) == 0


def test_epoch_state_budget():
    strings = StringPair.create([0, 1, 0], [0, 1, 0, 1])
    state, _ = drain(build_epoch_steps(strings, 1, 2, 1, 864, Counters()))
    assert isinstance(state, EpochState)
    state.apply_update("T", 0, 1)
    with pytest.raises(EpochExhausted):
        state.apply_update("T", 0, 0)


def test_update_outside_window_changes_nothing():
    P = [0, 1] * 30
    P[7] = 0
    T = [0, 1] * 45 + [5] * 30
    s = FastQueryStructure(P, T, 2, occ_factor=1, period_factor=1)
    rep = s.state.periodic_reps()[0]
    before = [s.query(i) for i in range(len(T) - len(P) + 1)]
    outside = len(T) - 1
    assert not rep.ell <= outside < rep.r
    s.update("T", outside, 0)
    assert [s.query(i) for i in range(len(T) - len(P) + 1)] == before
    assert before == [NaiveStructure(P, T, 2).query(i) for i in range(len(T) - len(P) + 1)]


def test_threshold_doubling_is_safe():
    rng = random.Random(5)
    for _ in range(60):
        m = rng.randint(8, 40)
        n = rng.randint(m, 2 * m)
        k = rng.randint(1, max(1, m // 3))
        P = [rng.randrange(2) for _ in range(m)]
        T = [rng.randrange(2) for _ in range(n)]
        snap = set(occ_k_naive(P, T, min(m, 2 * k)).positions)
        for _ in range(k):
            if rng.random() < 0.5:
                P[rng.randrange(m)] = rng.randrange(2)
            else:
                T[rng.randrange(n)] = rng.randrange(2)
        assert set(occ_k_naive(P, T, k).positions) <= snap


def test_two_windows_agree_on_shared_alignments():
    rng = random.Random(6)
    P, T, _ = periodic_instance(rng, (0, 1, 1), 20, 2)
    s = FastQueryStructure(P, T, 3, occ_factor=1, period_factor=1)
    m = len(P)
    assert len(s.state.windows) == 2
    (a0, b0), (a1, b1) = s.state.windows
    for i in range(max(a0, a1), min(b0, b1) - m + 1):
        d = [r.get(i) for r in s.state.reps]
        d = [math.inf if v is None or v > 3 else v for v in d]
        assert d[0] == d[1]


def run_lockstep(s, P, T, k, sigma, ops, rng):
    ref = NaiveStructure(P, T, k)
    n, m = len(T), len(P)
    answers = []
    for _ in range(ops):
        if rng.random() < 0.5:
            tg = rng.choice("PT")
            i, c = rng.randrange(m if tg == "P" else n), rng.randrange(sigma)
            s.update(tg, i, c)
            ref.update(tg, i, c)
        else:
            i = rng.randrange(n - m + 1)
            got = s.query(i)
            assert got == ref.query(i)
            answers.append(got)
    return answers


@pytest.mark.parametrize("k", [1, 2, 3, 7, 16])
def test_deamortized_equals_amortized(k):
    rng = random.Random(k)
    m, n, sigma = 60, 100, 2
    P = [rng.randrange(sigma) for _ in range(m)]
    T = [rng.randrange(sigma) for _ in range(n)]
    a = run_lockstep(fast_query(P, T, k), P, T, k, sigma, 1500, random.Random(99))
    d = run_lockstep(fast_query(P, T, k, deamortize=True), P, T, k, sigma, 1500, random.Random(99))
    assert a == d


def test_k1_deamortized_falls_back_to_per_update_rebuild():
    s = fast_query([0, 1] * 10, [0, 1] * 15, 1, deamortize=True)
    assert isinstance(s, FastQueryStructure) and s.epoch_length == 1


def test_deamortized_per_update_budget():
    rng = random.Random(1)
    m, n, k = 512, 1024, 16
    P = [rng.randrange(4) for _ in range(m)]
    T = [rng.randrange(4) for _ in range(n)]
    c = Counters()
    s = fast_query(P, T, k, deamortize=True, counters=c)
    assert isinstance(s, LazyRebuilder)
    worst = 0
    for _ in range(10 * k):
        before = c.rebuild_steps
        s.update("T", rng.randrange(n), rng.randrange(4))
        worst = max(worst, c.rebuild_steps - before)
    chunk = 64  # largest single step a rebuild yields
    assert worst <= math.ceil(s.estimate / s.first_half) + chunk
    assert s.max_backlog <= s.half
