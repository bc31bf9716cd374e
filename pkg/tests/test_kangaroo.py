import math
import random

import pytest

from kmismatch.errors import BadK, IndexOutOfRange, PreconditionViolation
from kmismatch.kangaroo import KangarooStructure
from kmismatch.oracle import NaiveStructure

from conftest import codes


def test_examples():
    s = KangarooStructure(codes("abc"), codes("abcbca"), 1)
    assert s.query(0) == 0
    assert s.query(1) == math.inf
    s2 = KangarooStructure([0, 0, 0, 0], [1, 0, 1, 0, 0], 2)
    assert s2.query(0) == 2


def test_lockstep_10k_steps_and_lcp_budget():
    rng = random.Random(77)
    for sigma, m, n, k in [(2, 50, 90, 5), (4, 120, 200, 11), (26, 64, 64, 64)]:
        P = [rng.randrange(sigma) for _ in range(m)]
        T = [rng.randrange(sigma) for _ in range(n)]
        s, ref = KangarooStructure(P, T, k), NaiveStructure(P, T, k)
        for _ in range(10_000 // 3):
            if rng.random() < 0.5:
                tg = rng.choice("PT")
                i = rng.randrange(m if tg == "P" else n)
                c = rng.randrange(sigma)
                s.update(tg, i, c)
                ref.update(tg, i, c)
            else:
                i = rng.randrange(n - m + 1)
                before = s.counters.lcp_calls
                assert s.query(i) == ref.query(i)
                assert s.counters.lcp_calls - before <= k + 1


def test_idempotent_write():
    P, T = [0, 1, 0], [0, 1, 0, 1]
    s = KangarooStructure(P, T, 1)
    before = [s.query(i) for i in range(2)]
    s.update("T", 1, 1)
    assert [s.query(i) for i in range(2)] == before


def test_errors():
    s = KangarooStructure([0, 1], [0, 1, 0], 1)
    with pytest.raises(IndexOutOfRange):
        s.update("P", 2, 0)
    with pytest.raises(IndexOutOfRange):
        s.query(2)
    with pytest.raises(PreconditionViolation):
        KangarooStructure([0], [0, 0, 0], 1)
    with pytest.raises(BadK):
        KangarooStructure([0, 1], [0, 1], 3)
