import math
import random

import pytest

from kmismatch.counters import Counters
from kmismatch.errors import BadK, DivergenceDetected, NonPrimitiveQ, PreconditionViolation, UniverseTooLarge
from kmismatch.harness import (
    CSV_COLUMNS,
    DynamicKMismatch,
    InstanceConfig,
    Workload,
    decompose_long_text,
    designated_block,
    gen_omv,
    gen_periodic,
    gen_random,
    gen_threesum,
    omv_reported,
    run,
    sweep,
    threesum_reported,
    threesum_solutions,
    to_csv,
)
from kmismatch.harness.cli import main
from kmismatch.kangaroo import KangarooStructure
from kmismatch.oracle import hd, occ_k_naive
from kmismatch.static import Periodic, analyze

# -- long texts ---------------------------------------------------------------


def test_decompose_examples():
    assert [(b.start, b.end) for b in decompose_long_text(20, 10)] == [(0, 20)]
    blocks = decompose_long_text(40, 10)
    assert [b.start for b in blocks] == [0, 10, 20]
    assert designated_block(21, 40, 10) == 2


def test_every_alignment_has_exactly_one_block():
    rng = random.Random(0)
    pairs = [(n, m) for m in (1, 2, 3, 7, 50) for n in range(m, 12 * m + 1)]
    pairs += [(rng.randint(m, 10_000), m) for m in (97, 1000, 3333, 5000) for _ in range(3)]
    for n, m in pairs:
        blocks = decompose_long_text(n, m)
        for b in blocks:
            assert b.end - b.start <= 2 * m and b.end - b.start >= m
            assert b.query_hi + m <= b.end
        owners = [0] * (n - m + 1)
        for b in blocks:
            for i in range(b.query_lo, b.query_hi + 1):
                owners[i] += 1
        assert owners == [1] * (n - m + 1)
        for i in range(0, n - m + 1, max(1, (n - m) // 50)):
            assert blocks[designated_block(i, n, m)].owns(i)
        for i in range(n):
            assert 1 <= sum(b.start <= i < b.end for b in blocks) <= 2


@pytest.mark.parametrize("structure,kw", [("kangaroo", {}), ("fastq", {}), ("fastq", {"deamortize": True}),
                                          ("tradeoff", {"x": 3}), ("oracle", {})])
def test_long_text_facade_matches_oracle(structure, kw):
    wl = gen_random(230, 40, 2, 4, 1500, k=9).annotated()
    res = run(wl, wl.config.with_(structure=structure, verify=True, **kw))
    assert len(res.answers) == len(wl.ops)


def test_facade_fans_out_pattern_updates():
    ds = DynamicKMismatch([0] * 10, [0] * 45, 2)
    assert len(ds.parts) == 4
    ds.update("P", 3, 1)
    assert all(p.strings.P.chars[3] == 1 for p in ds.parts)
    ds.update("T", 15, 1)
    assert sum(p.strings.T.chars.count(1) for p in ds.parts) == 2


# -- configs and workloads -------------------------------------------------------


def test_instance_config_invariants():
    InstanceConfig(10, 5, 2)
    with pytest.raises(PreconditionViolation):
        InstanceConfig(4, 5, 2)
    with pytest.raises(PreconditionViolation):
        InstanceConfig(11, 5, 2, direct=True)
    with pytest.raises(BadK):
        InstanceConfig(10, 5, 6)
    with pytest.raises(ValueError):
        InstanceConfig(10, 5, 2, structure="tradeoff", x=3)
    with pytest.raises(ValueError):
        InstanceConfig(10, 5, 2, structure="suffix-tree")


def test_gen_random_replay_and_seeds():
    a = gen_random(64, 40, 4, 1, 100)
    b = gen_random(64, 40, 4, 1, 100)
    c = gen_random(64, 40, 4, 2, 100)
    assert a.dumps() == b.dumps()
    assert a.dumps() != c.dumps()
    assert gen_random(64, 40, 4, 1, 100, query_ratio=1.0).updates == 0


def test_workload_file_roundtrip(tmp_path):
    wl = gen_random(50, 30, 3, 9, 200, k=2).annotated()
    assert any(op.expected == math.inf for op in wl.ops if op.kind == "query")
    path = tmp_path / "w.jsonl"
    wl.save(path)
    back = Workload.load(path)
    assert back.dumps() == wl.dumps()
    assert [op.expected for op in back.ops] == [op.expected for op in wl.ops]


def test_gen_periodic():
    wl = gen_periodic([0, 1, 1], 10, 0, 1, k=1)
    occ = occ_k_naive(wl.pattern, wl.text, 1)
    assert [i for i, d in occ if d == 0] == list(range(0, 31, 3))
    with pytest.raises(NonPrimitiveQ):
        gen_periodic("aa", 4, 0, 1)
    with pytest.raises(NonPrimitiveQ):
        gen_periodic([1, 1], 4, 0, 1)


def test_gen_periodic_drives_periodic_branch():
    wl = gen_periodic([0, 1], 2048, 1, 3, k=1)
    m = len(wl.pattern)
    res = analyze(wl.pattern, wl.text[:3 * m // 2], 1)
    assert isinstance(res, Periodic) and res.period == (0, 1)


def apply_updates(wl):
    P, T = list(wl.pattern), list(wl.text)
    for op in wl.ops:
        if op.kind == "update":
            (P if op.target == "P" else T)[op.index] = op.char
    return P, T


def test_threesum_pattern_construction():
    wl = gen_threesum([-1, 0], [], [], 2)
    P, _ = apply_updates(wl)
    assert [i for i, c in enumerate(P) if c] == [1, 2]
    with pytest.raises(UniverseTooLarge):
        gen_threesum([0], [0], [0], 4, m=7)


def test_threesum_detects_solution():
    wl = gen_threesum([0], [0], [0], 3)
    res = run(wl.annotated(), wl.config.with_(verify=True))
    ans = [a for op, a in zip(wl.ops, res.answers) if op.kind == "query"]
    assert ans == [0]  # trivial bound 1 + 1, dropped by 2
    assert threesum_reported(wl, res.answers) == [0]


def test_threesum_no_solution():
    A, B, C, N = [1, 2], [3], [-2, 0, 2], 5
    assert threesum_solutions(A, B, C) == []
    wl = gen_threesum(A, B, C, N)
    res = run(wl, wl.config.with_(structure="fastq"))
    assert threesum_reported(wl, res.answers) == []


def test_omv_identity():
    wl = gen_omv([[1, 0], [0, 1]], [[1, 0]])
    res = run(wl.annotated(), wl.config.with_(verify=True))
    assert omv_reported(wl, res.answers) == [[1, 0]]


def test_omv_zero_vector_boundary():
    M = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    q = 3
    wl = gen_omv(M, [[0, 0, 0]])
    res = run(wl, wl.config)
    qs = [a for op, a in zip(wl.ops, res.answers) if op.kind == "query"]
    assert qs == [2 * q] * 3
    tight = Workload(wl.config.with_(k=2 * q - 1), wl.pattern, wl.text, wl.ops, wl.meta)
    res = run(tight, tight.config)
    assert [a for a in res.answers if a is not None] == [math.inf] * 3
    assert hd("111", "111") == 0


# -- runner ----------------------------------------------------------------------


def test_verified_run_succeeds_and_counts():
    wl = gen_random(256, 128, 2, 5, 400, k=12)
    res = run(wl, wl.config.with_(structure="fastq", verify=True))
    assert res.counters.total() > 0
    assert res.op_index_max is not None


class _Faulty(KangarooStructure):
    def query(self, i):
        d = super().query(i)
        return d + 1 if d != math.inf else d


def test_fault_injection_diverges():
    wl = gen_periodic([0, 1], 20, 0, 1, k=3, op_count=30, query_ratio=1.0)
    wl.ops[0].index = 0
    faulty = _Faulty(wl.pattern, wl.text, 3, counters=Counters())
    with pytest.raises(DivergenceDetected) as err:
        run(wl, wl.config.with_(verify=True), structure=faulty)
    assert err.value.op_index == 0


def test_sweep_one_row_per_x_and_replay_determinism():
    wl = gen_random(128, 64, 2, 8, 300, k=16)
    xs = [1, 2, 4, 16]
    res = sweep(wl, wl.config, xs)
    text = to_csv(res, with_wall=False)
    lines = text.strip().splitlines()
    assert lines[0].split(",") == CSV_COLUMNS[:-1]
    assert len(lines) == 1 + len(xs)
    assert to_csv(sweep(wl, wl.config, xs), with_wall=False) == text


# -- command line ------------------------------------------------------------------


def test_cli_gen_run_verify_sweep(tmp_path, capsys):
    wpath = tmp_path / "w.jsonl"
    assert main(["gen", "--n", "64", "--m", "40", "--k", "4", "--ops", "50", "--out", str(wpath)]) == 0
    assert main(["verify", "--workload", str(wpath), "--structure", "tradeoff", "--x", "2"]) == 0
    out = tmp_path / "r.csv"
    assert main(["run", "--workload", str(wpath), "--structure", "fastq", "--deamortize", "--out", str(out)]) == 0
    assert out.read_text().startswith("structure,n,m,k,x,op_index_max")
    assert main(["sweep", "--n", "64", "--m", "32", "--k", "8", "--ops", "40", "--x-values", "1,2,8"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) >= 4


def test_cli_divergence_exit_code(tmp_path):
    wl = gen_random(40, 30, 2, 1, 20, k=30, query_ratio=1.0).annotated()
    wl.ops[3].expected = 99
    path = tmp_path / "bad.jsonl"
    wl.save(path)
    assert main(["verify", "--workload", str(path)]) == 2


def test_cli_usage_errors():
    with pytest.raises(SystemExit) as err:
        main(["run", "--bogus"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 1
    assert main(["run", "--n", "10", "--m", "20"]) == 1
    assert main(["sweep", "--n", "64", "--m", "32", "--k", "4", "--x-values", "8"]) == 1
