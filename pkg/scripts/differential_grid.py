"""Run every structure variant against the reference on the seeded workload grid."""
import argparse
import sys
import time

from kmismatch.harness.experiments import differential_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--ops", type=int, default=2000)
    args = ap.parse_args()
    t0 = time.perf_counter()
    out = differential_grid(args.count, args.ops)
    print(f"workloads={out.workloads} runs={out.runs} queries={out.queries_checked} "
          f"divergences={len(out.failures)} seconds={time.perf_counter() - t0:.1f}")
    for case, name, kw, idx, got, want in out.failures[:20]:
        print(f"  {case} {name} {kw}: op {idx} got {got} expected {want}")
    return 1 if out.failures else 0


if __name__ == "__main__":
    sys.exit(main())
