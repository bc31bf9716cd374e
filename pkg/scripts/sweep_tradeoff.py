"""Buffer scans per query and flush work per update of the trade-off structure across x."""
import argparse
import csv

from kmismatch.harness.experiments import SWEEP_X, sweep_workload, tradeoff_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1 << 13)
    ap.add_argument("--k", type=int, default=1 << 10)
    ap.add_argument("--seeds", default="5,6,7")
    ap.add_argument("--errors", type=int, default=64)
    ap.add_argument("--out", default="sweep_tradeoff.csv")
    args = ap.parse_args()
    rows = []
    for churn in (True, False):
        for seed in (int(s) for s in args.seeds.split(",")):
            wl = sweep_workload(args.n, args.k, seed, args.errors, churn)
            for p in tradeoff_sweep(wl, SWEEP_X):
                row = {"regime": "churn" if churn else "random", "seed": seed, "x": p.x,
                       "scans_per_query": round(p.scans_per_query, 3),
                       "flush_work_per_update": round(p.flush_work_per_update, 1),
                       "heavy_letters": p.heavy_letters}
                rows.append(row)
                print(row)
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
