"""Largest per-update rebuild work of the two-instance scheme versus the amortized mean."""
import argparse

from kmismatch.harness.experiments import smoothness, smoothness_workloads


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--k", type=int, default=64)
    ap.add_argument("--epochs", type=int, default=10)
    args = ap.parse_args()
    print(f"{'workload':<22}{'epoch work':>12}{'mean/update':>13}{'max/update':>12}{'ratio':>8}")
    for name, wl in smoothness_workloads(args.n, args.k, args.epochs):
        r = smoothness(wl, args.epochs)
        print(f"{name:<22}{r.epoch_total:>12.0f}{r.amortized_mean:>13.1f}{r.deamortized_max:>12}{r.ratio:>8.2f}")


if __name__ == "__main__":
    main()
