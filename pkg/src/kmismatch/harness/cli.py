"""Command line entry point: ``kmismatch {gen,run,sweep,verify}``.

Exit codes: 0 on success, 2 when a verified run diverges from the oracle,
1 on usage errors (bad flags or an inconsistent instance).
"""
from __future__ import annotations

import argparse
import json
import sys

from ..errors import DivergenceDetected
from .facade import STRUCTURES
from .runner import run, sweep, to_csv
from .workload import Workload, default_k, gen_random


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workload", help="workload file to replay instead of generating one")
    p.add_argument("--structure", choices=STRUCTURES, default="kangaroo")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--m", type=int, default=None, help="pattern length (default n/2)")
    p.add_argument("--k", type=int, default=None, help="threshold (default ceil(sqrt(m)))")
    p.add_argument("--x", type=int, default=1, help="flush period of the trade-off structure")
    p.add_argument("--sigma", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ops", type=int, default=1000)
    p.add_argument("--query-ratio", type=float, default=0.5)
    p.add_argument("--verify", action="store_true", help="check every query against the oracle")
    p.add_argument("--deamortize", action="store_true")
    p.add_argument("--out", help="output file (workload for gen, CSV otherwise)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kmismatch", description="Dynamic k-mismatch structures and benchmark harness")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    for verb, text in (("gen", "write a seeded random workload"),
                       ("run", "replay a workload and print counters"),
                       ("sweep", "rerun a workload on the trade-off structure for several x"),
                       ("verify", "replay with every query checked against the oracle")):
        p = sub.add_parser(verb, help=text)
        _instance_flags(p)
        if verb == "sweep":
            p.add_argument("--x-values", default="1,4,16,64",
                           help="comma-separated flush periods")
    return parser


def _workload(args) -> Workload:
    if args.workload:
        wl = Workload.load(args.workload)
        cfg = wl.config.with_(structure=args.structure, x=args.x, verify=args.verify,
                              deamortize=args.deamortize)
        wl.config = cfg
        return wl
    m = args.m if args.m is not None else max(1, args.n // 2)
    k = args.k if args.k is not None else default_k(m)
    return gen_random(args.n, m, args.sigma, args.seed, args.ops, args.query_ratio, k=k,
                      structure=args.structure, x=args.x, verify=args.verify,
                      deamortize=args.deamortize)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        wl = _workload(args)
        if args.verb == "gen":
            _emit(wl.dumps(), args.out)
            return 0
        if args.verb == "verify":
            wl.config = wl.config.with_(verify=True)
        if args.verb == "sweep":
            xs = [int(v) for v in args.x_values.split(",") if v.strip()]
            results = sweep(wl, wl.config, xs)
        else:
            results = [run(wl, wl.config)]
    except DivergenceDetected as err:
        print(f"divergence at op {err.op_index}: got {err.got}, expected {err.expected}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        print(f"kmismatch: error: {err}", file=sys.stderr)
        return 1
    _emit(to_csv(results), args.out)
    if args.verb == "verify":
        print(json.dumps({"ok": True, "ops": len(wl.ops)}), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
