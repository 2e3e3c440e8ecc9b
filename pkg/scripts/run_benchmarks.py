#!/usr/bin/env python3
"""Reproduce the benchmark tables: pipeline and mesh at the published sizes.

Writes one CSV per case (and optional JSON-lines dumps) with mean/std
runtime and peak traced allocation over the requested number of runs.
"""

import argparse
import sys

from tolmc.bench import PAPER_SIZES, run_bench, write_csv, write_jsonl


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default=",".join(str(k) for k in PAPER_SIZES))
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--out-prefix", default="bench")
    ap.add_argument("--jsonl", action="store_true")
    ap.add_argument("--parallel", action="store_true")
    args = ap.parse_args()
    ks = [int(x) for x in args.sizes.split(",") if x]
    for case in ("pipeline", "mesh"):
        rows = run_bench([case], ks, args.runs, parallel=args.parallel)
        path = f"{args.out_prefix}_{case}.csv"
        write_csv(rows, path)
        if args.jsonl:
            write_jsonl(rows, f"{args.out_prefix}_{case}.jsonl")
        print(f"{case}: wrote {path}")
        for r in rows:
            verdict = r.verdict if isinstance(r.verdict, str) else (
                "SAT" if r.verdict else "UNSAT")
            print(f"  k={r.k:>3} {r.runtime_ms_mean:9.2f} ms "
                  f"(+/- {r.runtime_ms_std:6.2f})  {r.mem_kb_mean:10.2f} KB "
                  f"(+/- {r.mem_kb_std:6.2f})  {verdict}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
