#!/usr/bin/env python3
"""Sweep build strategies and worker counts over a DFA corpus.

Thin wrapper around `sfax bench` that also prints per-strategy speedup
relative to the exhaustive baseline (median wall time per DFA).

Usage:
  python scripts/make_corpus.py corpus --random 20
  python scripts/bench_sweep.py corpus --workers 1,2,4,8 --reps 5
"""

import argparse
import csv
import io
import sys
from collections import defaultdict
from contextlib import redirect_stdout

from sfax.cli import main as sfax_main


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("corpus")
    parser.add_argument("--workers", default="1,2,4")
    parser.add_argument("--reps", type=int, default=3)
    parser.add_argument("--strategies", default=None)
    args = parser.parse_args(argv)

    cli_args = ["bench", args.corpus, "--workers", args.workers,
                "--reps", str(args.reps)]
    if args.strategies:
        cli_args += ["--strategies", args.strategies]
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = sfax_main(cli_args)
    if code != 0:
        sys.stderr.write(buf.getvalue())
        return code
    sys.stdout.write(buf.getvalue())

    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    baseline = {r["dfa"]: int(r["wall_time_ns"])
                for r in rows if r["strategy"] == "exhaustive"}
    if not baseline:
        return 0
    speedups = defaultdict(list)
    for r in rows:
        base = baseline.get(r["dfa"])
        if base:
            key = (r["strategy"], r["workers"])
            speedups[key].append(base / max(1, int(r["wall_time_ns"])))
    print()
    print("strategy,workers,geomean_speedup_vs_exhaustive")
    for (strategy, workers), vals in sorted(speedups.items()):
        product = 1.0
        for v in vals:
            product *= v
        print(f"{strategy},{workers},{product ** (1 / len(vals)):.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
