#!/usr/bin/env python3
"""Generate a corpus of Grail-format DFA files for benchmarking.

Two sources, mixable:
  * --patterns FILE   one PROSITE-style pattern per line, compiled to a
                      minimal DFA over the 20-letter amino-acid alphabet
  * --random N        N seeded random complete DFAs

Usage:
  python scripts/make_corpus.py out_dir --random 50 --seed 7
  python scripts/make_corpus.py out_dir --patterns motifs.txt
"""

import argparse
import random
import sys
from pathlib import Path

from sfax.automaton import random_dfa, serialize_grail
from sfax.builder import StateBudgetExceeded, build_sfa
from sfax.gf2 import precompute_context
from sfax.pattern import PatternError, compile_pattern


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out_dir")
    parser.add_argument("--patterns", help="file with one pattern per line")
    parser.add_argument("--random", type=int, default=0, metavar="N")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-states", type=int, default=8,
                        help="DFA states per random instance (upper bound)")
    parser.add_argument("--max-sfa-states", type=int, default=5000,
                        help="resample instances whose SFA exceeds this "
                             "(the SFA state set can grow to n^n)")
    parser.add_argument("--alphabet", default="abcd")
    args = parser.parse_args(argv)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = 0

    if args.patterns:
        for i, line in enumerate(Path(args.patterns).read_text().splitlines()):
            pattern = line.strip()
            if not pattern or pattern.startswith("#"):
                continue
            try:
                dfa = compile_pattern(pattern)
            except PatternError as exc:
                print(f"skip line {i + 1} ({pattern!r}): {exc}", file=sys.stderr)
                continue
            path = out / f"pattern_{i:04d}.dfa"
            path.write_text(f"# {pattern}\n" + serialize_grail(dfa))
            written += 1

    rng = random.Random(args.seed)
    ctx = precompute_context()
    for i in range(args.random):
        while True:
            n = rng.randint(2, args.max_states)
            alpha = args.alphabet[: rng.randint(2, len(args.alphabet))]
            dfa = random_dfa(rng, n, alpha)
            try:
                build_sfa(dfa, "hash", ctx, state_budget=args.max_sfa_states)
            except StateBudgetExceeded:
                continue
            break
        path = out / f"random_{i:04d}.dfa"
        path.write_text(serialize_grail(dfa))
        written += 1

    print(f"wrote {written} DFA files to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
