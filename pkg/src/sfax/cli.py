"""Command-line surface: compile patterns, build SFAs under any
strategy, match inputs, cross-verify the strategies, and benchmark."""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time
from pathlib import Path

from . import builder, matcher, parallel
from .automaton import Dfa, dfa_match, parse_grail, random_dfa, serialize_grail
from .builder import build_sfa, canonical_form, parse_sfa, serialize_sfa
from .gf2 import (DEFAULT_POLY, fingerprint, poly_mod_longdiv,
                  precompute_context)
from .pattern import PatternError, compile_pattern

ALL_STRATEGIES = builder.STRATEGIES + parallel.PARALLEL_SCHEMES

BENCH_HEADER = ("dfa,dfa_states,sfa_states,strategy,workers,wall_time_ns,"
                "full_vector_comparisons,fingerprint_comparisons,"
                "max_chain_length")


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _build_any(dfa: Dfa, strategy: str, workers: int, ctx, state_budget: int):
    if strategy in builder.STRATEGIES or strategy == "fingerprint":
        return build_sfa(dfa, strategy, ctx, state_budget=state_budget)
    if strategy in parallel.PARALLEL_SCHEMES:
        workers = _clamp_workers(dfa, strategy, workers)
        return parallel.build_parallel(dfa, workers, ctx, scheme=strategy,
                                       state_budget=state_budget)
    raise ValueError(f"unknown strategy {strategy!r}")


def _clamp_workers(dfa: Dfa, scheme: str, workers: int) -> int:
    """Snap the worker count to the scheme's precondition."""
    asz = dfa.alphabet_size
    if scheme == "par-symbols":
        return min(workers, asz)
    if scheme == "par-groups":
        return asz * max(2, workers // asz)
    if scheme == "par-mixed" and (workers <= asz or workers % asz == 0):
        return asz + 1
    return workers


def cmd_compile(args) -> int:
    try:
        dfa = compile_pattern(args.pattern)
    except PatternError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(args.out, serialize_grail(dfa))
    return 0


def cmd_build(args) -> int:
    dfa = parse_grail(_read(args.dfa))
    ctx = precompute_context(args.poly)
    try:
        sfa, stats = _build_any(dfa, args.strategy, args.workers, ctx,
                                args.state_budget)
    except builder.StateBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(args.out, serialize_sfa(sfa))
    print(BENCH_HEADER)
    print(_bench_line(args.dfa, dfa, sfa.n_states, args.strategy,
                      args.workers, stats))
    return 0


def _bench_line(name, dfa, n_sfa, strategy, workers, stats) -> str:
    return (f"{name},{dfa.n_states},{n_sfa},{strategy},{workers},"
            f"{stats.wall_time_ns},{stats.full_vector_comparisons},"
            f"{stats.fingerprint_comparisons},{stats.max_chain_length}")


def cmd_match(args) -> int:
    try:
        sfa = parse_sfa(_read(args.sfa))
        dfa = parse_grail(_read(args.dfa))
        text = _read(args.input)
        if not args.keep_newlines:
            text = text.replace("\n", "")
        outcome = matcher.match_parallel(sfa, dfa, text, args.chunks)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{'accept' if outcome.accepted else 'reject'} "
          f"end_state={outcome.end_state}")
    return 0 if outcome.accepted else 1


def cmd_verify(args) -> int:
    ctx = precompute_context(args.poly)
    rng = random.Random(args.seed)
    dfas: list[tuple[str, Dfa]] = []
    if args.dfa:
        dfas.append((args.dfa, parse_grail(_read(args.dfa))))
    for i in range(args.random_dfas):
        n = rng.randint(2, 6)
        alpha = "abcd"[: rng.randint(2, 4)]
        dfas.append((f"random-{i}", random_dfa(rng, n, alpha)))

    failures = 0

    def report(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
        if not ok:
            failures += 1

    # Fingerprint vs long division.
    ok = True
    for _ in range(2000):
        data = rng.randbytes(rng.randint(1, 64))
        if fingerprint(data, ctx) != poly_mod_longdiv(data, ctx.poly_full):
            ok = False
            print(f"  reproducer: fingerprint mismatch on {data.hex()}")
            break
    report("fingerprint-vs-longdiv", ok)

    # Optional: check a prebuilt SFA file against a fresh reference build.
    if args.sfa:
        if not args.dfa:
            print("error: --sfa needs the matching DFA argument", file=sys.stderr)
            return 2
        dfa = dfas[0][1]
        given = parse_sfa(_read(args.sfa))
        reference, _ = build_sfa(dfa, "exhaustive")
        ok = canonical_form(given) == canonical_form(reference)
        if not ok:
            print(f"  reproducer: rebuild {args.dfa} and diff against {args.sfa}")
        report(f"stored-sfa {args.sfa}", ok)

    for name, dfa in dfas:
        reference, _ = build_sfa(dfa, "exhaustive")
        ref = canonical_form(reference)
        ok = True
        for strategy in ("fp", "hash"):
            sfa, _ = build_sfa(dfa, strategy, ctx)
            if canonical_form(sfa) != ref:
                ok = False
        # Forced-collision run: 8-bit fingerprints must still be exact.
        sfa, _ = build_sfa(dfa, "hash", ctx, fp_bits=8)
        if canonical_form(sfa) != ref:
            ok = False
        for scheme in parallel.PARALLEL_SCHEMES:
            workers = _clamp_workers(dfa, scheme, args.workers)
            sfa, _ = parallel.build_parallel(dfa, workers, ctx, scheme=scheme)
            if canonical_form(sfa) != ref:
                ok = False
        if not ok:
            print("  reproducer:")
            for line in serialize_grail(dfa).splitlines():
                print(f"    {line}")
        report(f"cross-strategy {name} ({reference.n_states} SFA states)", ok)

        ok = True
        for _ in range(10):
            text = "".join(rng.choice(dfa.alphabet) for _ in range(200))
            expect = dfa_match(dfa, text)
            for chunks in (1, 3, 7):
                got = matcher.match_parallel(reference, dfa, text, chunks)
                if got != expect:
                    ok = False
                    print(f"  reproducer: input={text!r} chunks={chunks}")
                    break
        report(f"parallel-match {name}", ok)

    return 1 if failures else 0


def cmd_bench(args) -> int:
    ctx = precompute_context(args.poly)
    paths = sorted(Path(args.corpus).glob("*"))
    strategies = args.strategies.split(",") if args.strategies else list(ALL_STRATEGIES)
    workers_list = [int(w) for w in args.workers.split(",")]
    print(BENCH_HEADER)
    for path in paths:
        if not path.is_file():
            continue
        dfa = parse_grail(path.read_text())
        for strategy in strategies:
            sweep = workers_list if strategy in parallel.PARALLEL_SCHEMES else [1]
            for workers in sweep:
                runs = []
                for _ in range(args.reps):
                    try:
                        sfa, stats = _build_any(dfa, strategy, workers, ctx,
                                                args.state_budget)
                    except builder.StateBudgetExceeded as exc:
                        print(f"error: {path.name}: {exc}", file=sys.stderr)
                        return 2
                    runs.append((stats.wall_time_ns, sfa.n_states, stats))
                runs.sort()
                wall = int(statistics.median(r[0] for r in runs))
                _, n_sfa, stats = runs[len(runs) // 2]
                line = _bench_line(path.name, dfa, n_sfa, strategy, workers, stats)
                parts = line.split(",")
                parts[5] = str(wall)
                print(",".join(parts))
    return 0


def _hex_poly(text: str) -> int:
    return int(text, 16)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="sfax",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a PROSITE-style pattern to a DFA")
    p.add_argument("pattern")
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("build", help="build the SFA of a DFA")
    p.add_argument("dfa")
    p.add_argument("--strategy", default="hash",
                   choices=ALL_STRATEGIES + ("fingerprint",))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--state-budget", type=int, default=builder.DEFAULT_STATE_BUDGET)
    p.add_argument("--poly", type=_hex_poly, default=DEFAULT_POLY)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("match", help="chunked SFA membership test")
    p.add_argument("sfa")
    p.add_argument("dfa")
    p.add_argument("input")
    p.add_argument("--chunks", type=int, default=4)
    p.add_argument("--keep-newlines", action="store_true")
    p.set_defaults(fn=cmd_match)

    p = sub.add_parser("verify", help="cross-check every strategy and matcher")
    p.add_argument("dfa", nargs="?")
    p.add_argument("--sfa", default=None,
                   help="also check this stored SFA against a rebuild of DFA")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-dfas", type=int, default=20)
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--poly", type=_hex_poly, default=DEFAULT_POLY)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="benchmark a corpus of Grail DFA files")
    p.add_argument("corpus")
    p.add_argument("--strategies", default=None,
                   help="comma-separated subset (default: all)")
    p.add_argument("--workers", default="1,2,4")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--state-budget", type=int, default=builder.DEFAULT_STATE_BUDGET)
    p.add_argument("--poly", type=_hex_poly, default=DEFAULT_POLY)
    p.set_defaults(fn=cmd_bench)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
