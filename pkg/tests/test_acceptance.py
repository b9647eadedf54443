"""Acceptance gate: each test checks one pinned criterion at its stated
tolerance and prints a single PASS/FAIL line."""

import itertools
import random
import time

from sfax.automaton import dfa_match, random_dfa
from sfax.builder import (SfaState, StateBudgetExceeded, build_sfa,
                          canonical_form, predict_worst_case)
from sfax.gf2 import (MASK64, barrett_reduce, fingerprint, poly_mod,
                      poly_mod_longdiv, precompute_context)
from sfax.matcher import compose, match_parallel
from sfax.parallel import (build_par_groups, build_par_mixed,
                           build_par_symbols, build_par_transposed)
from sfax.pattern import compile_pattern

from conftest import GOLDEN_EDGES, GOLDEN_FINAL, GOLDEN_MAPS

CTX = precompute_context()

# Frozen instance whose SFA has >= 10^3 states (1445), used by the
# counter-based criteria and the smoke benchmark.
BIG_SEED, BIG_N, BIG_ALPHA = 11, 7, "abcd"


def _report(name: str, ok: bool, detail: str = ""):
    print(f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else ""))
    assert ok, name


def _corpus(n_dfas: int, seed: int = 2024, max_sfa_states: int = 300):
    """Seeded random complete DFAs (n <= 6, |Sigma| <= 4), resampled so
    every SFA stays small enough for repeated builds."""
    rng = random.Random(seed)
    out = []
    while len(out) < n_dfas:
        n = rng.randint(2, 6)
        alpha = "abcd"[: rng.randint(2, 4)]
        dfa = random_dfa(rng, n, alpha)
        try:
            sfa, stats = build_sfa(dfa, "hash", CTX,
                                   state_budget=max_sfa_states)
        except StateBudgetExceeded:
            continue
        out.append((dfa, sfa, stats))
    return out


def test_golden_example():
    t0 = time.perf_counter()
    dfa = compile_pattern("R-G")
    sfa, _ = build_sfa(dfa, "hash", CTX)
    ok = sfa.n_states == 6
    maps = {s.map for s in sfa.states}
    ok &= maps == GOLDEN_MAPS
    ok &= sfa.states[sfa.start].map == (0, 1, 2)
    ok &= {sfa.states[i].map for i in sfa.finals_s} == {GOLDEN_FINAL}
    for i, row in enumerate(sfa.delta_s):
        src = sfa.states[i].map
        for a, j in enumerate(row):
            glyph = sfa.alphabet[a]
            key = glyph if glyph in ("R", "G") else "*"
            ok &= sfa.states[j].map == GOLDEN_EDGES[src, key]
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    _report("golden-example", ok, f"6 states, {elapsed:.3f}s < 1s")


WORKER_SET = (1, 2, 3, 5, 8)


def _parallel_workers(asz: int):
    """Per-scheme worker counts drawn from WORKER_SET where the scheme's
    precondition allows; otherwise the smallest valid count."""
    symbols = [w for w in WORKER_SET if w <= asz]
    groups = [w for w in WORKER_SET if w > asz and w % asz == 0] or [2 * asz]
    mixed = [w for w in WORKER_SET if w > asz and w % asz != 0] or [asz + 1]
    return {
        build_par_symbols: symbols,
        build_par_groups: groups,
        build_par_mixed: mixed,
        build_par_transposed: list(WORKER_SET),
    }


def test_strategy_equivalence():
    t0 = time.perf_counter()
    corpus = _corpus(200)
    ok = True
    for i, (dfa, hash_sfa, _) in enumerate(corpus):
        want = canonical_form(hash_sfa)
        for strategy in ("exhaustive", "fp"):
            got, _ = build_sfa(dfa, strategy, CTX)
            ok &= canonical_form(got) == want
        for builder_fn, choices in _parallel_workers(dfa.alphabet_size).items():
            workers = choices[i % len(choices)]
            got, _ = builder_fn(dfa, workers, CTX)
            ok &= canonical_form(got) == want
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60.0
    _report("strategy-equivalence", ok,
            f"{len(corpus)} DFAs x 7 strategies, {elapsed:.1f}s < 60s")


def test_fingerprint_correctness():
    t0 = time.perf_counter()
    rng = random.Random(99)
    ok = True
    n_inputs = 0
    for length in range(1, 65):
        for _ in range(1563):  # 64 * 1563 = 100032 >= 10^5
            data = rng.randbytes(length)
            if fingerprint(data, CTX) != poly_mod_longdiv(data, CTX.poly_full):
                ok = False
            n_inputs += 1
    for data in (b"\x00" * 64, b"\xff" * 64, CTX.poly_full.to_bytes(9, "big")):
        if fingerprint(data, CTX) != poly_mod_longdiv(data, CTX.poly_full):
            ok = False
        n_inputs += 1
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30.0
    _report("fingerprint-correctness", ok,
            f"{n_inputs} inputs, {elapsed:.1f}s < 30s")


def test_barrett_fidelity():
    rng = random.Random(7)
    ok = True
    for _ in range(10 ** 5):
        a = rng.getrandbits(128)
        if barrett_reduce(a >> 64, a & MASK64, CTX) != poly_mod(a, CTX.poly_full):
            ok = False
            break
    _report("barrett-fidelity", ok, "10^5 random 128-bit values")


def test_matching_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(31)
    instances = [(compile_pattern("R-G"), None)]
    while len(instances) < 51:
        n = rng.randint(2, 5)
        alpha = "abcd"[: rng.randint(2, 4)]
        dfa = random_dfa(rng, n, alpha)
        try:
            sfa, _ = build_sfa(dfa, "hash", CTX, state_budget=500)
        except StateBudgetExceeded:
            continue
        instances.append((dfa, sfa))
    golden_dfa = instances[0][0]
    golden_sfa, _ = build_sfa(golden_dfa, "hash", CTX)
    instances[0] = (golden_dfa, golden_sfa)

    ok = True
    n_strings = 0
    per_instance = 20  # 51 * 20 >= 10^3 strings in total
    for dfa, sfa in instances:
        alpha = dfa.alphabet
        for _ in range(per_instance):
            text = "".join(rng.choice(alpha) for _ in range(10 ** 4))
            want = dfa_match(dfa, text)
            for n_chunks in range(1, 17):
                got = match_parallel(sfa, dfa, text, n_chunks, parallel=False)
                if got != want:
                    ok = False
            # Spot-check the threaded execution path too.
            if match_parallel(sfa, dfa, text, 8, parallel=True) != want:
                ok = False
            n_strings += 1
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120.0
    _report("matching-equivalence", ok,
            f"{n_strings} strings x 16 chunkings, {elapsed:.1f}s < 120s")


def test_composition_laws():
    maps = [SfaState(t) for t in itertools.product(range(3), repeat=3)]
    ident = SfaState((0, 1, 2))
    ok = all(compose(ident, f) == f and compose(f, ident) == f for f in maps)
    for a in maps:
        for b in maps:
            ab = compose(a, b)
            for c in maps:
                if compose(ab, c) != compose(a, compose(b, c)):
                    ok = False
    _report("composition-laws", ok, "all 27 mappings, all 27^3 triples")


def test_comparison_work_bound():
    corpus = _corpus(60, seed=77)
    ok = True
    for dfa, sfa, _ in corpus:
        _, stats = build_sfa(dfa, "exhaustive")
        work = stats.full_vector_comparisons * dfa.n_states
        bound = predict_worst_case(dfa.alphabet_size, dfa.n_states,
                                   sfa.n_states)
        if work > bound:
            ok = False
    _report("comparison-work-bound", ok, f"{len(corpus)} DFAs")


def _big_instance():
    dfa = random_dfa(random.Random(BIG_SEED), BIG_N, BIG_ALPHA)
    return dfa


def test_hash_effectiveness():
    dfa = _big_instance()
    sfa, hstats = build_sfa(dfa, "hash", CTX)
    _, fstats = build_sfa(dfa, "fp", CTX)
    _, estats = build_sfa(dfa, "exhaustive")
    ok = sfa.n_states >= 10 ** 3
    mean_full = hstats.full_vector_comparisons / hstats.lookups
    ok &= mean_full <= 2.0
    ratio = fstats.full_vector_comparisons / estats.full_vector_comparisons
    ok &= ratio <= 0.1
    _report("hash-effectiveness", ok,
            f"{sfa.n_states} states, {mean_full:.2f} full cmp/lookup <= 2, "
            f"fp/exhaustive full-cmp ratio {ratio:.4f} <= 0.1")


def test_collision_robustness():
    dfa = _big_instance()
    want = canonical_form(build_sfa(dfa, "hash", CTX)[0])
    ok = True
    for strategy in ("fp", "hash"):
        narrow, stats = build_sfa(dfa, strategy, CTX, fp_bits=8)
        ok &= canonical_form(narrow) == want
        ok &= stats.full_vector_comparisons > stats.n_sfa_states  # collisions hit
    narrow, _ = build_par_transposed(dfa, 4, CTX, fp_bits=8)
    ok &= canonical_form(narrow) == want
    _report("collision-robustness", ok, "8-bit fingerprints, output exact")


def test_smoke_benchmark():
    dfa = _big_instance()
    hash_wall = min(build_sfa(dfa, "hash", CTX)[1].wall_time_ns
                    for _ in range(3))
    exhaustive_wall = min(build_sfa(dfa, "exhaustive")[1].wall_time_ns
                          for _ in range(3))
    ok = hash_wall <= exhaustive_wall
    _report("smoke-benchmark", ok,
            f"hash {hash_wall / 1e6:.0f}ms <= exhaustive "
            f"{exhaustive_wall / 1e6:.0f}ms")
