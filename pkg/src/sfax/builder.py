"""Sequential SFA construction with three membership-test strategies
(exhaustive, fingerprint-filtered, fingerprint-keyed hash table) plus
cost instrumentation and the worst-case comparison bound."""

from __future__ import annotations

from dataclasses import dataclass, field

from .automaton import Dfa
from .gf2 import MASK64, FingerprintContext, fingerprint

STRATEGIES = ("exhaustive", "fp", "hash")

DEFAULT_STATE_BUDGET = 1 << 26


class StateBudgetExceeded(RuntimeError):
    """Raised when SFA construction would exceed the configured state cap
    (the state set can grow to n^n)."""


@dataclass(frozen=True)
class SfaState:
    """One SFA state: a total mapping Q -> Q stored as a length-n vector.
    Entry q is the DFA state reached from q."""

    map: tuple[int, ...]
    fp: int | None = None


@dataclass
class Sfa:
    """SFA produced by construction: indexed mapping states, a dense
    transition table and the final-state set."""

    states: list[SfaState]
    delta_s: list[list[int]]
    start: int
    finals_s: frozenset[int]
    alphabet: tuple[str, ...]
    n_dfa_states: int

    @property
    def n_states(self) -> int:
        return len(self.states)

    def delta_array(self):
        import numpy as np
        arr = getattr(self, "_delta_arr", None)
        if arr is None:
            arr = np.array(self.delta_s, dtype=np.int32)
            self._delta_arr = arr
        return arr


@dataclass
class BuildStats:
    n_sfa_states: int = 0
    full_vector_comparisons: int = 0
    fingerprint_comparisons: int = 0
    fingerprints_computed: int = 0
    max_chain_length: int = 0
    lookups: int = 0
    wall_time_ns: int = 0
    worker_expansions: list[int] = field(default_factory=list)


def sfa_successor(f: SfaState, code: int, dfa: Dfa) -> SfaState:
    """Successor mapping on one symbol: entry q becomes delta[f(q)][a]."""
    delta = dfa.delta
    return SfaState(tuple(delta[q][code] for q in f.map))


def canonical_bytes(f: SfaState) -> bytes:
    """Canonical encoding fed to the fingerprint: n 16-bit little-endian
    entries in index order.  Injective while ids fit in 16 bits."""
    out = bytearray()
    for q in f.map:
        if q >= 1 << 16:
            raise ValueError("state id does not fit in 16 bits")
        out += q.to_bytes(2, "little")
    return bytes(out)


def state_fingerprint(map_: tuple[int, ...], ctx: FingerprintContext,
                      fp_bits: int = 64) -> int:
    fp = fingerprint(canonical_bytes(SfaState(map_)), ctx)
    if fp_bits < 64:
        fp &= (1 << fp_bits) - 1
    return fp


class StateStore:
    """Membership structure over SFA mapping vectors.

    Strategies: ``exhaustive`` compares full vectors, probing the
    caller-supplied hint first and then scanning newest-first (recently
    created states are the likeliest duplicates); ``fp`` compares
    fingerprints first and full vectors only on fingerprint equality;
    ``hash`` probes only the chain at the fingerprint's bucket.  All
    three are exact: colliding fingerprints fall back to full
    comparison.

    ``fp_bits`` is a test hook that narrows fingerprints to force
    collisions.
    """

    def __init__(self, strategy: str, ctx: FingerprintContext | None = None,
                 fp_bits: int = 64, initial_buckets: int = 16,
                 stats: BuildStats | None = None):
        if strategy == "fingerprint":
            strategy = "fp"
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        if strategy != "exhaustive" and ctx is None:
            raise ValueError(f"strategy {strategy!r} requires a fingerprint context")
        self.strategy = strategy
        self.ctx = ctx
        self.fp_bits = fp_bits
        self.stats = stats if stats is not None else BuildStats()
        self.maps: list[tuple[int, ...]] = []
        self.fps: list[int] = []
        if strategy == "hash":
            self._n_buckets = initial_buckets
            self._buckets: list[list[int]] = [[] for _ in range(initial_buckets)]

    def __len__(self) -> int:
        return len(self.maps)

    def lookup_or_insert(self, map_: tuple[int, ...],
                         hint: int | None = None) -> tuple[int, bool]:
        self.stats.lookups += 1
        if self.strategy == "exhaustive":
            return self._lookup_exhaustive(map_, hint)
        fp = state_fingerprint(map_, self.ctx, self.fp_bits)
        self.stats.fingerprints_computed += 1
        if self.strategy == "fp":
            return self._lookup_fp(map_, fp)
        return self._lookup_hash(map_, fp)

    def _lookup_exhaustive(self, map_, hint):
        if hint is not None and hint < len(self.maps):
            self.stats.full_vector_comparisons += 1
            if self.maps[hint] == map_:
                return hint, False
        else:
            hint = -1
        for idx in range(len(self.maps) - 1, -1, -1):
            if idx == hint:
                continue
            self.stats.full_vector_comparisons += 1
            if self.maps[idx] == map_:
                return idx, False
        self.maps.append(map_)
        return len(self.maps) - 1, True

    def _lookup_fp(self, map_, fp):
        for idx, stored_fp in enumerate(self.fps):
            self.stats.fingerprint_comparisons += 1
            if stored_fp == fp:
                self.stats.full_vector_comparisons += 1
                if self.maps[idx] == map_:
                    return idx, False
        self.maps.append(map_)
        self.fps.append(fp)
        return len(self.maps) - 1, True

    def _lookup_hash(self, map_, fp):
        chain = self._buckets[fp & (self._n_buckets - 1)]
        for idx in chain:
            self.stats.fingerprint_comparisons += 1
            if self.fps[idx] == fp:
                self.stats.full_vector_comparisons += 1
                if self.maps[idx] == map_:
                    return idx, False
        idx = len(self.maps)
        self.maps.append(map_)
        self.fps.append(fp)
        chain.append(idx)
        self.stats.max_chain_length = max(self.stats.max_chain_length, len(chain))
        if len(self.maps) > 0.75 * self._n_buckets:
            self._resize()
        return idx, True

    def _resize(self):
        self._n_buckets *= 2
        buckets = [[] for _ in range(self._n_buckets)]
        mask = self._n_buckets - 1
        longest = 0
        for idx, fp in enumerate(self.fps):
            chain = buckets[fp & mask]
            chain.append(idx)
            longest = max(longest, len(chain))
        self._buckets = buckets
        self.stats.max_chain_length = longest


def finals_of(maps: list[tuple[int, ...]], dfa: Dfa) -> frozenset[int]:
    return frozenset(i for i, m in enumerate(maps) if m[dfa.start] in dfa.finals)


def build_sfa(dfa: Dfa, strategy: str = "hash",
              ctx: FingerprintContext | None = None,
              fp_bits: int = 64,
              state_budget: int = DEFAULT_STATE_BUDGET) -> tuple[Sfa, BuildStats]:
    """Worklist SFA construction: seed with the identity mapping, expand
    states FIFO, inserting unseen successor mappings until closed.

    Output (state set, transitions, finals) is identical across
    strategies; only the membership-test cost differs.
    """
    import time
    t0 = time.perf_counter_ns()
    stats = BuildStats()
    store = StateStore(strategy, ctx, fp_bits=fp_bits, stats=stats)
    identity = tuple(range(dfa.n_states))
    store.lookup_or_insert(identity)
    delta_s: list[list[int]] = []
    delta = dfa.delta
    codes = range(dfa.alphabet_size)
    # Per-symbol hint: a state's successor on symbol a frequently equals
    # the previously expanded state's successor on a.
    hints = [0] * dfa.alphabet_size
    cursor = 0
    while cursor < len(store.maps):
        f = store.maps[cursor]
        row = []
        for a in codes:
            succ = tuple(delta[q][a] for q in f)
            idx, _ = store.lookup_or_insert(succ, hint=hints[a])
            hints[a] = idx
            row.append(idx)
        delta_s.append(row)
        cursor += 1
        if len(store.maps) > state_budget:
            raise StateBudgetExceeded(
                f"more than {state_budget} SFA states (exponential growth)")
    stats.n_sfa_states = len(store.maps)
    stats.wall_time_ns = time.perf_counter_ns() - t0
    sfa = Sfa(states=[SfaState(m) for m in store.maps],
              delta_s=delta_s, start=0,
              finals_s=finals_of(store.maps, dfa),
              alphabet=dfa.alphabet, n_dfa_states=dfa.n_states)
    return sfa, stats


def predict_worst_case(alphabet_size: int, n_dfa_states: int,
                       n_sfa_states: int) -> float:
    """Worst-case element-comparison count of the exhaustive build:
    1/2 * |Sigma| * |Q| * |D_s| * (|D_s| + 3)."""
    return 0.5 * alphabet_size * n_dfa_states * n_sfa_states * (n_sfa_states + 3)


def canonical_form(sfa: Sfa):
    """Renumber states by sorted mapping vector so SFAs built under
    different strategies/schedules compare equal."""
    order = sorted(range(sfa.n_states), key=lambda i: sfa.states[i].map)
    rank = {old: new for new, old in enumerate(order)}
    maps = tuple(sfa.states[i].map for i in order)
    delta = tuple(tuple(rank[sfa.delta_s[i][a]] for a in range(len(sfa.alphabet)))
                  for i in order)
    finals = frozenset(rank[i] for i in sfa.finals_s)
    return maps, delta, rank[sfa.start], finals


def serialize_sfa(sfa: Sfa) -> str:
    """SFA text format: header, one line per state (mapping entries plus
    final marker), one line per transition.  Round-trips exactly."""
    lines = [f"sfa {sfa.n_states} {sfa.n_dfa_states} {''.join(sfa.alphabet)}"]
    for i, st in enumerate(sfa.states):
        marker = "F" if i in sfa.finals_s else "-"
        lines.append(f"{i} {' '.join(map(str, st.map))} {marker}")
    for i, row in enumerate(sfa.delta_s):
        for a, j in enumerate(row):
            lines.append(f"{i} {sfa.alphabet[a]} {j}")
    return "\n".join(lines) + "\n"


def parse_sfa(text: str) -> Sfa:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines())
             if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("sfa "):
        raise ValueError("missing sfa header")
    _, n_s, n_d, alpha = lines[0].split()
    n_states, n_dfa = int(n_s), int(n_d)
    alphabet = tuple(alpha)
    code_of = {g: i for i, g in enumerate(alphabet)}
    states: list[SfaState | None] = [None] * n_states
    finals = set()
    delta_s = [[-1] * len(alphabet) for _ in range(n_states)]
    for ln in lines[1:n_states + 1]:
        toks = ln.split()
        idx = int(toks[0])
        entries = tuple(int(t) for t in toks[1:-1])
        if len(entries) != n_dfa:
            raise ValueError(f"state {idx}: expected {n_dfa} entries")
        states[idx] = SfaState(entries)
        if toks[-1] == "F":
            finals.add(idx)
        elif toks[-1] != "-":
            raise ValueError(f"state {idx}: bad final marker {toks[-1]!r}")
    for ln in lines[n_states + 1:]:
        src, g, dst = ln.split()
        delta_s[int(src)][code_of[g]] = int(dst)
    if any(s is None for s in states):
        raise ValueError("missing state lines")
    if any(c < 0 or c >= n_states for row in delta_s for c in row):
        raise ValueError("incomplete or out-of-range SFA transitions")
    identity = tuple(range(n_dfa))
    start = next((i for i, s in enumerate(states) if s.map == identity), None)
    if start is None:
        raise ValueError("no identity-mapping state")
    return Sfa(states=states, delta_s=delta_s, start=start,
               finals_s=frozenset(finals), alphabet=alphabet,
               n_dfa_states=n_dfa)
