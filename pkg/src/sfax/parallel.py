"""Parallel SFA construction over a shared insert-only state store.

Four static work-distribution schemes:

* ``par-symbols``    - each worker owns a block of symbols and scans the
                       whole published state list (needs P <= |Sigma|).
* ``par-groups``     - workers form groups of |Sigma|; group k owns the
                       states with id % g == k, one symbol per worker
                       (needs P to be a multiple of |Sigma|).
* ``par-mixed``      - full groups act like par-groups, the remainder
                       group like par-symbols on its state partition.
* ``par-transposed`` - coarse-grained: a worker claims a whole state and
                       expands it on every symbol via the transposed
                       transition-table access order.

All schemes produce the same SFA as the sequential builder up to
insertion-order renumbering.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from .automaton import Dfa
from .builder import (DEFAULT_STATE_BUDGET, BuildStats, Sfa, SfaState,
                      StateBudgetExceeded, finals_of, state_fingerprint)
from .gf2 import FingerprintContext

PARALLEL_SCHEMES = ("par-symbols", "par-groups", "par-mixed", "par-transposed")


@dataclass(frozen=True)
class SymbolDistribution:
    """Disjoint symbol blocks covering the alphabet, sizes within 1."""

    blocks: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class GroupPlan:
    """Worker grouping for P > |Sigma|: g groups; all but possibly the
    last have one worker per symbol; state id i belongs to group i % g."""

    g: int
    full_groups: int
    last_group_size: int


def distribute_symbols(alphabet_size: int, workers: int) -> SymbolDistribution:
    if not 1 <= workers <= alphabet_size:
        raise ValueError("need 1 <= workers <= alphabet size")
    base, extra = divmod(alphabet_size, workers)
    blocks = []
    at = 0
    for j in range(workers):
        size = base + (1 if j < extra else 0)
        blocks.append(tuple(range(at, at + size)))
        at += size
    return SymbolDistribution(tuple(blocks))


def plan_groups(alphabet_size: int, workers: int) -> GroupPlan:
    if workers <= alphabet_size:
        raise ValueError("grouping needs more workers than symbols")
    g = -(-workers // alphabet_size)
    full, rem = divmod(workers, alphabet_size)
    if rem == 0:
        return GroupPlan(g=g, full_groups=full, last_group_size=alphabet_size)
    return GroupPlan(g=g, full_groups=full, last_group_size=rem)


class ConcurrentStateStore:
    """Insert-only shared store of SFA mappings, keyed by fingerprint.

    The published prefix (ids < len(maps)) is immutable; lookups walk the
    fingerprint chain without locking (CPython list/dict operations are
    atomic under the GIL) and only a miss takes the short publish lock,
    which allocates the next dense id and links the chain.  A state's
    delta row exists before its id is published.
    """

    def __init__(self, dfa: Dfa, ctx: FingerprintContext, fp_bits: int = 64):
        self.dfa = dfa
        self.ctx = ctx
        self.fp_bits = fp_bits
        self.maps: list[tuple[int, ...]] = []
        self.fps: list[int] = []
        self.rows: list[list[int]] = []
        self._chains: dict[int, list[int]] = {}
        self._lock = threading.Lock()
        self.on_insert = None  # wake-up hook for parked workers

    @property
    def published(self) -> int:
        return len(self.maps)

    def lookup_or_insert(self, map_: tuple[int, ...]) -> tuple[int, bool]:
        # Fingerprint eagerly, once per candidate, before the membership test.
        fp = state_fingerprint(map_, self.ctx, self.fp_bits)
        chain = self._chains.get(fp)
        if chain is not None:
            for idx in chain:
                if self.maps[idx] == map_:
                    return idx, False
        with self._lock:
            chain = self._chains.setdefault(fp, [])
            for idx in chain:
                if self.maps[idx] == map_:
                    return idx, False
            idx = len(self.maps)
            self.rows.append([-1] * self.dfa.alphabet_size)
            self.fps.append(fp)
            self.maps.append(map_)     # publish: len(maps) grows last
            chain.append(idx)
        if self.on_insert is not None:
            self.on_insert()
        return idx, True

    def max_chain_length(self) -> int:
        return max((len(c) for c in self._chains.values()), default=0)


class _Termination:
    """All-idle detection: a worker parks when it runs out of assigned
    work; the build is done once every worker is parked and a re-check of
    every worker's pending-work predicate still comes up empty.  Parked
    workers have stable cursors, so the re-check is sound."""

    def __init__(self, n_workers: int):
        self.n_workers = n_workers
        self.has_work = [lambda: False] * n_workers
        self._idle = 0
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)
        self.done = False

    def wake(self):
        """Nudge parked workers after an insert or a failure."""
        with self._lock:
            self._cond.notify_all()

    def wait_at_frontier(self, wid: int) -> bool:
        """Park until new work appears or the build completes.  Returns
        True to resume scanning, False when the build is done."""
        with self._lock:
            self._idle += 1
            try:
                while True:
                    if self.done:
                        return False
                    if self.has_work[wid]():
                        return True
                    if (self._idle == self.n_workers
                            and not any(h() for h in self.has_work)):
                        self.done = True
                        self._cond.notify_all()
                        return False
                    # The timeout covers wake-ups lost between the
                    # predicate check and the wait.
                    self._cond.wait(timeout=0.001)
            finally:
                self._idle -= 1


class _WorkerFailure:
    def __init__(self):
        self.exc: BaseException | None = None
        self.lock = threading.Lock()

    def record(self, exc: BaseException):
        with self.lock:
            if self.exc is None:
                self.exc = exc


def _expand(store: ConcurrentStateStore, state_id: int,
            codes, budget: int) -> None:
    delta = store.dfa.delta
    f = store.maps[state_id]
    row = store.rows[state_id]
    for a in codes:
        succ = tuple(delta[q][a] for q in f)
        idx, _ = store.lookup_or_insert(succ)
        row[a] = idx
    if store.published > budget:
        raise StateBudgetExceeded(f"more than {budget} SFA states")


def _scan_worker(store, term, fail, codes, start, step, budget, counts, wid):
    """Scan published states with stride `step` from `start`, expanding
    each on this worker's symbols."""
    cursor = start
    term.has_work[wid] = lambda: cursor < store.published or fail.exc is not None
    try:
        while True:
            if cursor < store.published:
                _expand(store, cursor, codes, budget)
                counts[wid] += 1
                cursor += step
            elif not term.wait_at_frontier(wid):
                return
            if fail.exc is not None:
                return
    except BaseException as exc:
        fail.record(exc)
        term.done = True
        term.wake()


def _claim_worker(store, term, fail, claim, budget, counts, wid):
    """Coarse-grained worker: claim whole unexpanded states, expand each
    on all symbols via the transposed-table order."""
    dfa = store.dfa
    asz = dfa.alphabet_size
    delta = dfa.delta
    term.has_work[wid] = (
        lambda: claim.peek() < store.published or fail.exc is not None)
    try:
        while True:
            idx = claim()
            if idx is None:
                if not term.wait_at_frontier(wid):
                    return
                if fail.exc is not None:
                    return
                continue
            f = store.maps[idx]
            # Transpose: read one delta row per mapping entry, scatter it
            # across the per-symbol successor rows; each transposed row is
            # one successor mapping.
            trans = [[0] * len(f) for _ in range(asz)]
            for q, fq in enumerate(f):
                src = delta[fq]
                for a in range(asz):
                    trans[a][q] = src[a]
            row = store.rows[idx]
            for a in range(asz):
                sid, _ = store.lookup_or_insert(tuple(trans[a]))
                row[a] = sid
            counts[wid] += 1
            if store.published > budget:
                raise StateBudgetExceeded(f"more than {budget} SFA states")
    except BaseException as exc:
        fail.record(exc)
        term.done = True
        term.wake()


class _Claimer:
    def __init__(self, store: ConcurrentStateStore):
        self._store = store
        self._next = 0
        self._lock = threading.Lock()

    def __call__(self):
        with self._lock:
            if self._next < self._store.published:
                idx = self._next
                self._next += 1
                return idx
            return None

    def peek(self) -> int:
        return self._next


def _run_build(dfa: Dfa, ctx: FingerprintContext, workers, fp_bits,
               budget) -> tuple[Sfa, BuildStats]:
    """Seed the store with the identity mapping, run worker threads to
    completion, and assemble the finished SFA."""
    t0 = time.perf_counter_ns()
    store = workers.store
    store.lookup_or_insert(tuple(range(dfa.n_states)))
    threads = [threading.Thread(target=fn, daemon=True) for fn in workers.fns]
    if len(threads) == 1:
        threads[0].run()
    else:
        for t in threads:
            t.start()
        for t in threads:
            t.join()
    if workers.fail.exc is not None:
        raise workers.fail.exc
    # Final barrier: the table must be complete.
    assert all(c >= 0 for row in store.rows for c in row), "unset delta cell"
    stats = BuildStats(n_sfa_states=store.published,
                       fingerprints_computed=store.published,
                       max_chain_length=store.max_chain_length(),
                       wall_time_ns=time.perf_counter_ns() - t0,
                       worker_expansions=list(workers.counts))
    sfa = Sfa(states=[SfaState(m, fp) for m, fp in zip(store.maps, store.fps)],
              delta_s=store.rows, start=0,
              finals_s=finals_of(store.maps, dfa),
              alphabet=dfa.alphabet, n_dfa_states=dfa.n_states)
    return sfa, stats


class _WorkerSet:
    def __init__(self, store, n_workers):
        self.store = store
        self.term = _Termination(n_workers)
        store.on_insert = self.term.wake
        self.fail = _WorkerFailure()
        self.counts = [0] * n_workers
        self.fns = []


def build_par_symbols(dfa: Dfa, workers: int, ctx: FingerprintContext,
                      fp_bits: int = 64,
                      state_budget: int = DEFAULT_STATE_BUDGET):
    """Symbol-partition scheme: worker j expands every published state,
    but only on its symbol block B_j.  Requires workers <= |Sigma|."""
    dist = distribute_symbols(dfa.alphabet_size, workers)
    ws = _WorkerSet(ConcurrentStateStore(dfa, ctx, fp_bits), workers)
    for j, block in enumerate(dist.blocks):
        ws.fns.append(lambda j=j, block=block: _scan_worker(
            ws.store, ws.term, ws.fail, block, 0, 1, state_budget, ws.counts, j))
    return _run_build(dfa, ctx, ws, fp_bits, state_budget)


def build_par_groups(dfa: Dfa, workers: int, ctx: FingerprintContext,
                     fp_bits: int = 64,
                     state_budget: int = DEFAULT_STATE_BUDGET):
    """Grouping scheme: g = workers / |Sigma| groups; group k owns states
    with id % g == k, and each of its |Sigma| workers owns one symbol."""
    asz = dfa.alphabet_size
    if workers <= asz or workers % asz != 0:
        raise ValueError("grouping needs workers to be a multiple of the "
                         "alphabet size and larger than it")
    g = workers // asz
    ws = _WorkerSet(ConcurrentStateStore(dfa, ctx, fp_bits), workers)
    for k in range(g):
        for j in range(asz):
            wid = k * asz + j
            ws.fns.append(lambda k=k, j=j, wid=wid: _scan_worker(
                ws.store, ws.term, ws.fail, (j,), k, g, state_budget,
                ws.counts, wid))
    return _run_build(dfa, ctx, ws, fp_bits, state_budget)


def build_par_mixed(dfa: Dfa, workers: int, ctx: FingerprintContext,
                    fp_bits: int = 64,
                    state_budget: int = DEFAULT_STATE_BUDGET):
    """Mixture for workers > |Sigma| with a remainder: full groups run
    one-symbol-per-worker, the last (short) group splits the alphabet
    into blocks over its state partition."""
    asz = dfa.alphabet_size
    if workers <= asz or workers % asz == 0:
        raise ValueError("mixed scheme needs workers > alphabet size with "
                         "a remainder")
    plan = plan_groups(asz, workers)
    g = plan.g
    ws = _WorkerSet(ConcurrentStateStore(dfa, ctx, fp_bits), workers)
    wid = 0
    for k in range(plan.full_groups):
        for j in range(asz):
            ws.fns.append(lambda k=k, j=j, wid=wid: _scan_worker(
                ws.store, ws.term, ws.fail, (j,), k, g, state_budget,
                ws.counts, wid))
            wid += 1
    dist = distribute_symbols(asz, plan.last_group_size)
    for block in dist.blocks:
        ws.fns.append(lambda block=block, wid=wid: _scan_worker(
            ws.store, ws.term, ws.fail, block, g - 1, g, state_budget,
            ws.counts, wid))
        wid += 1
    assert wid == workers
    return _run_build(dfa, ctx, ws, fp_bits, state_budget)


def build_par_transposed(dfa: Dfa, workers: int, ctx: FingerprintContext,
                         fp_bits: int = 64,
                         state_budget: int = DEFAULT_STATE_BUDGET):
    """Coarse-grained scheme: workers claim whole unexpanded states and
    compute all successors at once via the transposed transition table."""
    if workers < 1:
        raise ValueError("need at least one worker")
    ws = _WorkerSet(ConcurrentStateStore(dfa, ctx, fp_bits), workers)
    claim = _Claimer(ws.store)
    for j in range(workers):
        ws.fns.append(lambda j=j: _claim_worker(
            ws.store, ws.term, ws.fail, claim, state_budget, ws.counts, j))
    return _run_build(dfa, ctx, ws, fp_bits, state_budget)


def build_parallel(dfa: Dfa, workers: int, ctx: FingerprintContext,
                   scheme: str = "auto", fp_bits: int = 64,
                   state_budget: int = DEFAULT_STATE_BUDGET):
    """Dispatch to a scheme; ``auto`` picks by worker count vs alphabet
    size (the static-distribution rule)."""
    asz = dfa.alphabet_size
    if scheme == "auto":
        if workers <= asz:
            scheme = "par-symbols"
        elif workers % asz == 0:
            scheme = "par-groups"
        else:
            scheme = "par-mixed"
    fn = {"par-symbols": build_par_symbols,
          "par-groups": build_par_groups,
          "par-mixed": build_par_mixed,
          "par-transposed": build_par_transposed}.get(scheme)
    if fn is None:
        raise ValueError(f"unknown scheme {scheme!r}")
    return fn(dfa, workers, ctx, fp_bits=fp_bits, state_budget=state_budget)
