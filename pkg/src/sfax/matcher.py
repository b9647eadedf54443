"""Chunked parallel membership testing: split the input, run the SFA on
each chunk independently, and compose the resulting mappings."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .automaton import Dfa, MatchOutcome
from .builder import Sfa, SfaState

try:
    import numba

    @numba.njit(cache=True)
    def _walk_sfa(delta, codes, state):  # pragma: no cover - jitted
        for i in range(codes.size):
            state = delta[state, codes[i]]
        return state

    @numba.njit(cache=True)
    def _walk_chunks(delta, codes, bounds, start):  # pragma: no cover
        out = np.empty(bounds.shape[0], dtype=np.int32)
        for c in range(bounds.shape[0]):
            state = start
            for i in range(bounds[c, 0], bounds[c, 1]):
                state = delta[state, codes[i]]
            out[c] = state
        return out

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


@dataclass(frozen=True)
class ChunkPlan:
    """Contiguous, non-overlapping (offset, length) pairs covering the
    input."""

    chunks: tuple[tuple[int, int], ...]


def plan_chunks(input_len: int, n_chunks: int) -> ChunkPlan:
    """Near-equal contiguous split; n_chunks is clamped to the input
    length (one empty chunk for empty input)."""
    if n_chunks < 1:
        raise ValueError("need at least one chunk")
    n_chunks = max(1, min(n_chunks, input_len))
    base, extra = divmod(input_len, n_chunks)
    chunks = []
    at = 0
    for i in range(n_chunks):
        size = base + (1 if i < extra else 0)
        chunks.append((at, size))
        at += size
    return ChunkPlan(tuple(chunks))


INVALID = 0xFF


def _encode(sfa: Sfa, text: str) -> np.ndarray:
    """Map the whole input to symbol codes in one validated pass."""
    table = getattr(sfa, "_encode_table", None)
    if table is None:
        cells = [INVALID] * 256
        for i, g in enumerate(sfa.alphabet):
            cells[ord(g)] = i
        table = bytes(cells)
        sfa._encode_table = table
    try:
        raw = text.encode("latin-1").translate(table)
    except UnicodeEncodeError:
        raise ValueError("input contains symbols outside the alphabet") from None
    bad = raw.find(INVALID)
    if bad >= 0:
        raise ValueError(f"symbol {text[bad]!r} not in alphabet")
    return np.frombuffer(raw, dtype=np.uint8)


def _run_codes(sfa: Sfa, codes: np.ndarray, start: int) -> int:
    if _HAVE_NUMBA and codes.size > 256:
        return int(_walk_sfa(sfa.delta_array(), codes, start))
    state = start
    delta = sfa.delta_s
    for code in codes:
        state = delta[state][code]
    return state


def sfa_run(sfa: Sfa, chunk: str) -> int:
    """SFA state id reached from the start (identity) state on chunk."""
    return _run_codes(sfa, _encode(sfa, chunk), sfa.start)


def compose(first: SfaState, second: SfaState) -> SfaState:
    """Mapping composition: apply first, then second."""
    if len(first.map) != len(second.map):
        raise ValueError("dimension mismatch")
    smap = second.map
    return SfaState(tuple(smap[q] for q in first.map))


def match_parallel(sfa: Sfa, dfa: Dfa, text: str, n_chunks: int,
                   parallel: bool = True) -> MatchOutcome:
    """Membership test equal to dfa_match for every input and chunking.

    The input is split into near-equal chunks, each run through the SFA
    from its start state (concurrently when ``parallel``), and the chunk
    mappings are folded left-to-right by composition; the end state is
    the folded mapping evaluated at the DFA start state.
    """
    if sfa.n_dfa_states != dfa.n_states or sfa.alphabet != dfa.alphabet:
        raise ValueError("SFA does not match the DFA")
    codes = _encode(sfa, text)
    plan = plan_chunks(len(codes), n_chunks)
    if parallel and len(plan.chunks) > 1:
        pieces = [codes[off:off + ln] for off, ln in plan.chunks]
        with ThreadPoolExecutor(max_workers=len(pieces)) as pool:
            ids = list(pool.map(lambda c: _run_codes(sfa, c, sfa.start), pieces))
    elif _HAVE_NUMBA and len(codes) > 256:
        bounds = np.array([(off, off + ln) for off, ln in plan.chunks],
                          dtype=np.int64)
        ids = [int(i) for i in _walk_chunks(sfa.delta_array(), codes, bounds,
                                            sfa.start)]
    else:
        ids = [_run_codes(sfa, codes[off:off + ln], sfa.start)
               for off, ln in plan.chunks]
    folded = sfa.states[ids[0]]
    for sid in ids[1:]:
        folded = compose(folded, sfa.states[sid])
    end = folded.map[dfa.start]
    return MatchOutcome(accepted=end in dfa.finals, end_state=end)
