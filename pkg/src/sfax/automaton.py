"""DFA data model, Grail-style text I/O, validation and the sequential
matcher that serves as the reference semantics for everything else."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

try:
    import numba
    import numpy as np

    @numba.njit(cache=True)
    def _walk_dfa(delta, codes, state):  # pragma: no cover - jitted
        for i in range(codes.size):
            state = delta[state, codes[i]]
        return state

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


class GrailSyntaxError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class MatchOutcome:
    accepted: bool
    end_state: int


@dataclass
class Dfa:
    """Complete DFA with a dense row-major transition table.

    delta[q][a] is the successor of state q on alphabet index a.  States
    are dense 0-based ids; the alphabet is an ordered tuple of single
    printable glyphs.
    """

    n_states: int
    alphabet: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    start: int
    finals: frozenset[int]
    _code_of: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_code_of",
                           {g: i for i, g in enumerate(self.alphabet)})

    @property
    def alphabet_size(self) -> int:
        return len(self.alphabet)

    def code(self, glyph: str) -> int:
        try:
            return self._code_of[glyph]
        except KeyError:
            raise ValueError(f"symbol {glyph!r} not in alphabet") from None

    def encode(self, text: str) -> list[int]:
        code_of = self._code_of
        try:
            return [code_of[c] for c in text]
        except KeyError as exc:
            raise ValueError(f"symbol {exc.args[0]!r} not in alphabet") from None

    def delta_array(self):
        """Transition table as a cached int32 numpy array (fast-path use)."""
        import numpy as np
        arr = getattr(self, "_delta_arr", None)
        if arr is None:
            arr = np.array(self.delta, dtype=np.int32)
            object.__setattr__(self, "_delta_arr", arr)
        return arr


def dfa_step(dfa: Dfa, q: int, glyph: str) -> int:
    if not 0 <= q < dfa.n_states:
        raise ValueError(f"state {q} out of range")
    return dfa.delta[q][dfa.code(glyph)]


def dfa_match(dfa: Dfa, text: str) -> MatchOutcome:
    """Run the DFA over text from the start state.  This is the oracle
    every other matching path must agree with."""
    codes = dfa.encode(text)
    if _HAVE_NUMBA and len(codes) > 256:
        state = int(_walk_dfa(dfa.delta_array(),
                              np.asarray(codes, dtype=np.int32),
                              dfa.start))
    else:
        state = dfa.start
        delta = dfa.delta
        for code in codes:
            state = delta[state][code]
    return MatchOutcome(accepted=state in dfa.finals, end_state=state)


def validate_dfa(dfa: Dfa) -> list[str]:
    """Check all structural invariants; returns a list of violations
    (empty iff valid)."""
    problems = []
    n, asz = dfa.n_states, dfa.alphabet_size
    if n <= 0:
        problems.append("n_states must be positive")
    if len(set(dfa.alphabet)) != asz:
        problems.append("alphabet glyphs not unique")
    for g in dfa.alphabet:
        if len(g) != 1 or not g.isprintable() or g.isspace():
            problems.append(f"bad glyph {g!r}")
    if len(dfa.delta) != n:
        problems.append("delta row count != n_states")
    for q, row in enumerate(dfa.delta):
        if len(row) != asz:
            problems.append(f"state {q}: row length != alphabet size")
            continue
        for a, q2 in enumerate(row):
            if not 0 <= q2 < n:
                problems.append(f"delta[{q}][{dfa.alphabet[a]}] = {q2} out of range")
    if not 0 <= dfa.start < n:
        problems.append(f"start {dfa.start} out of range")
    for f in dfa.finals:
        if not 0 <= f < n:
            problems.append(f"final {f} out of range")
    return problems


def parse_grail(text: str) -> Dfa:
    """Parse a Grail-style automaton description.

    One item per line: ``(START) |- <id>`` exactly once, ``<id> <glyph>
    <id>`` per transition, ``<id> -| (FINAL)`` per final state.  ``#``
    lines are comments.  The alphabet is the sorted set of glyphs seen in
    transition lines; a state missing a transition on any alphabet glyph
    is an error.
    """
    start = None
    finals: set[int] = set()
    transitions: list[tuple[int, str, int]] = []
    max_state = -1

    def state_id(token: str, lineno: int) -> int:
        if not token.isdigit():
            raise GrailSyntaxError(lineno, f"bad state id {token!r}")
        return int(token)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise GrailSyntaxError(lineno, f"expected 3 tokens, got {len(tokens)}")
        a, b, c = tokens
        if a == "(START)" and b == "|-":
            if start is not None:
                raise GrailSyntaxError(lineno, "duplicate start line")
            start = state_id(c, lineno)
            max_state = max(max_state, start)
        elif b == "-|" and c == "(FINAL)":
            f = state_id(a, lineno)
            finals.add(f)
            max_state = max(max_state, f)
        else:
            src = state_id(a, lineno)
            dst = state_id(c, lineno)
            if len(b) != 1 or not b.isprintable():
                raise GrailSyntaxError(lineno, f"bad glyph {b!r}")
            transitions.append((src, b, dst))
            max_state = max(max_state, src, dst)

    if start is None:
        raise GrailSyntaxError(0, "missing (START) line")
    n = max_state + 1
    alphabet = tuple(sorted({g for _, g, _ in transitions}))
    code_of = {g: i for i, g in enumerate(alphabet)}
    table: list[list[int | None]] = [[None] * len(alphabet) for _ in range(n)]
    for src, g, dst in transitions:
        if table[src][code_of[g]] is not None:
            raise GrailSyntaxError(0, f"duplicate transition {src} {g}")
        table[src][code_of[g]] = dst
    for q in range(n):
        for a, g in enumerate(alphabet):
            if table[q][a] is None:
                raise GrailSyntaxError(0, f"state {q} has no transition on {g!r}")
    dfa = Dfa(n_states=n, alphabet=alphabet,
              delta=tuple(tuple(row) for row in table),  # type: ignore[arg-type]
              start=start, finals=frozenset(finals))
    problems = validate_dfa(dfa)
    if problems:
        raise GrailSyntaxError(0, "; ".join(problems))
    return dfa


def serialize_grail(dfa: Dfa) -> str:
    lines = [f"(START) |- {dfa.start}"]
    for q, row in enumerate(dfa.delta):
        for a, q2 in enumerate(row):
            lines.append(f"{q} {dfa.alphabet[a]} {q2}")
    for f in sorted(dfa.finals):
        lines.append(f"{f} -| (FINAL)")
    return "\n".join(lines) + "\n"


def random_dfa(rng: random.Random, n_states: int, alphabet: Iterable[str]) -> Dfa:
    """Uniform random complete DFA; used by verification and benchmarks."""
    alphabet = tuple(alphabet)
    delta = tuple(tuple(rng.randrange(n_states) for _ in alphabet)
                  for _ in range(n_states))
    finals = frozenset(q for q in range(n_states) if rng.random() < 0.5)
    return Dfa(n_states=n_states, alphabet=alphabet, delta=delta,
               start=rng.randrange(n_states), finals=finals)


# Running example: accepts strings containing "RG" over the
# 20-letter amino-acid alphabet.
AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"


def example_rg_dfa(alphabet: str = AMINO_ACIDS) -> Dfa:
    alphabet_t = tuple(sorted(alphabet))
    rows = []
    for q in range(3):
        row = []
        for g in alphabet_t:
            if q == 2:
                row.append(2)
            elif g == "R":
                row.append(1)
            elif g == "G" and q == 1:
                row.append(2)
            else:
                row.append(0)
        rows.append(tuple(row))
    return Dfa(n_states=3, alphabet=alphabet_t, delta=tuple(rows),
               start=0, finals=frozenset({2}))
