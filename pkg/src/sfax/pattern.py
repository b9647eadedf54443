"""PROSITE-subset pattern frontend: parse a pattern, compile it through
a Thompson NFA and subset construction to a minimal complete DFA over
the 20-letter amino-acid alphabet."""

from __future__ import annotations

from dataclasses import dataclass

from .automaton import AMINO_ACIDS, Dfa


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class Literal:
    glyph: str


@dataclass(frozen=True)
class AnyOf:
    glyphs: frozenset[str]


@dataclass(frozen=True)
class NoneOf:
    glyphs: frozenset[str]


@dataclass(frozen=True)
class Wildcard:
    pass


@dataclass(frozen=True)
class Repeat:
    element: object
    min: int
    max: int


@dataclass(frozen=True)
class AnchorStart:
    pass


@dataclass(frozen=True)
class AnchorEnd:
    pass


@dataclass(frozen=True)
class PatternAst:
    elements: tuple


def parse_prosite(pattern: str, alphabet: str = AMINO_ACIDS) -> PatternAst:
    """Parse the supported PROSITE subset: elements separated by ``-``,
    ``x`` wildcard, ``[..]`` class, ``{..}`` negated class, ``(n)`` or
    ``(n,m)`` repetition, optional ``<``/``>`` anchors, optional final
    ``.``."""
    text = pattern.strip()
    if text.endswith("."):
        text = text[:-1]
    if not text:
        raise PatternError("empty pattern")
    elements: list[object] = []
    if text.startswith("<"):
        elements.append(AnchorStart())
        text = text[1:]
    end_anchor = False
    if text.endswith(">"):
        end_anchor = True
        text = text[:-1]
    if not text:
        raise PatternError("pattern has anchors only")
    alpha = set(alphabet)
    for part in text.split("-"):
        if not part:
            raise PatternError("empty element (stray '-')")
        elem, rest = _parse_atom(part, alpha)
        if rest:
            elem = _parse_repeat(elem, rest)
        elements.append(elem)
    if end_anchor:
        elements.append(AnchorEnd())
    return PatternAst(tuple(elements))


def _parse_atom(part: str, alpha: set[str]):
    if part[0] == "[":
        close = part.find("]")
        if close < 0:
            raise PatternError(f"unclosed '[' in {part!r}")
        glyphs = part[1:close]
        if not glyphs:
            raise PatternError("empty class")
        _check_glyphs(glyphs, alpha)
        return AnyOf(frozenset(glyphs)), part[close + 1:]
    if part[0] == "{":
        close = part.find("}")
        if close < 0:
            raise PatternError(f"unclosed '{{' in {part!r}")
        glyphs = part[1:close]
        if not glyphs:
            raise PatternError("empty negated class")
        _check_glyphs(glyphs, alpha)
        if len(set(glyphs)) >= len(alpha):
            raise PatternError("negated class excludes the whole alphabet")
        return NoneOf(frozenset(glyphs)), part[close + 1:]
    glyph = part[0]
    if glyph == "x":
        return Wildcard(), part[1:]
    if glyph not in alpha:
        raise PatternError(f"glyph {glyph!r} not in alphabet")
    return Literal(glyph), part[1:]


def _check_glyphs(glyphs: str, alpha: set[str]):
    for g in glyphs:
        if g not in alpha:
            raise PatternError(f"glyph {g!r} not in alphabet")


def _parse_repeat(elem, rest: str):
    if not (rest.startswith("(") and rest.endswith(")")):
        raise PatternError(f"trailing junk {rest!r}")
    body = rest[1:-1]
    try:
        if "," in body:
            lo_s, hi_s = body.split(",")
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(body)
    except ValueError:
        raise PatternError(f"bad repetition {rest!r}") from None
    if lo < 0 or hi < lo:
        raise PatternError(f"bad repetition bounds {rest!r}")
    return Repeat(elem, lo, hi)


class Nfa:
    """Thompson-style NFA: epsilon edges plus glyph-labeled edges."""

    def __init__(self):
        self.eps: list[list[int]] = []
        self.labeled: list[dict[str, list[int]]] = []
        self.start = 0
        self.finals: set[int] = set()

    @property
    def n_states(self) -> int:
        return len(self.eps)

    def add_state(self) -> int:
        self.eps.append([])
        self.labeled.append({})
        return len(self.eps) - 1

    def add_eps(self, a: int, b: int):
        self.eps[a].append(b)

    def add_edge(self, a: int, glyph: str, b: int):
        self.labeled[a].setdefault(glyph, []).append(b)


DEFAULT_NFA_BUDGET = 10 ** 6


def _element_glyphs(elem, alphabet: tuple[str, ...]) -> tuple[str, ...]:
    if isinstance(elem, Literal):
        return (elem.glyph,)
    if isinstance(elem, AnyOf):
        return tuple(g for g in alphabet if g in elem.glyphs)
    if isinstance(elem, NoneOf):
        return tuple(g for g in alphabet if g not in elem.glyphs)
    if isinstance(elem, Wildcard):
        return alphabet
    raise PatternError(f"unsupported element {elem!r}")


def ast_to_nfa(ast: PatternAst, alphabet: tuple[str, ...],
               budget: int = DEFAULT_NFA_BUDGET) -> Nfa:
    """Build the NFA for (Sigma* unless start-anchored) pattern
    (Sigma* unless end-anchored)."""
    elements = list(ast.elements)
    anchored_start = bool(elements) and isinstance(elements[0], AnchorStart)
    if anchored_start:
        elements.pop(0)
    anchored_end = bool(elements) and isinstance(elements[-1], AnchorEnd)
    if anchored_end:
        elements.pop()
    nfa = Nfa()
    cur = nfa.add_state()
    nfa.start = cur
    if not anchored_start:
        for g in alphabet:
            nfa.add_edge(cur, g, cur)

    def emit(elem, cur: int) -> int:
        if nfa.n_states > budget:
            raise PatternError("pattern expands beyond the state budget")
        if isinstance(elem, Repeat):
            for _ in range(elem.min):
                cur = emit(elem.element, cur)
            skips = [cur]
            for _ in range(elem.max - elem.min):
                cur = emit(elem.element, cur)
                skips.append(cur)
            out = nfa.add_state()
            for s in skips[:-1]:
                nfa.add_eps(s, out)
            nfa.add_eps(cur, out)
            return out
        nxt = nfa.add_state()
        for g in _element_glyphs(elem, alphabet):
            nfa.add_edge(cur, g, nxt)
        return nxt

    for elem in elements:
        cur = emit(elem, cur)
    nfa.finals = {cur}
    if not anchored_end:
        for g in alphabet:
            nfa.add_edge(cur, g, cur)
    return nfa


def _eps_closure(nfa: Nfa, states: frozenset[int]) -> frozenset[int]:
    stack = list(states)
    seen = set(states)
    while stack:
        s = stack.pop()
        for t in nfa.eps[s]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def nfa_to_dfa(nfa: Nfa, alphabet: tuple[str, ...]) -> Dfa:
    """Classical subset construction; the result is complete via an
    implicit dead state for empty move sets."""
    start = _eps_closure(nfa, frozenset({nfa.start}))
    index = {start: 0}
    worklist = [start]
    rows = []
    while worklist:
        cur = worklist.pop(0)
        row = []
        for g in alphabet:
            moved = frozenset(t for s in cur for t in nfa.labeled[s].get(g, ()))
            nxt = _eps_closure(nfa, moved)
            if nxt not in index:
                index[nxt] = len(index)
                worklist.append(nxt)
            row.append(index[nxt])
        rows.append(row)
    finals = frozenset(i for subset, i in index.items()
                       if subset & nfa.finals)
    return Dfa(n_states=len(rows), alphabet=alphabet,
               delta=tuple(tuple(r) for r in rows), start=0, finals=finals)


def minimize(dfa: Dfa) -> Dfa:
    """Minimal language-equivalent complete DFA via partition refinement
    (after trimming unreachable states).  Idempotent."""
    reachable = {dfa.start}
    stack = [dfa.start]
    while stack:
        q = stack.pop()
        for q2 in dfa.delta[q]:
            if q2 not in reachable:
                reachable.add(q2)
                stack.append(q2)
    states = sorted(reachable)
    finals = dfa.finals & reachable
    # Moore refinement on the reachable part.
    block = {q: (1 if q in finals else 0) for q in states}
    n_blocks = 2 if finals and len(finals) < len(states) else 1
    if n_blocks == 1:
        block = {q: 0 for q in states}
    while True:
        signature = {q: (block[q],) + tuple(block[dfa.delta[q][a]]
                                            for a in range(dfa.alphabet_size))
                     for q in states}
        renumber: dict[tuple, int] = {}
        new_block = {}
        for q in states:
            sig = signature[q]
            if sig not in renumber:
                renumber[sig] = len(renumber)
            new_block[q] = renumber[sig]
        if len(renumber) == n_blocks:
            break
        block = new_block
        n_blocks = len(renumber)
    # Quotient automaton, numbered by BFS from the start block for a
    # stable result.
    order = []
    seen = set()
    queue = [block[dfa.start]]
    rep = {}
    for q in states:
        rep.setdefault(block[q], q)
    while queue:
        b = queue.pop(0)
        if b in seen:
            continue
        seen.add(b)
        order.append(b)
        q = rep[b]
        for a in range(dfa.alphabet_size):
            queue.append(block[dfa.delta[q][a]])
    new_id = {b: i for i, b in enumerate(order)}
    rows = []
    for b in order:
        q = rep[b]
        rows.append(tuple(new_id[block[dfa.delta[q][a]]]
                          for a in range(dfa.alphabet_size)))
    new_finals = frozenset(new_id[block[q]] for q in finals)
    return Dfa(n_states=len(order), alphabet=dfa.alphabet,
               delta=tuple(rows), start=new_id[block[dfa.start]],
               finals=new_finals)


def compile_to_dfa(ast: PatternAst, alphabet: str = AMINO_ACIDS,
                   budget: int = DEFAULT_NFA_BUDGET) -> Dfa:
    """Pattern AST -> Thompson NFA -> subset construction -> minimal
    complete DFA.  Unanchored patterns accept every string containing an
    occurrence."""
    alpha = tuple(sorted(alphabet))
    nfa = ast_to_nfa(ast, alpha, budget=budget)
    return minimize(nfa_to_dfa(nfa, alpha))


def compile_pattern(pattern: str, alphabet: str = AMINO_ACIDS) -> Dfa:
    return compile_to_dfa(parse_prosite(pattern, alphabet), alphabet)
