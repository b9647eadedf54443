import pytest

from sfax.automaton import example_rg_dfa
from sfax.builder import build_sfa
from sfax.gf2 import precompute_context

# Golden data for the running "contains RG" example: the six mapping
# vectors of its SFA, its final state, and the transition relation on
# mapping vectors for the three symbol classes (R, G, anything else).
GOLDEN_MAPS = {
    (0, 1, 2),  # f0 identity
    (1, 1, 2),  # f1
    (0, 0, 2),  # f2
    (0, 2, 2),  # f3
    (2, 2, 2),  # f4 (accepting)
    (1, 2, 2),  # f5
}
GOLDEN_FINAL = (2, 2, 2)
GOLDEN_EDGES = {
    ((0, 1, 2), "R"): (1, 1, 2),
    ((0, 1, 2), "G"): (0, 2, 2),
    ((0, 1, 2), "*"): (0, 0, 2),
    ((1, 1, 2), "R"): (1, 1, 2),
    ((1, 1, 2), "G"): (2, 2, 2),
    ((1, 1, 2), "*"): (0, 0, 2),
    ((0, 0, 2), "R"): (1, 1, 2),
    ((0, 0, 2), "G"): (0, 0, 2),
    ((0, 0, 2), "*"): (0, 0, 2),
    ((0, 2, 2), "R"): (1, 2, 2),
    ((0, 2, 2), "G"): (0, 2, 2),
    ((0, 2, 2), "*"): (0, 2, 2),
    ((2, 2, 2), "R"): (2, 2, 2),
    ((2, 2, 2), "G"): (2, 2, 2),
    ((2, 2, 2), "*"): (2, 2, 2),
    ((1, 2, 2), "R"): (1, 2, 2),
    ((1, 2, 2), "G"): (2, 2, 2),
    ((1, 2, 2), "*"): (0, 2, 2),
}


@pytest.fixture(scope="session")
def ctx():
    return precompute_context()


@pytest.fixture(scope="session")
def golden_dfa():
    return example_rg_dfa()


@pytest.fixture(scope="session")
def golden_sfa(golden_dfa, ctx):
    sfa, _ = build_sfa(golden_dfa, "hash", ctx)
    return sfa


def assert_golden(sfa, dfa):
    """The SFA must match the golden example up to state numbering."""
    maps = {s.map for s in sfa.states}
    assert maps == GOLDEN_MAPS
    assert sfa.states[sfa.start].map == (0, 1, 2)
    assert {sfa.states[i].map for i in sfa.finals_s} == {GOLDEN_FINAL}
    for i, row in enumerate(sfa.delta_s):
        src = sfa.states[i].map
        for a, j in enumerate(row):
            glyph = sfa.alphabet[a]
            key = glyph if glyph in ("R", "G") else "*"
            assert sfa.states[j].map == GOLDEN_EDGES[src, key]
