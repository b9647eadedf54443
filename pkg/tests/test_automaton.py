import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfax.automaton import (AMINO_ACIDS, Dfa, GrailSyntaxError, dfa_match,
                            dfa_step, example_rg_dfa, parse_grail, random_dfa,
                            serialize_grail, validate_dfa)

GOLDEN_GRAIL = serialize_grail(example_rg_dfa())

ONE_STATE = """\
(START) |- 0
0 a 0
0 -| (FINAL)
"""


def test_parse_golden_dfa(golden_dfa):
    parsed = parse_grail(GOLDEN_GRAIL)
    assert parsed == golden_dfa
    assert parsed.n_states == 3
    assert parsed.alphabet == tuple(sorted(AMINO_ACIDS))
    assert parsed.finals == {2}


def test_parse_one_state():
    dfa = parse_grail(ONE_STATE)
    assert dfa.n_states == 1
    assert dfa.start == 0
    assert dfa.finals == {0}


def test_parse_comments_and_blank_lines():
    dfa = parse_grail("# header\n\n" + ONE_STATE)
    assert dfa.n_states == 1


def test_parse_incomplete_delta_rejected():
    text = """\
(START) |- 0
0 a 1
0 b 0
1 a 0
1 -| (FINAL)
"""
    with pytest.raises(GrailSyntaxError, match="no transition"):
        parse_grail(text)


def test_parse_missing_start():
    with pytest.raises(GrailSyntaxError, match="START"):
        parse_grail("0 a 0\n")


def test_parse_bad_line_reports_number():
    with pytest.raises(GrailSyntaxError, match="line 2"):
        parse_grail("(START) |- 0\n0 a\n")


def test_round_trip_golden(golden_dfa):
    assert parse_grail(serialize_grail(golden_dfa)) == golden_dfa


def test_round_trip_one_state():
    dfa = parse_grail(ONE_STATE)
    assert parse_grail(serialize_grail(dfa)) == dfa


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_round_trip_random(seed):
    rng = random.Random(seed)
    dfa = random_dfa(rng, rng.randint(1, 8), "abcd"[: rng.randint(1, 4)])
    assert parse_grail(serialize_grail(dfa)) == dfa


def test_dfa_step_golden_rows(golden_dfa):
    assert dfa_step(golden_dfa, 0, "R") == 1
    assert dfa_step(golden_dfa, 1, "G") == 2
    assert dfa_step(golden_dfa, 2, "R") == 2
    assert dfa_step(golden_dfa, 0, "A") == 0


def test_dfa_step_rejects_bad_input(golden_dfa):
    with pytest.raises(ValueError):
        dfa_step(golden_dfa, 99, "R")
    with pytest.raises(ValueError):
        dfa_step(golden_dfa, 0, "?")


def test_dfa_match_rg(golden_dfa):
    out = dfa_match(golden_dfa, "RG")
    assert out.accepted and out.end_state == 2


def test_dfa_match_empty(golden_dfa):
    out = dfa_match(golden_dfa, "")
    assert not out.accepted and out.end_state == golden_dfa.start == 0


def test_dfa_match_ara(golden_dfa):
    # A->0, R->1, A->0 walking the transition table.
    out = dfa_match(golden_dfa, "ARA")
    assert not out.accepted and out.end_state == 0


def test_dfa_match_unknown_symbol(golden_dfa):
    with pytest.raises(ValueError):
        dfa_match(golden_dfa, "R?G")


def test_validate_ok(golden_dfa):
    assert validate_dfa(golden_dfa) == []


def test_validate_final_out_of_range(golden_dfa):
    bad = Dfa(golden_dfa.n_states, golden_dfa.alphabet, golden_dfa.delta,
              golden_dfa.start, frozenset({golden_dfa.n_states}))
    assert any("final" in v for v in validate_dfa(bad))


def test_validate_delta_out_of_range():
    bad = Dfa(2, ("a",), ((5,), (0,)), 0, frozenset())
    assert any("out of range" in v for v in validate_dfa(bad))
