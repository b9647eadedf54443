"""Simultaneous finite automata: fingerprint-accelerated construction
and chunked parallel matching."""

from .automaton import (Dfa, MatchOutcome, dfa_match, dfa_step, parse_grail,
                        serialize_grail, validate_dfa)
from .builder import (BuildStats, Sfa, SfaState, build_sfa, canonical_bytes,
                      canonical_form, parse_sfa, predict_worst_case,
                      serialize_sfa, sfa_successor)
from .gf2 import (DEFAULT_POLY, FingerprintContext, barrett_reduce, clmul,
                  collision_bound, fingerprint, is_irreducible,
                  poly_mod_longdiv, precompute_context)
from .matcher import compose, match_parallel, plan_chunks, sfa_run
from .parallel import (build_par_groups, build_par_mixed, build_par_symbols,
                       build_par_transposed, build_parallel,
                       distribute_symbols, plan_groups)
from .pattern import compile_pattern, compile_to_dfa, minimize, parse_prosite

__all__ = [name for name in dir() if not name.startswith("_")]
