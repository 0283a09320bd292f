"""Measure-many quantum finite automata: simulation, closure constructions,
forbidden-pattern checks on DFAs, and non-halting subspace analysis."""

from .qfa import (QFA, LEFT, RIGHT, RunTrace, acceptance_table, apply_projected_word,
                  endmarker_acceptance, recognition_margin, run_word, step_letter, validate_qfa)
from .dfa import (DFA, T12Report, build_g1, build_g2, build_g3, build_ln, check_t12,
                  dfa_accepts, dfa_combine, dfa_complement, dfa_equivalent, dfa_minimize)
from .constructions import (ProbabilityPoint, UnionWeights, build_k2, build_k3, complement_qfa,
                            parity_qfa, probabilistic_union, probability_points,
                            separating_line, union_weights)
from .analysis import (DecompositionReport, SubspaceBasis, contraction_estimate,
                       decompose_nonhalting, measurement_distribution, split_state,
                       tv_distance, vanish_word_search, verify_invariance)
from .words import iter_words as generate_corpus

__version__ = "0.1.0"
