"""Random automata for fuzzing."""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .qfa import LEFT, QFA, RIGHT
from .words import Word


def random_qfa(rng: np.random.Generator, n_states: int, alphabet=("a", "b")) -> QFA:
    """Haar-random operators; at least one non-halting state, the rest split
    at random between accepting, rejecting and non-halting."""
    if n_states < 1:
        raise ValueError("need at least one state")
    states = tuple(f"s{i}" for i in range(n_states))
    role = rng.integers(0, 3, size=n_states)
    role[0] = 0
    ops = {s: unitary_group.rvs(n_states, random_state=rng) if n_states > 1 else np.eye(1)
           for s in (LEFT, *alphabet, RIGHT)}
    return QFA(
        states=states,
        alphabet=tuple(alphabet),
        start=states[0],
        accept=frozenset(q for q, r in zip(states, role) if r == 1),
        reject=frozenset(q for q, r in zip(states, role) if r == 2),
        ops=ops,
    )


def random_word(rng: np.random.Generator, alphabet, max_len: int) -> Word:
    n = int(rng.integers(0, max_len + 1))
    return tuple(alphabet[i] for i in rng.integers(0, len(alphabet), size=n))
