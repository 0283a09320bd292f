"""Measure-many one-way quantum finite automata.

States are complex numpy vectors indexed like ``QFA.states``.  Operators act
on column vectors, so ``ops[letter] @ e_j`` is column ``j`` of the matrix.
Every letter read is a unitary step followed by a three-way measurement
(accept / reject / continue); only the non-halting part is carried forward,
without renormalisation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .words import Word, as_word, iter_words

LEFT = "kappa"
RIGHT = "dollar"

UNITARY_TOL = 1e-9
PROB_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QFA:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    start: str
    accept: frozenset[str]
    reject: frozenset[str]
    ops: dict[str, np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accept", frozenset(self.accept))
        object.__setattr__(self, "reject", frozenset(self.reject))
        ops = {}
        for k, m in self.ops.items():
            m = np.array(m, dtype=complex)
            m.setflags(write=False)
            ops[k] = m
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def working_alphabet(self) -> tuple[str, ...]:
        return (LEFT,) + self.alphabet + (RIGHT,)

    @property
    def nonhalting(self) -> tuple[str, ...]:
        return tuple(q for q in self.states if q not in self.accept and q not in self.reject)

    def index(self, state: str) -> int:
        return self.states.index(state)

    def _mask(self, names) -> np.ndarray:
        return np.array([q in names for q in self.states])

    @cached_property
    def acc_mask(self) -> np.ndarray:
        return self._mask(self.accept)

    @cached_property
    def rej_mask(self) -> np.ndarray:
        return self._mask(self.reject)

    @cached_property
    def non_mask(self) -> np.ndarray:
        return ~(self.acc_mask | self.rej_mask)

    def basis(self, state: str) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(state)] = 1.0
        return v

    def vector(self, amplitudes: dict[str, complex]) -> np.ndarray:
        """Build a state vector from ``{state name: amplitude}``."""
        v = np.zeros(self.dim, dtype=complex)
        for q, a in amplitudes.items():
            v[self.index(q)] = a
        return v

    def projected(self, letter: str) -> np.ndarray:
        """Matrix of V'_letter: the letter's unitary followed by projection onto E_non."""
        return self.ops[letter] * self.non_mask[:, None]


@dataclass(frozen=True)
class StepEvent:
    letter: str
    accepted: float
    rejected: float
    remaining: float


@dataclass(frozen=True)
class RunTrace:
    word: Word
    p_acc: float
    p_rej: float
    p_undecided: float
    state: np.ndarray
    events: tuple[StepEvent, ...] = field(default=())

    @property
    def verdict(self) -> str:
        if abs(self.p_acc - self.p_rej) <= PROB_TOL:
            return "tie"
        return "accept" if self.p_acc > self.p_rej else "reject"


def unitarity_defect(m: np.ndarray) -> float:
    """max-norm of U^dagger U - I."""
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def validate_qfa(qfa: QFA, tol: float = UNITARY_TOL) -> list[str]:
    """Return a list of problems with ``qfa``; an empty list means it is valid."""
    problems = []
    names = set(qfa.states)
    if len(names) != len(qfa.states):
        problems.append("duplicate state names")
    for label, group in (("start", {qfa.start}), ("accept", qfa.accept), ("reject", qfa.reject)):
        unknown = sorted(group - names)
        if unknown:
            problems.append(f"unknown state(s) in {label}: {unknown}")
    overlap = sorted(qfa.accept & qfa.reject)
    if overlap:
        problems.append(f"accepting and rejecting sets overlap: {overlap}")
    if not qfa.nonhalting:
        problems.append("degenerate: no non-halting states")
    for sym in (LEFT, RIGHT):
        if sym in qfa.alphabet:
            problems.append(f"endmarker {sym!r} appears in the input alphabet")
    for letter in qfa.working_alphabet:
        m = qfa.ops.get(letter)
        if m is None:
            problems.append(f"missing operator for {letter!r}")
            continue
        if m.shape != (qfa.dim, qfa.dim):
            problems.append(f"operator {letter!r} has shape {m.shape}, expected {(qfa.dim, qfa.dim)}")
            continue
        defect = unitarity_defect(m)
        if defect > tol:
            problems.append(f"operator {letter!r} is not unitary: |U^H U - I|_max = {defect:.3e}")
    extra = sorted(set(qfa.ops) - set(qfa.working_alphabet))
    if extra:
        problems.append(f"operators for letters outside the working alphabet: {extra}")
    return problems


def _check_letter(qfa: QFA, letter: str):
    if letter not in qfa.ops or letter not in qfa.working_alphabet:
        raise ValueError(f"unknown letter {letter!r}")


def _check_dim(qfa: QFA, psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (qfa.dim,):
        raise ValueError(f"state has shape {psi.shape}, automaton has {qfa.dim} states")
    return psi


def step_letter(qfa: QFA, psi: np.ndarray, letter: str) -> tuple[np.ndarray, float, float]:
    """Read one working-alphabet letter.

    Returns the non-halting part of ``V_letter psi`` together with the
    probability mass that was measured as accepting and as rejecting.
    """
    _check_letter(qfa, letter)
    psi = _check_dim(qfa, psi)
    out = qfa.ops[letter] @ psi
    weights = np.abs(out) ** 2
    d_acc = float(weights[qfa.acc_mask].sum())
    d_rej = float(weights[qfa.rej_mask].sum())
    return np.where(qfa.non_mask, out, 0), d_acc, d_rej


def apply_projected_word(qfa: QFA, psi: np.ndarray, word: Iterable[str]) -> np.ndarray:
    """V'_w psi for a word over the working alphabet (letters applied left to right)."""
    psi = _check_dim(qfa, psi)
    for letter in word:
        _check_letter(qfa, letter)
        psi = qfa.projected(letter) @ psi
    return psi


def _require_nonhalting(qfa: QFA, psi: np.ndarray, tol: float = PROB_TOL):
    leak = float(np.sum(np.abs(psi[~qfa.non_mask]) ** 2))
    if leak > tol:
        raise ValueError(f"state has weight {leak:.3e} on halting states")


def endmarker_acceptance(qfa: QFA, psi: np.ndarray) -> float:
    """Probability of acceptance when the right endmarker is read from ``psi``."""
    psi = _check_dim(qfa, psi)
    _require_nonhalting(qfa, psi)
    return step_letter(qfa, psi, RIGHT)[1]


def run_word(qfa: QFA, word: str | Sequence[str]) -> RunTrace:
    """Run ``kappa w dollar`` from the start state and accumulate the halting probabilities."""
    w = as_word(word, qfa.alphabet)
    psi = qfa.basis(qfa.start)
    p_acc = p_rej = 0.0
    events = []
    for letter in (LEFT, *w, RIGHT):
        psi, d_acc, d_rej = step_letter(qfa, psi, letter)
        p_acc += d_acc
        p_rej += d_rej
        rest = float(np.vdot(psi, psi).real)
        events.append(StepEvent(letter, d_acc, d_rej, rest))
    return RunTrace(w, p_acc, p_rej, events[-1].remaining, psi, tuple(events))


def acceptance_table(qfa: QFA, max_len: int) -> dict[Word, tuple[float, float, float]]:
    """(p_acc, p_rej, p_undecided) for every word of length <= max_len.

    Walks the word tree once, so prefixes are shared; the values agree with
    ``run_word`` word by word.
    """
    root, a0, r0 = step_letter(qfa, qfa.basis(qfa.start), LEFT)
    projected = {s: qfa.projected(s) for s in qfa.alphabet}
    acc, rej = qfa.acc_mask, qfa.rej_mask
    out: dict[Word, tuple[float, float, float]] = {}
    level = [((), root, a0, r0)]
    for depth in range(max_len + 1):
        nxt = []
        for w, psi, pa, pr in level:
            fin, da, dr = step_letter(qfa, psi, RIGHT)
            out[w] = (pa + da, pr + dr, float(np.vdot(fin, fin).real))
            if depth == max_len:
                continue
            for s in qfa.alphabet:
                full = qfa.ops[s] @ psi
                weights = np.abs(full) ** 2
                nxt.append((w + (s,), projected[s] @ psi,
                            pa + float(weights[acc].sum()),
                            pr + float(weights[rej].sum())))
        level = nxt
    return out


def recognition_margin(qfa: QFA, oracle, max_len: int) -> tuple[float, Word]:
    """Worst correct-decision probability over all words up to ``max_len``.

    A member counts with its acceptance probability, a non-member with its
    rejection probability.  Ties go to the shortest, then lexicographically
    first word (alphabet order).
    """
    from .dfa import dfa_accepts

    if tuple(oracle.alphabet) != qfa.alphabet and set(oracle.alphabet) != set(qfa.alphabet):
        raise ValueError("oracle alphabet differs from automaton alphabet")
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    table = acceptance_table(qfa, max_len)
    best, worst = np.inf, ()
    for w in iter_words(qfa.alphabet, max_len):
        pa, pr, _ = table[w]
        p = pa if dfa_accepts(oracle, w) else pr
        if p < best - PROB_TOL:
            best, worst = p, w
        elif p < best:
            best = p
    return float(best), worst
