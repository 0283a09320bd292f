"""Deterministic automata: language oracles, minimisation, products, and the
forbidden-pattern check on minimal automata."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .words import Word, as_word


@dataclass(frozen=True, eq=False)
class DFA:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    delta: dict[tuple[str, str], str]
    start: str
    accept: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accept", frozenset(self.accept))
        object.__setattr__(self, "delta", dict(self.delta))
        names = set(self.states)
        if self.start not in names:
            raise ValueError(f"start state {self.start!r} is not a state")
        if not self.accept <= names:
            raise ValueError(f"accepting states {sorted(self.accept - names)} are not states")
        for q in self.states:
            for a in self.alphabet:
                target = self.delta.get((q, a))
                if target is None:
                    raise ValueError(f"transition from {q!r} on {a!r} is missing")
                if target not in names:
                    raise ValueError(f"transition {q!r} --{a}--> {target!r} leaves the state set")

    def run(self, word: Iterable[str], state: str | None = None) -> str:
        q = self.start if state is None else state
        for a in word:
            q = self.delta[q, a]
        return q

    def reachable(self, state: str | None = None) -> list[str]:
        """States reachable from ``state`` (default: start), in BFS order."""
        src = self.start if state is None else state
        seen, queue = [src], deque([src])
        while queue:
            q = queue.popleft()
            for a in self.alphabet:
                r = self.delta[q, a]
                if r not in seen:
                    seen.append(r)
                    queue.append(r)
        return seen

    @classmethod
    def from_table(cls, alphabet, table: dict[str, dict[str, str]], start: str, accept) -> DFA:
        delta = {(q, a): r for q, row in table.items() for a, r in row.items()}
        return cls(tuple(table), tuple(alphabet), delta, start, frozenset(accept))

    def table(self) -> dict[str, dict[str, str]]:
        return {q: {a: self.delta[q, a] for a in self.alphabet} for q in self.states}


def dfa_accepts(dfa: DFA, word: str | Sequence[str]) -> bool:
    return dfa.run(as_word(word, dfa.alphabet)) in dfa.accept


def _require_same_alphabet(a: DFA, b: DFA):
    if set(a.alphabet) != set(b.alphabet):
        raise ValueError(f"alphabets differ: {a.alphabet} vs {b.alphabet}")


def dfa_minimize(dfa: DFA) -> DFA:
    """Drop unreachable states and merge equivalent ones (Moore refinement).

    Each merged class is named after its first member in the original state
    order, so witnesses stay readable against the input automaton.
    """
    order = {q: i for i, q in enumerate(dfa.states)}
    live = sorted(dfa.reachable(), key=order.__getitem__)
    block = {q: int(q in dfa.accept) for q in live}
    while True:
        signature = {q: (block[q],) + tuple(block[dfa.delta[q, a]] for a in dfa.alphabet) for q in live}
        ids: dict[tuple, int] = {}
        refined = {q: ids.setdefault(signature[q], len(ids)) for q in live}
        stable = len(ids) == len(set(block.values()))
        block = refined
        if stable:
            break
    rep: dict[int, str] = {}
    for q in live:
        rep.setdefault(block[q], q)
    states = tuple(rep[b] for b in sorted(rep, key=lambda b: order[rep[b]]))
    delta = {(q, a): rep[block[dfa.delta[q, a]]] for q in states for a in dfa.alphabet}
    accept = frozenset(q for q in states if q in dfa.accept)
    return DFA(states, dfa.alphabet, delta, rep[block[dfa.start]], accept)


_OPS = {
    "union": lambda x, y: x or y,
    "intersection": lambda x, y: x and y,
    "symmetric-difference": lambda x, y: x != y,
    "difference": lambda x, y: x and not y,
}


def dfa_combine(a: DFA, b: DFA, op: str) -> DFA:
    """Product automaton over the reachable pairs; acceptance by Boolean ``op``."""
    _require_same_alphabet(a, b)
    try:
        rule = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}; expected one of {sorted(_OPS)}") from None

    def name(p, r):
        return f"({p},{r})"

    start = (a.start, b.start)
    seen, queue, delta = [start], deque([start]), {}
    while queue:
        p, r = queue.popleft()
        for x in a.alphabet:
            nxt = (a.delta[p, x], b.delta[r, x])
            delta[name(p, r), x] = name(*nxt)
            if nxt not in seen:
                seen.append(nxt)
                queue.append(nxt)
    accept = frozenset(name(p, r) for p, r in seen if rule(p in a.accept, r in b.accept))
    return DFA(tuple(name(*s) for s in seen), a.alphabet, delta, name(*start), accept)


def dfa_complement(dfa: DFA) -> DFA:
    return DFA(dfa.states, dfa.alphabet, dfa.delta, dfa.start, frozenset(dfa.states) - dfa.accept)


def dfa_equivalent(a: DFA, b: DFA) -> tuple[bool, Word | None]:
    """Language equality, with the shortest (then lexicographically first)
    distinguishing word when the languages differ."""
    _require_same_alphabet(a, b)
    start = (a.start, b.start)
    parent: dict[tuple[str, str], tuple] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, r = pair
        if (p in a.accept) != (r in b.accept):
            return False, _unwind(parent, pair)
        for x in a.alphabet:
            nxt = (a.delta[p, x], b.delta[r, x])
            if nxt not in parent:
                parent[nxt] = (pair, x)
                queue.append(nxt)
    return True, None


def _unwind(parent: dict, node) -> Word:
    word = []
    while parent[node] is not None:
        node, letter = parent[node]
        word.append(letter)
    return tuple(reversed(word))


def _bfs_word(dfa: DFA, src, goal, step) -> Word | None:
    parent = {src: None}
    queue = deque([src])
    while queue:
        node = queue.popleft()
        if node == goal:
            return _unwind(parent, node)
        for x in dfa.alphabet:
            nxt = step(node, x)
            if nxt not in parent:
                parent[nxt] = (node, x)
                queue.append(nxt)
    return None


def is_all_accepting(dfa: DFA, q: str) -> bool:
    return all(r in dfa.accept for r in dfa.reachable(q))


def is_all_rejecting(dfa: DFA, q: str) -> bool:
    return not any(r in dfa.accept for r in dfa.reachable(q))


@dataclass(frozen=True)
class T12Report:
    """Outcome of the forbidden-pattern search on a minimal automaton.

    ``q1, q2, x`` witness conditions 1-4 (``q1 != q2``, ``q1 -x-> q2``,
    ``q2 -x-> q2``, ``q2`` neither all-accepting nor all-rejecting); ``y``
    witnesses condition 5 (``q2 -y-> q1``).  All four are None when no pair
    qualifies.
    """

    dfa: DFA
    q1: str | None
    q2: str | None
    x: Word | None
    y: Word | None

    @property
    def holds_1_to_4(self) -> bool:
        return self.x is not None

    @property
    def holds_1_to_5(self) -> bool:
        return self.x is not None and self.y is not None

    @property
    def conditions(self) -> dict[int, bool]:
        if self.x is None:
            return {i: False for i in range(1, 6)}
        d = self.dfa
        return {
            1: self.q1 != self.q2,
            2: d.run(self.x, self.q1) == self.q2,
            3: d.run(self.x, self.q2) == self.q2,
            4: not (is_all_accepting(d, self.q2) or is_all_rejecting(d, self.q2)),
            5: self.y is not None and d.run(self.y, self.q2) == self.q1,
        }

    @property
    def conclusion(self) -> str:
        if self.holds_1_to_5:
            return "not recognizable by any 1-way QFA"
        if self.holds_1_to_4:
            return "not recognizable with probability 7/9+eps"
        return "pattern absent; no conclusion"


def check_t12(dfa: DFA) -> T12Report:
    """Search the minimal automaton of ``dfa`` for the forbidden pattern.

    Pairs that also satisfy condition 5 win; among the rest, the shortest
    ``x`` wins, then lexicographic ``x``, then state order of ``(q1, q2)``.
    """
    m = dfa_minimize(dfa)
    rank = {a: i for i, a in enumerate(m.alphabet)}
    best = None
    for i2, q2 in enumerate(m.states):
        if is_all_accepting(m, q2) or is_all_rejecting(m, q2):
            continue
        for i1, q1 in enumerate(m.states):
            if q1 == q2:
                continue
            x = _bfs_word(m, (q1, q2), (q2, q2),
                          lambda node, a: (m.delta[node[0], a], m.delta[node[1], a]))
            if x is None:
                continue
            y = _bfs_word(m, q2, q1, lambda node, a: m.delta[node, a])
            key = (y is None, len(x), [rank[a] for a in x], i1, i2)
            if best is None or key < best[0]:
                best = (key, q1, q2, x, y)
    if best is None:
        return T12Report(m, None, None, None, None)
    _, q1, q2, x, y = best
    return T12Report(m, q1, q2, x, y)


# Fixture automata.  The regular expressions in the source print the group
# "(b*ab*a)" without its star; these follow the drawn automata instead, i.e.
# after the first b an odd number of a's.

_AB = ("a", "b")


def build_g1() -> DFA:
    return DFA.from_table(_AB, {
        "q1": {"a": "q1", "b": "q2"},
        "q2": {"a": "q3", "b": "q2"},
        "q3": {"a": "q2", "b": "q3"},
    }, "q1", {"q1", "q3"})


def _g23(start: str) -> DFA:
    return DFA.from_table(_AB, {
        "q1": {"a": "q4", "b": "q2"},
        "q2": {"a": "q3", "b": "q2"},
        "q3": {"a": "q2", "b": "q3"},
        "q4": {"a": "q1", "b": "q5"},
        "q5": {"a": "q5", "b": "q5"},
    }, start, {"q1", "q3"})


def build_g2() -> DFA:
    return _g23("q1")


def build_g3() -> DFA:
    return _g23("q4")


def build_ln(n: int) -> DFA:
    """Minimal DFA of a1* a2* ... an*.

    State ``s{i}`` means the last letter read was a_i (``s1`` also covers the
    empty prefix).  For n = 1 the language is everything and no sink is needed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    letters = tuple(f"a{i}" for i in range(1, n + 1))
    table = {}
    for i in range(1, n + 1):
        table[f"s{i}"] = {f"a{j}": (f"s{j}" if j >= i else "sink") for j in range(1, n + 1)}
    if n > 1:
        table["sink"] = {a: "sink" for a in letters}
    return DFA.from_table(letters, table, "s1", {f"s{i}" for i in range(1, n + 1)})


def even_a_dfa() -> DFA:
    """Words over {a, b} with an even number of a's."""
    return DFA.from_table(_AB, {
        "even": {"a": "odd", "b": "even"},
        "odd": {"a": "even", "b": "odd"},
    }, "even", {"even"})
