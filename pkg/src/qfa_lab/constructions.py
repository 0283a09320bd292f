"""Concrete automata and the Boolean-combination constructions built from them."""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .dfa import DFA, dfa_accepts
from .qfa import LEFT, QFA, RIGHT, acceptance_table, validate_qfa
from .words import Word, iter_words

_S13, _S23, _S12 = sqrt(1 / 3), sqrt(2 / 3), sqrt(1 / 2)

# Rows 3-4 of the left-endmarker matrix: the printed fourth row
# (sqrt(2/3), sqrt(1/3)) is not orthogonal to the third; it must be
# (sqrt(1/3), sqrt(2/3)) so that q4 goes to sqrt(2/3)|q4> + sqrt(1/3)|q3>.
_V_KAPPA = [
    [_S23, _S13, 0, 0, 0, 0, 0, 0],
    [_S13, -_S23, 0, 0, 0, 0, 0, 0],
    [0, 0, -_S23, _S13, 0, 0, 0, 0],
    [0, 0, _S13, _S23, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
]
_V_A = [
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
]
_V_B = [
    [0, 0, 0, 0, _S12, _S12, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [_S12, 0, 0, 0, 0.5, -0.5, 0, 0],
    [_S12, 0, 0, 0, -0.5, 0.5, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
]
_V_DOLLAR = [
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
]


def _k(start: str) -> QFA:
    return QFA(
        states=tuple(f"q{i}" for i in range(1, 9)),
        alphabet=("a", "b"),
        start=start,
        accept=frozenset({"q5", "q8"}),
        reject=frozenset({"q6", "q7"}),
        ops={LEFT: _V_KAPPA, "a": _V_A, "b": _V_B, RIGHT: _V_DOLLAR},
    )


def build_k2() -> QFA:
    return _k("q1")


def build_k3() -> QFA:
    return _k("q4")


def parity_qfa() -> QFA:
    """Reversible automaton for "even number of a's" over {a, b}.

    Two non-halting states track the parity; the right endmarker swaps them
    with an accepting and a rejecting state.  No superposition ever arises,
    so it decides every word with probability 1.
    """
    swap_a = np.eye(4)[[1, 0, 2, 3]]
    end = np.eye(4)[[2, 3, 0, 1]]
    return QFA(
        states=("even", "odd", "acc", "rej"),
        alphabet=("a", "b"),
        start="even",
        accept=frozenset({"acc"}),
        reject=frozenset({"rej"}),
        ops={LEFT: np.eye(4), "a": swap_a, "b": np.eye(4), RIGHT: end},
    )


def complement_qfa(qfa: QFA) -> QFA:
    """Same automaton with accepting and rejecting states exchanged."""
    return QFA(qfa.states, qfa.alphabet, qfa.start, qfa.reject, qfa.accept, qfa.ops)


@dataclass(frozen=True)
class UnionWeights:
    alpha1: float
    alpha2: float
    alpha3: float
    guaranteed_p: float
    hypothesis_holds: bool


def union_weights(p1: float, p2: float) -> UnionWeights:
    """Mixing weights for running K1, running K2, or accepting outright."""
    for p in (p1, p2):
        if not 0.5 < p <= 1:
            raise ValueError(f"recognition probability {p} outside (1/2, 1]")
    d = p1 + p2 + p1 * p2
    return UnionWeights(
        alpha1=p2 / d,
        alpha2=p1 / d,
        alpha3=p1 * p2 / d,
        guaranteed_p=2 * p1 * p2 / d,
        hypothesis_holds=1 / p1 + 1 / p2 < 3,
    )


def complete_unitary(column: np.ndarray, position: int) -> np.ndarray:
    """A unitary whose column ``position`` is the unit vector ``column``.

    The remaining columns come from Gram-Schmidt over the standard basis.
    """
    n = column.shape[0]
    cols = [np.asarray(column, dtype=complex)]
    for i in range(n):
        v = np.zeros(n, dtype=complex)
        v[i] = 1
        for c in cols:
            v -= np.vdot(c, v) * c
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            cols.append(v / norm)
        if len(cols) == n:
            break
    first, rest = cols[0], cols[1:]
    rest.insert(position, first)
    return np.column_stack(rest)


def _block_diag(*blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def probabilistic_union(k1: QFA, p1: float, k2: QFA, p2: float) -> QFA:
    """QFA for L(k1) | L(k2) that runs k1 with weight alpha1, k2 with alpha2,
    and accepts with alpha3 at the left endmarker.

    The two automata are placed side by side (direct sum) plus one extra
    accepting state; on every word the acceptance probability is
    ``alpha1 * p_acc(k1) + alpha2 * p_acc(k2) + alpha3``.
    """
    if set(k1.alphabet) != set(k2.alphabet):
        raise ValueError("the two automata read different alphabets")
    w = union_weights(p1, p2)
    if not w.hypothesis_holds:
        raise ValueError(f"1/p1 + 1/p2 = {1 / p1 + 1 / p2:.6g} is not below 3")
    for k in (k1, k2):
        problems = validate_qfa(k)
        if problems:
            raise ValueError(f"invalid component automaton: {problems}")

    states = tuple(f"K1.{q}" for q in k1.states) + tuple(f"K2.{q}" for q in k2.states) + ("always",)
    one = np.ones((1, 1))
    ops = {s: _block_diag(k1.ops[s], k2.ops[s], one) for s in k1.alphabet + (RIGHT,)}

    column = np.concatenate([
        sqrt(w.alpha1) * k1.ops[LEFT][:, k1.index(k1.start)],
        sqrt(w.alpha2) * k2.ops[LEFT][:, k2.index(k2.start)],
        [sqrt(w.alpha3)],
    ])
    ops[LEFT] = complete_unitary(column, 0)

    return QFA(
        states=states,
        alphabet=k1.alphabet,
        start=states[0],
        accept=frozenset({f"K1.{q}" for q in k1.accept} | {f"K2.{q}" for q in k2.accept} | {"always"}),
        reject=frozenset({f"K1.{q}" for q in k1.reject} | {f"K2.{q}" for q in k2.reject}),
        ops=ops,
    )


@dataclass(frozen=True)
class ProbabilityPoint:
    word: Word
    x: float
    y: float
    member: bool


def probability_points(k1: QFA, k2: QFA, oracle: DFA, max_len: int) -> list[ProbabilityPoint]:
    """Place every word up to ``max_len`` at (p_acc under k1, p_acc under k2)."""
    if not (set(k1.alphabet) == set(k2.alphabet) == set(oracle.alphabet)):
        raise ValueError("automata and oracle must share one alphabet")
    t1, t2 = acceptance_table(k1, max_len), acceptance_table(k2, max_len)
    return [ProbabilityPoint(w, t1[w][0], t2[w][0], dfa_accepts(oracle, w))
            for w in iter_words(k1.alphabet, max_len)]


# -- planar separation ------------------------------------------------------

def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple[float, float]]:
    """Andrew's monotone chain; counter-clockwise, collinear points dropped.

    Degenerate inputs give one point or the two ends of a segment.
    """
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _edges(hull):
    if len(hull) == 1:
        return [(hull[0], hull[0])]
    if len(hull) == 2:
        return [(hull[0], hull[1])]
    return [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]


def _closest_on_segment(p, a, b) -> np.ndarray:
    p, a, b = map(np.asarray, (p, a, b))
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0 else min(1.0, max(0.0, float((p - a) @ ab) / denom))
    return a + t * ab


def _segments_cross(a, b, c, d) -> bool:
    d1, d2 = _cross(c, d, a), _cross(c, d, b)
    d3, d4 = _cross(a, b, c), _cross(a, b, d)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4)


def _inside(p, hull) -> bool:
    """Point in the closed convex polygon (needs at least three vertices)."""
    if len(hull) < 3:
        return False
    return all(_cross(hull[i], hull[(i + 1) % len(hull)], p) >= 0 for i in range(len(hull)))


def _hull_gap(h1, h2):
    """Closest pair of points between two convex hulls; None when they meet."""
    if any(_inside(p, h2) for p in h1) or any(_inside(p, h1) for p in h2):
        return None
    best = None
    for a, b in _edges(h1):
        for c, d in _edges(h2):
            if _segments_cross(a, b, c, d):
                return None
            for p, (s, t), flip in ((a, (c, d), False), (b, (c, d), False),
                                    (c, (a, b), True), (d, (a, b), True)):
                q = _closest_on_segment(p, s, t)
                pair = (q, np.asarray(p)) if flip else (np.asarray(p), q)
                dist = float(np.linalg.norm(pair[1] - pair[0]))
                if best is None or dist < best[0]:
                    best = (dist, pair[0], pair[1])
    return best


def separating_line(below, above, tol: float = 1e-12):
    """Maximum-margin line ``a*x + b*y = c`` with ``below`` strictly under it.

    Returns ``(a, b, c, margin)`` with ``a**2 + b**2 == 1`` and the normal
    pointing from ``below`` to ``above``, or None when the convex hulls touch
    or overlap.  The optimum is the perpendicular bisector of the closest pair
    of hull points, and the margin is half their distance.
    """
    if len(below) == 0 or len(above) == 0:
        raise ValueError("both point sets must be non-empty")
    gap = _hull_gap(convex_hull(below), convex_hull(above))
    if gap is None or gap[0] <= tol:
        return None
    dist, p, q = gap
    normal = (q - p) / dist
    c = float(normal @ (p + q) / 2)
    return float(normal[0]), float(normal[1]), c, dist / 2


def _box(x0, x1, y0, y1):
    return [(x0, y0), (x1, y0), (x0, y1), (x1, y1)]


def region_corners(p1: float, p2: float, floor1: float = 0.0, floor2: float = 0.0):
    """Corner points of the regions words can occupy in the (x, y) plane.

    ``x``/``y`` are acceptance probabilities under automata recognising with
    ``p1``/``p2``.  ``floor1``/``floor2`` are lower bounds on acceptance
    (rejection never exceeds ``1 - floor``).  Returns (non-members, members):
    non-members sit in the lower-left box, members in the other three.
    """
    lo1, lo2 = 1 - p1, 1 - p2
    outside = _box(floor1, lo1, floor2, lo2)
    inside = (_box(p1, 1, floor2, lo2) + _box(floor1, lo1, p2, 1) + _box(p1, 1, p2, 1))
    return outside, inside
