"""Reproduction table: every headline number recomputed from the bundled fixtures."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain
from typing import Any, Callable

import numpy as np

from .analysis import (contraction_estimate, decompose_nonhalting, tv_check,
                       vanish_word_search, verify_invariance)
from .constructions import probabilistic_union, union_weights
from .dfa import (DFA, check_t12, dfa_accepts, dfa_combine, dfa_equivalent, dfa_minimize)
from .io import load_fixture
from .qfa import PROB_TOL, QFA, acceptance_table, recognition_margin, run_word, validate_qfa
from .words import iter_words, show


def default_tol() -> float:
    """Probability tolerance; the QFA_LAB_TOL environment variable overrides 1e-9."""
    raw = os.environ.get("QFA_LAB_TOL")
    return float(raw) if raw else PROB_TOL


def pretty(x: Any) -> str:
    """Decimal with 12 significant digits, plus the nearby small fraction if any."""
    if isinstance(x, bool) or not isinstance(x, (int, float, np.floating)):
        return str(x)
    x = float(x)
    frac = Fraction(x).limit_denominator(100)
    text = f"{x:.12g}"
    if abs(float(frac) - x) <= 1e-9 and frac.denominator > 1:
        text += f" ({frac})"
    return text


@dataclass(frozen=True)
class ReportRow:
    claim: str
    expected: Any
    computed: Any
    tol: float | None
    passed: bool
    seconds: float = 0.0

    def as_dict(self) -> dict:
        def plain(v):
            return v if isinstance(v, (bool, str, int, float)) or v is None else str(v)
        return {"claim": self.claim, "expected": plain(self.expected), "computed": plain(self.computed),
                "tol": self.tol, "passed": self.passed, "seconds": round(self.seconds, 4)}


def _num(claim, expected, computed, tol, seconds=0.0) -> ReportRow:
    return ReportRow(claim, expected, computed, tol, abs(expected - computed) <= tol, seconds)


def _flag(claim, expected, computed, seconds=0.0) -> ReportRow:
    return ReportRow(claim, expected, computed, None, expected == computed, seconds)


def _timed(name: str, fn: Callable[[], list[ReportRow]]) -> list[ReportRow]:
    t0 = time.perf_counter()
    try:
        rows = fn()
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        # a broken fixture should fail its rows, not abort the table
        rows = [ReportRow(f"{name} check ran", "completed", f"{type(exc).__name__}: {exc}", None, False)]
    dt = time.perf_counter() - t0
    return [ReportRow(r.claim, r.expected, r.computed, r.tol, r.passed, dt) for r in rows]


def _unitarity(k: QFA, name: str) -> list[ReportRow]:
    problems = validate_qfa(k)
    return [ReportRow(f"{name} operators unitary", "valid", "; ".join(problems) or "valid", None, not problems)]


def _recognition(k: QFA, oracle: DFA, name: str, max_len: int, tol: float) -> list[ReportRow]:
    p, worst = recognition_margin(k, oracle, max_len)
    return [_num(f"{name} recognition margin over |w|<={max_len} (worst {show(worst)})", 2 / 3, p, tol)]


def _golden(k2: QFA) -> list[ReportRow]:
    cases = [("", "accept"), ("a", "reject"), ("b", "reject"), ("ba", "accept"), ("ab", "reject")]
    rows = []
    for w, side in cases:
        t = run_word(k2, w)
        p = t.p_acc if side == "accept" else t.p_rej
        rows.append(_num(f"K2 {side}s {show(tuple(w))} with 2/3", 2 / 3, p, 1e-12))
    return rows


def _closure(g1: DFA, g2: DFA, g3: DFA, max_len: int = 15) -> list[ReportRow]:
    union_eq = dfa_equivalent(dfa_minimize(dfa_combine(g2, g3, "union")), g1)[0]
    sym_eq = dfa_equivalent(dfa_minimize(dfa_combine(g2, g3, "symmetric-difference")), g1)[0]
    inter = dfa_minimize(dfa_combine(g2, g3, "intersection"))
    inter_empty = not inter.accept
    bad = 0
    for w in iter_words(g1.alphabet, max_len):
        x2, x3, x1 = dfa_accepts(g2, w), dfa_accepts(g3, w), dfa_accepts(g1, w)
        bad += (x1 != (x2 or x3)) or (x1 != (x2 != x3)) or (x2 and x3)
    return [
        _flag("minimize(G2 u G3) == G1", True, union_eq),
        _flag("minimize(G2 xor G3) == G1", True, sym_eq),
        _flag("L(G2) n L(G3) empty", True, inter_empty),
        _flag(f"Boolean identities on all |w|<={max_len}", 0, int(bad)),
    ]


def _forbidden_pattern(g1: DFA, g2: DFA) -> list[ReportRow]:
    r1, r2 = check_t12(g1), check_t12(g2)
    return [
        _flag("G1 pattern witness (q1, q2, x)", ("q1", "q2", "b"),
              (r1.q1, r1.q2, show(r1.x) if r1.x else None)),
        _flag("G1 condition 5 holds", False, r1.holds_1_to_5),
        _flag("G2 conditions 1-4 hold", True, r2.holds_1_to_4),
        _flag("G2 condition 5 holds", False, r2.holds_1_to_5),
    ]


def _union(parity: QFA, k2: QFA, even: DFA, g2: DFA, max_len: int, tol: float) -> list[ReportRow]:
    p_par, _ = recognition_margin(parity, even, max_len)
    u = probabilistic_union(parity, 1.0, k2, 2 / 3)
    wts = union_weights(1.0, 2 / 3)
    margin, worst = recognition_margin(u, dfa_combine(even, g2, "union"), max_len)
    tu, t1, t2 = (acceptance_table(k, max_len) for k in (u, parity, k2))
    mix = max(abs(tu[w][0] - (wts.alpha1 * t1[w][0] + wts.alpha2 * t2[w][0] + wts.alpha3)) for w in tu)
    return [
        _num(f"parity QFA recognition over |w|<={max_len}", 1.0, p_par, tol),
        ReportRow(f"union margin over |w|<={max_len} >= 4/7 (worst {show(worst)})", 4 / 7, margin, tol,
                  margin >= 4 / 7 - tol),
        _num("mixture law max deviation", 0.0, mix, tol),
    ]


def _limit_case() -> list[ReportRow]:
    w = union_weights(2 / 3, 2 / 3)
    return [_num("union_weights(2/3, 2/3) guaranteed p", 0.5, w.guaranteed_p, 1e-15),
            _flag("1/p1 + 1/p2 < 3 at p1 = p2 = 2/3", False, w.hypothesis_holds)]


def _decomposition(k2: QFA, tol: float) -> list[ReportRow]:
    d = decompose_nonhalting(k2)
    span = np.column_stack([k2.basis("q2"), k2.basis("q3")])
    inv = verify_invariance(k2, d, 8, tol)
    return [
        _flag("K2 dim E1", 2, d.e1.dim),
        _flag("K2 E1 = span{q2, q3}", True, d.e1.same_span(span)),
        ReportRow("K2 iterations used <= 4", 4, d.iterations_used, None, d.iterations_used <= 4),
        _num("E1 norm defect over |w|<=8", 0.0, inv.norm_defect, tol),
        _num("E2 leakage into E1 over |w|<=8", 0.0, inv.leakage, tol),
    ]


def _tv(rng: np.random.Generator) -> list[ReportRow]:
    rows = []
    for eps in (0.001, 0.01, 0.1):
        res = tv_check(1000, eps, rng)
        rows.append(_flag(f"TV bound violations at eps={eps} (max Delta/eps {res.max_ratio:.3f})", 0,
                          res.violations))
    return rows


def _conservation(rng: np.random.Generator, tol: float) -> list[ReportRow]:
    from .randomqfa import random_qfa, random_word

    worst = 0.0
    for _ in range(200):
        k = random_qfa(rng, int(rng.integers(4, 9)))
        for _ in range(50):
            t = run_word(k, random_word(rng, k.alphabet, 20))
            acc = rej = 0.0
            for e in t.events:
                acc += e.accepted
                rej += e.rejected
                worst = max(worst, abs(acc + rej + e.remaining - 1))
    return [_num("conservation max deviation (200 QFAs x 50 words)", 0.0, worst, tol)]


def _contraction(k2: QFA, rng: np.random.Generator) -> list[ReportRow]:
    d = decompose_nonhalting(k2)
    est = contraction_estimate(k2, d, 64, rng)
    rows = [_num("K2 contraction estimate S", 0.0, est.s_est, 1e-12)]
    for i in range(d.e2.dim):
        w, r = vanish_word_search(k2, d, d.e2.vectors[:, i], 1e-9)
        rows.append(ReportRow(f"E2 basis vector {i} drained by {show(w)}", "<=4 letters, norm<1e-9",
                              f"{len(w)} letters, norm {r:.1e}", None, len(w) <= 4 and r < 1e-9))
    return rows


def reproduce_paper(max_len: int = 12, tol: float | None = None, fixtures_dir=None,
                    seed: int = 0) -> list[ReportRow]:
    """Run every acceptance check and return one row per claim."""
    tol = default_tol() if tol is None else tol
    rng = np.random.default_rng(seed)
    fx = {name: load_fixture(name, fixtures_dir, validate=False) for name in
          ("k2.qfa", "k3.qfa", "parity.qfa", "g1.dfa", "g2.dfa", "g3.dfa", "even_a.dfa")}
    k2, k3, parity = fx["k2.qfa"], fx["k3.qfa"], fx["parity.qfa"]
    g1, g2, g3, even = fx["g1.dfa"], fx["g2.dfa"], fx["g3.dfa"], fx["even_a.dfa"]
    union_len = min(max_len, 10)
    groups = [
        ("unitarity", lambda: _unitarity(k2, "K2") + _unitarity(k3, "K3")),
        ("K2 recognition", lambda: _recognition(k2, g2, "K2 vs G2", max_len, tol)),
        ("K3 recognition", lambda: _recognition(k3, g3, "K3 vs G3", max_len, tol)),
        ("golden words", lambda: _golden(k2)),
        ("closure", lambda: _closure(g1, g2, g3)),
        ("forbidden pattern", lambda: _forbidden_pattern(g1, g2)),
        ("union", lambda: _union(parity, k2, even, g2, union_len, tol)),
        ("limit case", _limit_case),
        ("decomposition", lambda: _decomposition(k2, tol)),
        ("TV bound", lambda: _tv(rng)),
        ("conservation", lambda: _conservation(rng, tol)),
        ("contraction", lambda: _contraction(k2, rng)),
    ]
    return list(chain.from_iterable(_timed(name, g) for name, g in groups))


def format_table(rows: list[ReportRow]) -> str:
    header = ("claim", "expected", "computed", "tol", "result")
    body = [(r.claim, pretty(r.expected), pretty(r.computed), "" if r.tol is None else f"{r.tol:g}",
             "PASS" if r.passed else "FAIL") for r in rows]
    widths = [max(len(str(x)) for x in col) for col in zip(header, *body)]
    lines = ["  ".join(str(x).ljust(w) for x, w in zip(line, widths)) for line in [header, *body]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
