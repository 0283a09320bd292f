"""Command-line entry point (``qfa-lab`` or ``python -m qfa_lab``)."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import analysis, constructions
from .dfa import DFA, check_t12
from .io import AutomatonFileError, load_automaton, save_automaton
from .qfa import QFA, recognition_margin, run_word
from .report import default_tol, format_table, pretty, reproduce_paper
from .words import as_word, iter_words, show


def _load(path, kind):
    obj = load_automaton(path)
    if not isinstance(obj, kind):
        raise AutomatonFileError(f"{path}: expected a {kind.__name__} file")
    return obj


def _table(header, rows) -> str:
    rows = [[str(x) for x in r] for r in rows]
    widths = [max(len(x) for x in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)),
           "  ".join("-" * w for w in widths)]
    out += ["  ".join(x.ljust(w) for x, w in zip(r, widths)) for r in rows]
    return "\n".join(out)


def _emit(args, payload: dict, text: str):
    print(json.dumps(payload, indent=1, ensure_ascii=False) if args.json else text)


def _vec(qfa: QFA, v) -> str:
    parts = [f"{complex(a).real:+.6g}|{q}>" if abs(complex(a).imag) < 1e-12 else f"{complex(a):.6g}|{q}>"
             for q, a in zip(qfa.states, v) if abs(a) > 1e-12]
    return " ".join(parts) or "0"


def cmd_simulate(args):
    qfa = _load(args.qfa, QFA)
    t = run_word(qfa, as_word(args.word, qfa.alphabet))
    rows = [(e.letter, pretty(e.accepted), pretty(e.rejected), pretty(e.remaining)) for e in t.events]
    text = _table(("letter", "accepted", "rejected", "remaining"), rows)
    text += (f"\n\np_acc = {pretty(t.p_acc)}\np_rej = {pretty(t.p_rej)}\n"
             f"p_undecided = {pretty(t.p_undecided)}\nverdict: {t.verdict}")
    _emit(args, {"word": show(t.word), "p_acc": t.p_acc, "p_rej": t.p_rej, "p_undecided": t.p_undecided,
                 "verdict": t.verdict,
                 "events": [vars(e) for e in t.events]}, text)


def cmd_verify(args):
    qfa, oracle = _load(args.qfa, QFA), _load(args.oracle, DFA)
    p, worst = recognition_margin(qfa, oracle, args.max_len)
    ok = p > 0.5 + args.tol
    text = (f"words checked: {sum(1 for _ in iter_words(qfa.alphabet, args.max_len))}\n"
            f"recognition probability: {pretty(p)}\nworst word: {show(worst)}\n"
            f"bounded-error recognition: {'yes' if ok else 'no'}")
    _emit(args, {"p": p, "worst_word": show(worst), "recognizes": ok}, text)


def cmd_check_t12(args):
    r = check_t12(_load(args.dfa, DFA))
    cond = r.conditions
    rows = [
        ("states (minimal)", ", ".join(r.dfa.states)),
        ("q1", r.q1 or "-"), ("q2", r.q2 or "-"),
        ("x", show(r.x) if r.x is not None else "-"),
        ("y", show(r.y) if r.y is not None else "-"),
    ] + [(f"condition {i}", "yes" if cond[i] else "no") for i in range(1, 6)] + [
        ("conclusion", r.conclusion)]
    _emit(args, {"states": list(r.dfa.states), "q1": r.q1, "q2": r.q2,
                 "x": None if r.x is None else list(r.x), "y": None if r.y is None else list(r.y),
                 "conditions": {str(k): v for k, v in cond.items()}, "conclusion": r.conclusion},
          _table(("item", "value"), rows))


def cmd_decompose(args):
    qfa = _load(args.qfa, QFA)
    d = analysis.decompose_nonhalting(qfa)
    inv = analysis.verify_invariance(qfa, d, args.max_len, args.tol)
    lines = [f"dims per iteration: {' -> '.join(map(str, d.dims))}",
             f"iterations used: {d.iterations_used}",
             f"dim E1 = {d.e1.dim}, dim E2 = {d.e2.dim}", "E1 basis:"]
    lines += [f"  {_vec(qfa, v)}" for v in d.e1.vectors.T] or ["  (empty)"]
    lines.append("E2 basis:")
    lines += [f"  {_vec(qfa, v)}" for v in d.e2.vectors.T] or ["  (empty)"]
    lines.append(f"invariance over |w|<={args.max_len}: norm defect {inv.norm_defect:.2e}, "
                 f"E2 leakage {inv.leakage:.2e} -> {'ok' if inv.passed else 'FAILED'}")

    def cplx(m):
        return [[[z.real, z.imag] for z in row] for row in m.T]
    _emit(args, {"dims": list(d.dims), "iterations_used": d.iterations_used,
                 "e1": cplx(d.e1.vectors), "e2": cplx(d.e2.vectors),
                 "norm_defect": inv.norm_defect, "leakage": inv.leakage, "passed": inv.passed},
          "\n".join(lines))


def cmd_union_build(args):
    k1, k2 = _load(args.k1, QFA), _load(args.k2, QFA)
    u = constructions.probabilistic_union(k1, args.p1, k2, args.p2)
    save_automaton(u, args.output)
    w = constructions.union_weights(args.p1, args.p2)
    _emit(args, {"output": args.output, "alpha1": w.alpha1, "alpha2": w.alpha2, "alpha3": w.alpha3,
                 "guaranteed_p": w.guaranteed_p},
          f"wrote {args.output} ({u.dim} states)\nweights: {pretty(w.alpha1)}, {pretty(w.alpha2)}, "
          f"{pretty(w.alpha3)}\nguaranteed probability: {pretty(w.guaranteed_p)}")


def _truthy(s: str) -> bool:
    return s.strip().lower() in ("1", "true", "yes", "y", "t")


def cmd_separability(args):
    below, above = [], []
    with open(args.points, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            (above if _truthy(row["member"]) else below).append((float(row["x"]), float(row["y"])))
    line = constructions.separating_line(below, above)
    if line is None:
        _emit(args, {"line": None}, "none")
        return
    a, b, c, m = line
    _emit(args, {"a": a, "b": b, "c": c, "margin": m},
          f"{a:.12g}*x + {b:.12g}*y = {c:.12g}  (margin {m:.6g})")


def cmd_points(args):
    k1, k2, oracle = _load(args.k1, QFA), _load(args.k2, QFA), _load(args.oracle, DFA)
    pts = constructions.probability_points(k1, k2, oracle, args.max_len)
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        wr = csv.writer(out)
        wr.writerow(["word", "x", "y", "member"])
        for p in pts:
            wr.writerow([show(p.word), repr(p.x), repr(p.y), int(p.member)])
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_tv_check(args):
    res = analysis.tv_check(args.trials, args.eps, np.random.default_rng(args.seed))
    _emit(args, vars(res), f"trials: {res.trials}\neps: {res.eps:g}\nmax Delta/eps: {res.max_ratio:.6f}\n"
                           f"violations of Delta < 2 eps: {res.violations}")


def cmd_corpus(args):
    alphabet = [a for a in args.alphabet.split(",") if a]
    for w in iter_words(alphabet, args.max_len):
        print(show(w))


def cmd_reproduce(args):
    rows = reproduce_paper(max_len=args.max_len, tol=args.tol, fixtures_dir=args.fixtures, seed=args.seed)
    _emit(args, {"rows": [r.as_dict() for r in rows], "passed": all(r.passed for r in rows)},
          format_table(rows))
    return 0 if all(r.passed for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qfa-lab", description=__doc__)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        return sp

    sp = add("simulate", cmd_simulate, "run one word through a QFA")
    sp.add_argument("qfa")
    sp.add_argument("word", nargs="?", default="", help="letters, or comma separated; empty for ε")

    sp = add("verify", cmd_verify, "worst-case recognition probability against a DFA")
    sp.add_argument("qfa")
    sp.add_argument("--oracle", required=True)
    sp.add_argument("--max-len", type=int, default=12)
    sp.add_argument("--tol", type=float, default=None)

    sp = add("check-t12", cmd_check_t12, "search a minimal DFA for the forbidden pattern")
    sp.add_argument("dfa")

    sp = add("decompose", cmd_decompose, "split the non-halting space into E1 and E2")
    sp.add_argument("qfa")
    sp.add_argument("--max-len", type=int, default=8)
    sp.add_argument("--tol", type=float, default=None)

    sp = add("union-build", cmd_union_build, "probabilistic union of two QFAs")
    sp.add_argument("--k1", required=True)
    sp.add_argument("--p1", type=float, required=True)
    sp.add_argument("--k2", required=True)
    sp.add_argument("--p2", type=float, required=True)
    sp.add_argument("-o", "--output", required=True)

    sp = add("separability", cmd_separability, "max-margin line between non-members and members")
    sp.add_argument("--points", required=True, help="CSV with word,x,y,member columns")

    sp = add("points", cmd_points, "CSV of (p_acc under K1, p_acc under K2) per word")
    sp.add_argument("--k1", required=True)
    sp.add_argument("--k2", required=True)
    sp.add_argument("--oracle", required=True)
    sp.add_argument("--max-len", type=int, default=6)
    sp.add_argument("-o", "--output")

    sp = add("tv-check", cmd_tv_check, "sample the total-variation bound")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--eps", type=float, default=0.01)
    sp.add_argument("--seed", type=int, default=None)

    sp = add("corpus", cmd_corpus, "list all words up to a length")
    sp.add_argument("--alphabet", default="a,b")
    sp.add_argument("--max-len", type=int, default=3)

    sp = add("reproduce-paper", cmd_reproduce, "run every acceptance check and print the table")
    sp.add_argument("--max-len", type=int, default=12)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--fixtures", default=None, help="directory overriding the bundled fixtures")
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", "unset") is None:
        args.tol = default_tol()
    try:
        return args.fn(args) or 0
    except (AutomatonFileError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
