"""Data behind the separability pictures.

Writes one CSV of (p_acc under K2, p_acc under K3) per word, labelled by
membership in L(G1), and prints whether members and non-members can be
split by a line.  Then sweeps the idealised regions for a few (p1, p2)
pairs and reports which ones are separable.
"""

import argparse
import csv
from pathlib import Path

from qfa_lab.constructions import probability_points, region_corners, separating_line, union_weights
from qfa_lab.io import load_fixture
from qfa_lab.words import show

PAIRS = [(0.9, 0.9), (1.0, 2 / 3), (0.75, 0.75), (2 / 3, 2 / 3), (0.6, 0.6)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-len", type=int, default=8)
    ap.add_argument("--out", type=Path, default=Path("points.csv"))
    args = ap.parse_args()

    k2, k3, g1 = load_fixture("k2.qfa"), load_fixture("k3.qfa"), load_fixture("g1.dfa")
    pts = probability_points(k2, k3, g1, args.max_len)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["word", "x", "y", "member"])
        for p in pts:
            wr.writerow([show(p.word), repr(p.x), repr(p.y), int(p.member)])
    distinct = {(round(p.x, 9), round(p.y, 9), p.member) for p in pts}
    line = separating_line([(p.x, p.y) for p in pts if not p.member], [(p.x, p.y) for p in pts if p.member])
    print(f"{len(pts)} words, {len(distinct)} distinct labelled points -> {args.out}")
    print(f"K2/K3 points for L(G1): {'separable' if line else 'not separable'}")

    print("\n p1      p2      1/p1+1/p2  union p   separable  (floor 1-p)")
    for p1, p2 in PAIRS:
        w = union_weights(p1, p2)
        plain = separating_line(*region_corners(p1, p2))
        floored = separating_line(*region_corners(p1, p2, 1 - p1, 1 - p2))
        print(f" {p1:<7.4f} {p2:<7.4f} {1 / p1 + 1 / p2:<10.4f} {w.guaranteed_p:<9.4f} "
              f"{'yes' if plain else 'no':<10} {'yes' if floored else 'no'}")


if __name__ == "__main__":
    main()
