"""Decompose random QFAs and estimate how fast E2 drains.

For each sample prints dim E1 / dim E2, the sampled contraction constant and
the length of a word that takes the first E2 basis vector below delta.
"""

import argparse

import numpy as np

from qfa_lab.analysis import NonContractingError, contraction_estimate, decompose_nonhalting, vanish_word_search
from qfa_lab.randomqfa import random_qfa


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--states", type=int, default=5)
    ap.add_argument("--samples", type=int, default=32)
    ap.add_argument("--delta", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print("  #  |Qnon|  dimE1  dimE2  S_est     drain word length")
    for i in range(args.count):
        k = random_qfa(rng, args.states)
        d = decompose_nonhalting(k)
        if d.e2.dim == 0:
            print(f"{i:3d}  {d.e1.dim:5d}  {d.e1.dim:5d}  {0:5d}  -")
            continue
        est = contraction_estimate(k, d, args.samples, rng)
        try:
            w, _ = vanish_word_search(k, d, d.e2.vectors[:, 0], args.delta)
            drain = str(len(w))
        except NonContractingError as exc:
            drain = f"gave up ({exc})"
        print(f"{i:3d}  {d.e1.dim + d.e2.dim:5d}  {d.e1.dim:5d}  {d.e2.dim:5d}  {est.s_est:.6f}  {drain}")


if __name__ == "__main__":
    main()
