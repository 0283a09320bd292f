"""Regenerate the bundled fixture files from the builders.

    python3 scripts/export_fixtures.py            # rewrite src/qfa_lab/data/
    python3 scripts/export_fixtures.py --check    # exit 1 if any file is stale
"""

import argparse
import sys
from pathlib import Path

from qfa_lab.constructions import build_k2, build_k3, parity_qfa
from qfa_lab.dfa import build_g1, build_g2, build_g3, even_a_dfa
from qfa_lab.io import dumps, save_automaton

BUILDERS = {
    "k2.qfa": build_k2, "k3.qfa": build_k3, "parity.qfa": parity_qfa,
    "g1.dfa": build_g1, "g2.dfa": build_g2, "g3.dfa": build_g3, "even_a.dfa": even_a_dfa,
}

DATA = Path(__file__).resolve().parents[1] / "src" / "qfa_lab" / "data"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DATA)
    ap.add_argument("--check", action="store_true", help="compare instead of writing")
    args = ap.parse_args()
    stale = []
    for name, build in BUILDERS.items():
        obj, path = build(), args.out / name
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != dumps(obj) + "\n":
                stale.append(name)
        else:
            save_automaton(obj, path)
            print(f"wrote {path}")
    for name in stale:
        print(f"stale: {name}")
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
