"""Local table against the search on a grid of binary lattices <a1> _|_ <2^t a1>.

    python3 scripts/crossval_table.py [--max-t 8]

Prints one row per element: F for the full group, N(d) for a norm group,
with a trailing '!' wherever the two methods disagree.  Exits 1 on any
disagreement.
"""

from __future__ import annotations

import argparse
import sys

from quatspin.cli import parse_element
from quatspin.padic2 import square_class_2
from quatspin.quatalg import DEFAULT_PARAMS, reduced_norm
from quatspin.search import KStarInstance, decide_H_binary
from quatspin.spinor_table import LatticeDescriptor, spinor_image

ELEMENTS = ["j+ij", "i+j", "i", "iw", "i_pi:-2", "i_pi:10", "i_pi:-10",
            "j", "3j+i", "j+2i", "2i+iw", "i-2iw", "class:5", "class:1"]


def short(img) -> str:
    return "F" if img.is_full else f"N({img.d})"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-t", type=int, default=8)
    args = ap.parse_args()
    ts = range(1, args.max_t + 1)
    print(f"{'a1':>9} {'class':>5} " + " ".join(f"{'t=' + str(t):>7}" for t in ts))
    bad = 0
    for name in ELEMENTS:
        a1 = parse_element(name, DEFAULT_PARAMS)
        cells = []
        for t in ts:
            table = spinor_image(LatticeDescriptor.binary(a1, t))
            search = decide_H_binary(KStarInstance(a1, t))
            mark = "" if table == search else "!"
            bad += bool(mark)
            cells.append(f"{short(table) + mark:>7}")
        print(f"{name:>9} {square_class_2(reduced_norm(a1)):>5} " + " ".join(cells))
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
