"""Tree engine against the plain scan on the same instances.

    python3 scripts/bench_search.py [--max-u 6]

For each instance the two engines must return the same witness (or none);
the table shows wall time and how much of the box the tree engine visited.
"""

from __future__ import annotations

import argparse

from quatspin.cli import parse_element
from quatspin.quatalg import DEFAULT_PARAMS
from quatspin.search import KStarInstance, search_witness

CASES = [("j+ij", 2), ("j+ij", 3), ("i+j", 3), ("i", 4), ("i", 5), ("iw", 5), ("i_pi:10", 4)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-u", type=int, default=6, help="largest box exponent for the scan")
    args = ap.parse_args()
    print(f"{'a1':>9} {'t':>2} {'u':>2} {'tree s':>8} {'nodes':>9} {'scan s':>8} witness")
    for name, t in CASES:
        inst = KStarInstance(parse_element(name, DEFAULT_PARAMS), t)
        for u in range(3, args.max_u + 1):
            tree = search_witness(inst, u, engine="tree")
            scan = search_witness(inst, u, engine="scan")
            if tree.witness != scan.witness:
                raise SystemExit(f"engines disagree on {name}, t={t}, u={u}")
            w = "-" if tree.witness is None else str(tree.witness)
            print(f"{name:>9} {t:>2} {u:>2} {tree.elapsed:8.3f} {tree.nodes:9d} {scan.elapsed:8.3f} {w}")


if __name__ == "__main__":
    main()
