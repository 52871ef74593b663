"""Exhaustive (unpruned) scans confirming that no witness exists in a box.

    python3 scripts/nonexistence_scan.py --t 3 4 --jobs 8

The tree engine reaches the same verdicts in milliseconds; this script checks
them candidate by candidate, which is slow (about 2 minutes per element at
t = 4 on one core).
"""

from __future__ import annotations

import argparse
import json

from quatspin.cli import parse_element
from quatspin.quatalg import DEFAULT_PARAMS
from quatspin.search import KStarInstance, search_witness


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a1", nargs="+", default=["j+ij", "i+j"])
    ap.add_argument("--t", nargs="+", type=int, default=[3])
    ap.add_argument("--extra", type=int, default=3, help="box exponent is t + extra")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    for name in args.a1:
        a1 = parse_element(name, DEFAULT_PARAMS)
        for t in args.t:
            u = t + args.extra
            out = search_witness(KStarInstance(a1, t), u, args.jobs, engine="scan")
            print(json.dumps({
                "a1": name, "t": str(t), "bound": str(u),
                "witness": None if out.witness is None else str(out.witness),
                "scanned": str(out.candidates_scanned), "jobs": str(args.jobs),
                "elapsed_s": f"{out.elapsed:.1f}",
            }), flush=True)


if __name__ == "__main__":
    main()
