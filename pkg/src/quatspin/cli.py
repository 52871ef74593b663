"""Command-line interface: ``quatspin <command> ...``.

Every command emits a run report (JSON with ``--format json``, the default,
or a few readable lines with ``--format text``).  Exit codes: 0 success,
1 mathematical mismatch, 2 usage error, 3 resource abort.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from .errors import QuatspinError, SearchAborted
from .genus import LocalImageSpec, example_family_spec, load_example, spinor_class_field
from .quatalg import AlgebraParams, Quat, i_pi, parse_quat, pure_with_norm_class
from .search import (
    KStarInstance,
    decide_binary,
    default_bound,
    default_jobs,
    kstar_check,
    search_witness,
    theorem_bound,
)
from .spinor_table import LatticeDescriptor, curated_descriptors, spinor_image_result
from .witnesses import table_witnesses, verify_witness_tables

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3

#: the pure elements used for binary-lattice checks
PURE_SET = ("j+ij", "i+j", "i", "iw", "i_pi:-2", "i_pi:10", "i_pi:-10")


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any]
    verdict: Dict[str, Any]
    citations: List[str] = field(default_factory=list)
    elapsed: float = 0.0
    status: str = "ok"   # ok | mismatch | aborted

    @property
    def exit_code(self) -> int:
        return {"ok": EXIT_OK, "mismatch": EXIT_MISMATCH, "aborted": EXIT_ABORT}[self.status]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "citations": list(self.citations),
            "status": self.status,
            "timing": {"elapsed_ms": str(round(self.elapsed * 1000))},
        }


# -- input parsing -----------------------------------------------------------------

def _params(args) -> AlgebraParams:
    return AlgebraParams(getattr(args, "pi", "2"), getattr(args, "delta", "1"))


def parse_element(text: str, params: AlgebraParams) -> Quat:
    """A quaternion from JSON, ``class:<d>``, ``i_pi:<p>`` or a literal like ``j+ij``."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return Quat.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad JSON quaternion: {exc}") from exc
    if text.startswith("class:"):
        return pure_with_norm_class(params, int(text[6:]))
    if text.startswith("i_pi:"):
        return i_pi(params, Fraction(text[5:]))[0]
    return parse_quat(text, params)


def _json_arg(text: str) -> Any:
    """Inline JSON, or a path to a JSON file."""
    text = text.strip()
    if not text.startswith("{") and Path(text).exists():
        text = Path(text).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not JSON and not a readable file: {exc}") from exc


def _heartbeat(enabled: bool) -> Optional[Callable[[int, int], None]]:
    if not enabled:
        return None
    last = [0.0]

    def beat(done: int, total: int) -> None:
        now = time.monotonic()
        if now - last[0] >= 0.5 or done >= total:
            last[0] = now
            print(f"progress scanned={done} total={total}", file=sys.stderr, flush=True)

    return beat


# -- commands ---------------------------------------------------------------------

def cmd_kstar_check(args) -> RunReport:
    p = _params(args)
    inst = KStarInstance(parse_element(args.a1, p), args.t)
    r = parse_element(args.r, p)
    rep = kstar_check(inst, r)
    return RunReport(
        "kstar-check",
        {"a1": inst.a1.to_json(), "t": str(args.t), "r": r.to_json()},
        rep.to_json(),
    )


def cmd_search(args) -> RunReport:
    p = _params(args)
    inst = KStarInstance(parse_element(args.a1, p), args.t)
    if args.bound is not None:
        u = args.bound
    elif args.refined:
        u = default_bound(inst, refined=True)
    else:
        u, _ = theorem_bound(inst)
    out = search_witness(inst, u, args.jobs, engine=args.engine, time_limit=args.time_limit,
                         progress=_heartbeat(args.progress))
    verdict = out.to_json()
    if not out.aborted:
        if out.witness is not None:
            verdict["image"] = {"image": "full"}
        elif out.justification is not None:
            verdict["image"] = decide_binary(inst, u, require_justification=False,
                                             engine="tree").image.to_json()
        else:
            verdict["image"] = None
            verdict["note"] = "no witness, but this bound does not prove non-existence"
    return RunReport(
        "search",
        {"a1": inst.a1.to_json(), "t": str(args.t), "bound": str(u), "engine": args.engine},
        verdict,
        citations=[out.justification] if out.justification else [],
        status="aborted" if out.aborted else "ok",
    )


def cmd_verify_tables(args) -> RunReport:
    rep = verify_witness_tables(args.witnesses)
    return RunReport(
        "verify-tables",
        {"witnesses": "builtin" if args.witnesses is None else str(args.witnesses)},
        rep.to_json(),
        citations=sorted({r.table for r in rep.rows}),
        status="ok" if rep.passed else "mismatch",
    )


def cmd_spinor_image(args) -> RunReport:
    desc = LatticeDescriptor.from_json(_json_arg(args.lattice))
    res = spinor_image_result(desc)
    verdict = res.to_json()
    status = "ok"
    if args.cross_check:
        shape = desc.as_binary()
        if shape is None:
            raise UsageError("--cross-check needs a lattice <a1> _|_ <2^t a1> with t >= 1")
        dec = decide_binary(KStarInstance(*shape), None, args.jobs)
        verdict["search"] = dec.to_json()
        if dec.image != res.image:
            status = "mismatch"
    return RunReport("spinor-image", {"lattice": desc.to_json()}, verdict,
                     citations=[res.rule], status=status)


def cmd_class_field(args) -> RunReport:
    spec = LocalImageSpec.from_json(_json_arg(args.spec))
    support = [int(x) for x in args.support.split(",") if x.strip()]
    res = spinor_class_field(spec, support, indefinite=args.indefinite)
    return RunReport(
        "class-field",
        {"spec": spec.to_json(), "support": [str(p) for p in support], "indefinite": args.indefinite},
        res.to_json(),
    )


# -- reproduce ------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    citation: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)
    aborted: bool = False

    def to_json(self) -> dict:
        return {"name": self.name, "citation": self.citation, "pass": self.passed,
                "aborted": self.aborted, "detail": self.detail}


def _search_check(name: str, citation: str, inst: KStarInstance, u: int, expect_witness: bool,
                  jobs: int, engine: str = "tree", time_limit: Optional[float] = None) -> Check:
    out = search_witness(inst, u, jobs, engine=engine, time_limit=time_limit)
    ok = (out.witness is not None) == expect_witness and not out.aborted
    return Check(name, citation, ok, out.to_json(), aborted=out.aborted)


def reproduce_checks(tier: str, witnesses: Optional[str] = None, jobs: int = 1) -> List[Check]:
    checks: List[Check] = []
    P = AlgebraParams(2, 1)

    # stored witness tables
    rep = verify_witness_tables(witnesses)
    for row in rep.rows:
        checks.append(Check(f"witness row {row.row}", f"witness-table:{row.table}",
                            row.passed, {"failures": row.failures}))
    if not rep.rows:
        checks.append(Check("witness tables", "witness-table", False, {"failures": ["no rows"]}))

    # positive searches, with early termination
    for name in ("j+ij", "i+j"):
        for t in (1, 2):
            inst = KStarInstance(parse_element(name, P), t)
            checks.append(_search_check(f"witness exists: {name}, t={t}", "positive-search",
                                        inst, theorem_bound(inst)[0], True, jobs))
    for p in ("2", "-2", "10", "-10"):
        for t in (1, 2, 3, 4):
            inst = KStarInstance(parse_element(f"i_pi:{p}", P), t)
            checks.append(_search_check(f"witness exists: i_pi({p}), t={t}", "positive-search",
                                        inst, theorem_bound(inst)[0], True, jobs))
    try:
        stored = table_witnesses(witnesses)
    except QuatspinError:
        stored = []
    for a1, t, r in stored:
        for s in range(1, t + 1):
            ok = kstar_check(KStarInstance(a1, s), r).passed
            checks.append(Check(f"stored witness {r} for {a1}, t={s}", "positive-search", ok))

    # local dispatcher on curated lattices
    for label, desc, want in curated_descriptors():
        res = spinor_image_result(desc)
        checks.append(Check(f"dispatch: {label}", f"dispatch:{res.rule}", res.image == want,
                            {"got": res.image.to_json(), "want": want.to_json()}))

    # dispatcher against search on binary lattices
    ts = (1, 2) if tier == "fast" else (1, 2, 3, 4, 5)
    for name in PURE_SET:
        a1 = parse_element(name, P)
        for t in ts:
            inst = KStarInstance(a1, t)
            res = spinor_image_result(LatticeDescriptor.binary(a1, t))
            try:
                dec = decide_binary(inst, None, jobs)
            except SearchAborted as exc:
                checks.append(Check(f"cross-check {name}, t={t}", "cross-validation", False,
                                    {"scanned": str(exc.scanned)}, aborted=True))
                continue
            checks.append(Check(
                f"cross-check {name}, t={t}", "cross-validation", dec.image == res.image,
                {"dispatch": res.image.to_json(), "search": dec.to_json()}))

    # non-existence at the refined bound
    if tier == "full":
        for name in ("j+ij", "i+j"):
            for t in (3, 4):
                inst = KStarInstance(parse_element(name, P), t)
                checks.append(_search_check(f"no witness below 2^{t + 3}: {name}, t={t}",
                                            "non-existence", inst, t + 3, False, jobs))
        # the same statement by plain enumeration, no pruning
        inst = KStarInstance(parse_element("j+ij", P), 3)
        checks.append(_search_check("no witness below 2^6 by enumeration: j+ij, t=3",
                                    "non-existence", inst, 6, False, jobs, engine="scan"))

    # class fields
    res = spinor_class_field(load_example("lattice_i_plus_j"), [2, 5, 7], indefinite=True)
    checks.append(Check("class field of <i+j> _|_ <8(i+j)>", "class-field",
                        res.is_rational and res.class_number == 1, res.to_json()))
    for t in (1, 2, 3, 4, 5, 6):
        res = spinor_class_field(example_family_spec(t), [2], indefinite=True)
        want = (t > 4 and res.generators == (2,) and res.class_number == 2) or (
            t <= 4 and res.is_rational and res.class_number == 1)
        checks.append(Check(f"class field of <i> _|_ <2^{t} i>", "class-field", want, res.to_json()))
    return checks


def cmd_reproduce(args) -> RunReport:
    checks = reproduce_checks(args.tier, args.witnesses, args.jobs)
    if args.format == "text":
        for c in checks:
            tag = "ABORT" if c.aborted else ("PASS" if c.passed else "FAIL")
            print(f"{tag:5} {c.name}", file=sys.stderr)
    aborted = any(c.aborted for c in checks)
    failed = [c for c in checks if not c.passed and not c.aborted]
    status = "mismatch" if failed else ("aborted" if aborted else "ok")
    return RunReport(
        "reproduce",
        {"tier": args.tier, "witnesses": "builtin" if args.witnesses is None else str(args.witnesses)},
        {"checks": [c.to_json() for c in checks], "passed": str(sum(c.passed for c in checks)),
         "total": str(len(checks)), "mismatches": [c.name for c in failed]},
        citations=sorted({c.citation for c in checks}),
        status=status,
    )


def cmd_replay(args) -> RunReport:
    """Re-run a saved report from its inputs and compare verdicts."""
    old = _json_arg(args.report)
    argv = replay_argv(old)
    new = run(argv)
    same = _strip_timing(new.verdict) == _strip_timing(old.get("verdict"))
    return RunReport("replay", {"report": old.get("command")},
                     {"same_verdict": same, "argv": argv},
                     status="ok" if same else "mismatch")


def _strip_timing(v: Any) -> Any:
    if isinstance(v, dict):
        return {k: _strip_timing(x) for k, x in v.items() if k not in ("elapsed_ms", "scanned")}
    if isinstance(v, list):
        return [_strip_timing(x) for x in v]
    return v


def replay_argv(report: dict) -> List[str]:
    """Command line that reproduces a report from its ``inputs``."""
    cmd, inp = report.get("command"), report.get("inputs", {})
    if cmd == "kstar-check":
        return [cmd, "--a1", json.dumps(inp["a1"]), "--t", inp["t"], "--r", json.dumps(inp["r"])]
    if cmd == "search":
        return [cmd, "--a1", json.dumps(inp["a1"]), "--t", inp["t"], "--bound", inp["bound"],
                "--engine", inp.get("engine", "tree")]
    if cmd == "verify-tables":
        w = inp.get("witnesses", "builtin")
        return [cmd] + ([] if w == "builtin" else ["--witnesses", w])
    if cmd == "spinor-image":
        return [cmd, "--lattice", json.dumps(inp["lattice"])]
    if cmd == "class-field":
        argv = [cmd, "--spec", json.dumps(inp["spec"]), "--support", ",".join(inp["support"])]
        return argv + (["--indefinite"] if inp.get("indefinite") else [])
    if cmd == "reproduce":
        w = inp.get("witnesses", "builtin")
        return [cmd, inp["tier"]] + ([] if w == "builtin" else ["--witnesses", w])
    raise UsageError(f"cannot replay a {cmd!r} report")


# -- plumbing -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default $QUATSPIN_JOBS or 1)")
    common.add_argument("--progress", action="store_true", help="heartbeat lines on stderr")
    common.add_argument("--pi", default="2", help="i^2 for literal quaternions")
    common.add_argument("--delta", default="1", help="w^2 = w + delta")

    ap = argparse.ArgumentParser(prog="quatspin", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kstar-check", parents=[common], help="test the k-star conditions for one r")
    p.add_argument("--a1", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--r", required=True)
    p.set_defaults(func=cmd_kstar_check)

    p = sub.add_parser("search", parents=[common], help="bounded witness search")
    p.add_argument("--a1", required=True, help="JSON, literal, class:<d> or i_pi:<p>")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--bound", type=int, default=None, help="exponent u of the box [0, 2^u)^4")
    p.add_argument("--refined", action="store_true", help="use u = t + 3")
    p.add_argument("--engine", choices=("tree", "scan"), default="tree")
    p.add_argument("--time-limit", type=float, default=None, help="seconds before aborting")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-tables", parents=[common], help="re-check the stored witness tables")
    p.add_argument("--witnesses", default=None, help="alternative witness table file")
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("spinor-image", parents=[common], help="H(Lambda) from Jordan data")
    p.add_argument("--lattice", required=True, help="lattice JSON or file")
    p.add_argument("--cross-check", action="store_true", help="confirm a binary verdict by search")
    p.set_defaults(func=cmd_spinor_image)

    p = sub.add_parser("class-field", parents=[common], help="spinor class field over Q")
    p.add_argument("--spec", required=True, help="local image spec JSON or file")
    p.add_argument("--support", default="2", help="comma-separated primes")
    p.add_argument("--indefinite", action="store_true", help="class and spinor genus coincide")
    p.set_defaults(func=cmd_class_field)

    p = sub.add_parser("reproduce", parents=[common], help="run the whole verification suite")
    p.add_argument("tier", choices=("fast", "full"), nargs="?", default="fast")
    p.add_argument("--witnesses", default=None, help="alternative witness table file")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("replay", parents=[common], help="re-run a saved report and compare")
    p.add_argument("report", help="report JSON or file")
    p.set_defaults(func=cmd_replay)
    return ap


def run(argv: List[str]) -> RunReport:
    """Parse and execute; raises UsageError or QuatspinError on bad input."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        raise UsageError(f"bad command line: {' '.join(argv)}") from exc
    if args.jobs is None:
        args.jobs = default_jobs()
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    start = time.monotonic()
    report = args.func(args)
    report.elapsed = time.monotonic() - start
    return report


def _print_text(report: RunReport) -> None:
    print(f"{report.command}: {report.status}")
    for key, val in report.verdict.items():
        if key == "checks":
            continue
        print(f"  {key}: {json.dumps(val) if isinstance(val, (dict, list)) else val}")
    if report.citations:
        print(f"  citations: {', '.join(report.citations)}")


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        report = run(argv)
    except (UsageError, QuatspinError, OSError) as exc:
        if isinstance(exc, SearchAborted):
            print(f"aborted: {exc}", file=sys.stderr)
            return EXIT_ABORT
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "text":
        _print_text(report)
    else:
        print(json.dumps(report.to_json(), indent=2))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
