"""Published witness tables, stored as data and re-checked from scratch.

Two kinds of rows:

* unit rows give, for q and t, elements r1 and r2 with |1 - r1| = |2| and
  |1 - r2| = |i| such that N(z) N(q) is a square and N(z) / N(2^t q) is a
  2-adic *unit* (stricter than the integrality in the k-star conditions);
* k-star rows give r passing the k-star conditions together with the
  recomputable values N(1 - r), z and N(z) N(a1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .errors import ArgumentError
from .padic2 import is_square_2, vp
from .quatalg import AlgebraParams, Quat, d_valuation, i_pi, parse_quat, reduced_norm, z_of
from .search import KStarInstance, kstar_check

TABLE_FILE = "witness_tables.json"


@dataclass
class RowCheck:
    table: str
    row: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"table": self.table, "row": self.row, "pass": self.passed,
                "details": self.details, "failures": list(self.failures)}


@dataclass
class TableReport:
    rows: List[RowCheck]
    source: str

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r.passed for r in self.rows)

    def failures(self) -> List[RowCheck]:
        return [r for r in self.rows if not r.passed]

    def to_json(self) -> dict:
        return {"pass": self.passed, "source": self.source,
                "rows": [r.to_json() for r in self.rows]}


def load_tables(path: Union[str, Path, None] = None) -> dict:
    if path is None:
        text = resources.files("quatspin.data").joinpath(TABLE_FILE).read_text()
    else:
        text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"witness file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema") != 1:
        raise ArgumentError("witness file must be a JSON object with \"schema\": 1")
    return data


def resolve_element(name: str, params: AlgebraParams) -> Quat:
    """A quaternion literal, or ``i_pi:<p>`` for the pure element squaring to p."""
    if name.startswith("i_pi:"):
        return i_pi(params, Fraction(name[5:]))[0]
    return parse_quat(name, params)


def _check_unit_row(row: dict, params: AlgebraParams) -> RowCheck:
    q = resolve_element(row["q"], params)
    t = int(row["t"])
    check = RowCheck("unit", row["id"], True)
    nq = reduced_norm(q)
    need = 2 * t + vp(nq, 2)
    for key, want_val in (("r1", 2), ("r2", 1)):
        r = parse_quat(row[key], params)
        one_minus = 1 - r
        z = z_of(q, r)
        info: Dict[str, Any] = {"r": str(r), "valuation_1_minus_r": None, "nz_nq": None}
        if not one_minus or not z:
            check.failures.append(f"{key}: degenerate (1 - r = 0 or z = 0)")
            check.details[key] = info
            continue
        dv = d_valuation(one_minus)
        nz = reduced_norm(z)
        info.update(valuation_1_minus_r=str(dv), z=str(z), nz_nq=str(nz * nq))
        check.details[key] = info
        if dv != want_val:
            check.failures.append(f"{key}: nu(1 - r) = {dv}, expected {want_val}")
        if not is_square_2(nz * nq):
            check.failures.append(f"{key}: N(z)N(q) = {nz * nq} is not a square")
        if vp(nz, 2) != need:
            check.failures.append(f"{key}: v2(N(z)) = {vp(nz, 2)}, expected exactly {need}")
    check.passed = not check.failures
    return check


def _check_kstar_row(row: dict, params: AlgebraParams) -> List[RowCheck]:
    out = []
    r = parse_quat(row["r"], params)
    t = int(row["t"])
    for name in row["a1"]:
        a1 = resolve_element(name, params)
        check = RowCheck("kstar", f"{row['id']}[{name}]", True)
        if "z" in row:
            want_z = parse_quat(row["z"], params)
        else:
            want_z = a1 * parse_quat(row["z_over_i_pi"], params)
        inst = KStarInstance(a1, t)
        rep = kstar_check(inst, r)
        z = z_of(a1, r)
        check.details = {"a1": str(a1), "r": str(r), "t": str(t), "n1mr": str(rep.n1mr),
                         "z": str(z), "nz_na1": str(rep.nz_na1)}
        if not rep.passed:
            check.failures.append("k-star conditions fail: " + json.dumps(rep.to_json()))
        if rep.n1mr != Fraction(row["n1mr"]):
            check.failures.append(f"N(1 - r) = {rep.n1mr}, table says {row['n1mr']}")
        if z != want_z:
            check.failures.append(f"z = {z}, table says {want_z}")
        if rep.nz_na1 != Fraction(row["nz_na1"]):
            check.failures.append(f"N(z)N(a1) = {rep.nz_na1}, table says {row['nz_na1']}")
        # a witness for t is a witness for every smaller t
        for s in range(1, t):
            if not kstar_check(inst.with_t(s), r).passed:
                check.failures.append(f"fails at smaller t = {s}")
        check.passed = not check.failures
        out.append(check)
    return out


def verify_witness_tables(path: Union[str, Path, None] = None) -> TableReport:
    """Re-check every stored row; failures are entries of the report, not exceptions."""
    data = load_tables(path)
    p = data.get("params", {})
    params = AlgebraParams(p.get("pi", "2"), p.get("delta", "1"))
    rows: List[RowCheck] = []
    for row in data.get("unit_rows", []):
        rows.extend(_guard("unit", row, lambda: [_check_unit_row(row, params)]))
    for row in data.get("kstar_rows", []):
        rows.extend(_guard("kstar", row, lambda: _check_kstar_row(row, params)))
    return TableReport(rows, "builtin" if path is None else str(path))


def _guard(table: str, row: dict, fn) -> List[RowCheck]:
    try:
        return fn()
    except (ArgumentError, KeyError, ValueError, TypeError) as exc:
        rid = row.get("id", "?") if isinstance(row, dict) else "?"
        return [RowCheck(table, str(rid), False, failures=[f"malformed row: {exc}"])]


def table_witnesses(path: Optional[str] = None) -> List[tuple]:
    """(a1, t, r) for every stored k-star witness, for use in searches and tests."""
    data = load_tables(path)
    p = data.get("params", {})
    params = AlgebraParams(p.get("pi", "2"), p.get("delta", "1"))
    out = []
    for row in data.get("kstar_rows", []):
        r = parse_quat(row["r"], params)
        for name in row["a1"]:
            out.append((resolve_element(name, params), int(row["t"]), r))
    return out
