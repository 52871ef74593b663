"""Arithmetic in the quaternion algebra D = (pi, Delta / Q_2) and its maximal order.

Elements are written ``a + b*w + c*i + d*i*w`` in the basis {1, w, i, iw} of
O_D, where ``w = (1 + j)/2``, ``i^2 = pi``, ``j^2 = Delta = 1 + 4*delta`` and
``ij = -ji``.  Internally a quaternion is the pair ``X + i*Y`` with X, Y in
Q[w], ``w^2 = w + delta`` and ``i*s = conj(s)*i`` for s in Q[w].

The coordinate-level helpers (``omega_mul``, ``mul_coords`` ...) only use
``+``, ``-`` and ``*`` so they also run on numpy arrays; the search engine
relies on that.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Tuple

from .errors import ArgumentError, DomainError, UnrepresentableError
from .padic2 import (
    RatLike,
    UnitDefect,
    as_rat,
    classify_unit_defect,
    square_class_2,
    vp,
)

Coords = Tuple[Fraction, Fraction, Fraction, Fraction]


# -- coordinate level -------------------------------------------------------

def omega_mul(x0, x1, y0, y1, delta):
    """(x0 + x1 w)(y0 + y1 w) with w^2 = w + delta."""
    t = x1 * y1
    return x0 * y0 + delta * t, x0 * y1 + x1 * y0 + t


def omega_conj(x0, x1):
    return x0 + x1, -x1


def mul_coords(p, q, pi, delta):
    """Product of two coordinate 4-tuples: (X + iY)(U + iW) = XU + pi*conj(Y)W + i(conj(X)W + YU)."""
    a, b, c, d = p
    e, f, g, h = q
    xu0, xu1 = omega_mul(a, b, e, f, delta)
    yb0, yb1 = omega_conj(c, d)
    yw0, yw1 = omega_mul(yb0, yb1, g, h, delta)
    xb0, xb1 = omega_conj(a, b)
    xw0, xw1 = omega_mul(xb0, xb1, g, h, delta)
    yu0, yu1 = omega_mul(c, d, e, f, delta)
    return (xu0 + pi * yw0, xu1 + pi * yw1, xw0 + yu0, xw1 + yu1)


def conj_coords(q):
    a, b, c, d = q
    return (a + b, -b, -c, -d)


def norm_coords(q, pi, delta):
    """Reduced norm a^2 + ab - delta b^2 - pi (c^2 + cd - delta d^2)."""
    a, b, c, d = q
    return a * a + a * b - delta * b * b - pi * (c * c + c * d - delta * d * d)


def z_coords(a1, r, pi, delta):
    """a1 - r a1 conj(r) on coordinate tuples."""
    rar = mul_coords(mul_coords(r, a1, pi, delta), conj_coords(r), pi, delta)
    return tuple(x - y for x, y in zip(a1, rar))


# -- value types ---------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraParams:
    """Parameters of D: ``i^2 = pi`` and ``j^2 = 1 + 4*delta`` (a unit of minimal defect)."""

    pi: Fraction
    delta: Fraction

    def __init__(self, pi: RatLike = 2, delta: RatLike = 1) -> None:
        object.__setattr__(self, "pi", as_rat(pi))
        object.__setattr__(self, "delta", as_rat(delta))
        if self.pi == 0 or vp(self.pi, 2) != 1:
            raise ArgumentError(f"pi must have 2-adic valuation 1, got {self.pi}")
        if self.delta == 0 or vp(self.delta, 2) != 0:
            raise ArgumentError(f"delta must be a 2-adic unit, got {self.delta}")
        if classify_unit_defect(self.Delta) is not UnitDefect.MINIMAL:
            raise ArgumentError(f"1 + 4*delta = {self.Delta} is not of minimal quadratic defect")

    @property
    def Delta(self) -> Fraction:
        return 1 + 4 * self.delta

    def quat(self, a: RatLike = 0, b: RatLike = 0, c: RatLike = 0, d: RatLike = 0) -> "Quat":
        return Quat(self, a, b, c, d)

    def one(self) -> "Quat":
        return self.quat(1)

    def omega(self) -> "Quat":
        return self.quat(0, 1)

    def i(self) -> "Quat":
        return self.quat(0, 0, 1)

    def j(self) -> "Quat":
        return self.quat(-1, 2)

    def to_json(self) -> dict:
        return {"pi": str(self.pi), "delta": str(self.delta)}


DEFAULT_PARAMS = AlgebraParams(2, 1)


class Quat:
    """Element of D in coordinates over {1, w, i, iw}."""

    __slots__ = ("params", "coords")

    def __init__(self, params: AlgebraParams, a: RatLike = 0, b: RatLike = 0,
                 c: RatLike = 0, d: RatLike = 0) -> None:
        self.params = params
        self.coords: Coords = (as_rat(a), as_rat(b), as_rat(c), as_rat(d))

    @classmethod
    def from_coords(cls, params: AlgebraParams, coords) -> "Quat":
        return cls(params, *coords)

    a = property(lambda self: self.coords[0])
    b = property(lambda self: self.coords[1])
    c = property(lambda self: self.coords[2])
    d = property(lambda self: self.coords[3])

    def _same(self, other: "Quat") -> None:
        if other.params != self.params:
            raise ArgumentError("quaternions belong to different algebras")

    def _lift(self, other: Any) -> "Quat":
        if isinstance(other, Quat):
            self._same(other)
            return other
        return Quat(self.params, as_rat(other) if not isinstance(other, Fraction) else other)

    def __add__(self, other: Any) -> "Quat":
        o = self._lift(other)
        return Quat.from_coords(self.params, (x + y for x, y in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Quat":
        o = self._lift(other)
        return Quat.from_coords(self.params, (x - y for x, y in zip(self.coords, o.coords)))

    def __rsub__(self, other: Any) -> "Quat":
        return self._lift(other) - self

    def __neg__(self) -> "Quat":
        return Quat.from_coords(self.params, (-x for x in self.coords))

    def __mul__(self, other: Any) -> "Quat":
        if isinstance(other, Quat):
            return quat_mul(self, other)
        s = as_rat(other) if not isinstance(other, Fraction) else other
        return Quat.from_coords(self.params, (s * x for x in self.coords))

    def __rmul__(self, other: Any) -> "Quat":
        s = as_rat(other) if not isinstance(other, Fraction) else other
        return Quat.from_coords(self.params, (s * x for x in self.coords))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Quat):
            return self.params == other.params and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords == (Fraction(other), 0, 0, 0)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.params, self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    def __repr__(self) -> str:
        return f"Quat({format_quat(self)})"

    def __str__(self) -> str:
        return format_quat(self)

    def to_json(self) -> dict:
        return {**self.params.to_json(), "coords": [str(x) for x in self.coords]}

    @classmethod
    def from_json(cls, obj: dict) -> "Quat":
        try:
            params = AlgebraParams(obj.get("pi", 2), obj.get("delta", 1))
            coords = obj["coords"]
        except (KeyError, AttributeError, TypeError) as exc:
            raise ArgumentError(f"bad quaternion JSON: {obj!r}") from exc
        if len(coords) != 4:
            raise ArgumentError("coords must have four entries")
        return cls.from_coords(params, (as_rat(str(x)) for x in coords))


# -- operations ----------------------------------------------------------------

def quat_mul(x: Quat, y: Quat) -> Quat:
    x._same(y)
    p = x.params
    return Quat.from_coords(p, mul_coords(x.coords, y.coords, p.pi, p.delta))


def quat_conj(q: Quat) -> Quat:
    return Quat.from_coords(q.params, conj_coords(q.coords))


def reduced_trace(q: Quat) -> Fraction:
    return 2 * q.a + q.b


def reduced_norm(q: Quat) -> Fraction:
    return norm_coords(q.coords, q.params.pi, q.params.delta)


def norm_by_product(q: Quat) -> Fraction:
    """Scalar part of ``q * conj(q)``; an independent route to the reduced norm."""
    prod = quat_mul(q, quat_conj(q))
    if prod.coords[1:] != (0, 0, 0):
        raise AssertionError(f"q*conj(q) is not scalar for q = {q}")
    return prod.a


def d_valuation(q: Quat) -> int:
    """Valuation on D: v_2 of the reduced norm, so nu(i) = 1 and nu(2) = 2."""
    if not q:
        raise DomainError("valuation of zero")
    return vp(reduced_norm(q), 2)


def is_integral(q: Quat) -> bool:
    return all(x == 0 or vp(x, 2) >= 0 for x in q.coords)


def is_pure(q: Quat) -> bool:
    return bool(q) and reduced_trace(q) == 0


def inverse(q: Quat) -> Quat:
    n = reduced_norm(q)
    if n == 0:
        raise DomainError("inverse of zero")
    return quat_conj(q) * (1 / n)


def z_of(a1: Quat, r: Quat) -> Quat:
    """``a1 - r a1 conj(r)``; pure whenever a1 is."""
    if not is_pure(a1):
        raise ArgumentError(f"a1 = {a1} is not a pure quaternion")
    a1._same(r)
    p = a1.params
    return Quat.from_coords(p, z_coords(a1.coords, r.coords, p.pi, p.delta))


def _congruent(x: Fraction, target: int, bits: int) -> bool:
    diff = x - target
    return diff == 0 or vp(diff, 2) >= bits


def _pure_candidates(params: AlgebraParams, limit: int) -> Iterator[Quat]:
    j = params.j()
    for box in range(1, limit + 1):
        for b, c, d in itertools.product(range(-box, box + 1), repeat=3):
            if max(abs(b), abs(c), abs(d)) != box:
                continue
            yield j * b + params.quat(0, 0, c, d)


def pure_with_norm_class(params: AlgebraParams, target: int, limit: int = 8) -> Quat:
    """Smallest integral pure quaternion whose reduced norm lies in the class ``target``.

    Candidates ``b*j + c*i + d*iw`` are scanned box by box (max |coordinate|)
    in lexicographic order.  Unit targets are matched mod 8 and prime targets
    mod 16, which pins the square class.
    """
    target = int(target)
    if square_class_2(target) != target:
        raise ArgumentError(f"{target} is not a canonical square-class representative")
    if target == -1:
        raise UnrepresentableError("a pure quaternion cannot have norm in the class -1")
    bits = 3 if target % 2 else 4
    for q in _pure_candidates(params, limit):
        n = reduced_norm(q)
        if n != 0 and vp(n, 2) >= 0 and _congruent(n, target, bits):
            return q
    raise UnrepresentableError(f"no pure quaternion of norm class {target} within box {limit}")


def i_pi(params: AlgebraParams, prime: RatLike, limit: int = 12) -> Tuple[Quat, Quat]:
    """A pure ``i_p = i*alpha`` (alpha in Z[w]) with ``i_p^2 = prime``.

    Returns ``(i_p, alpha)``.  When no alpha in the search box gives the
    square exactly, the first alpha with ``i_p^2 = prime (mod 16)`` is used, so
    ``i_p^2`` still lies in ``prime * Q_2^{*2}``.
    """
    prime = as_rat(prime)
    if prime == 0 or vp(prime, 2) != 1:
        raise ArgumentError(f"{prime} is not a prime of Q_2")
    ratio = prime / params.pi  # need N(alpha) = ratio, since (i alpha)^2 = pi N(alpha)
    cands = sorted(
        itertools.product(range(-limit, limit + 1), repeat=2),
        key=lambda xy: (max(abs(xy[0]), abs(xy[1])), abs(xy[0]) + abs(xy[1]), xy[0] < 0, xy[1] < 0, xy),
    )
    fallback = None
    for x, y in cands:
        alpha = params.quat(x, y)
        n = reduced_norm(alpha)
        if n == ratio:
            return params.i() * alpha, alpha
        if fallback is None and n != 0 and _congruent(params.pi * n, prime, 4):
            fallback = alpha
    if fallback is None:
        raise UnrepresentableError(f"no i_pi for pi = {prime}")
    return params.i() * fallback, fallback


# -- text form ------------------------------------------------------------------

_BASIS_NAMES = ("", "w", "i", "i*w")


def format_quat(q: Quat) -> str:
    parts = []
    for x, name in zip(q.coords, _BASIS_NAMES):
        if x == 0:
            continue
        mag = abs(x)
        if name and mag == 1:
            body = name
        elif name:
            body = f"{mag}*{name}"
        else:
            body = str(mag)
        parts.append(("-" if x < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(i\s*\*?\s*w|i\s*\*?\s*j|iw|ij|w|i|j)?\s*")


def parse_quat(text: str, params: AlgebraParams = DEFAULT_PARAMS) -> Quat:
    """Parse sums like ``-1-4i-4iw``, ``j+ij`` or ``1 + 2*i*w``."""
    text = text.strip().replace("ω", "w")
    if not text:
        raise ArgumentError("empty quaternion literal")
    basis = {
        "": params.one(), "w": params.omega(), "i": params.i(),
        "iw": params.i() * params.omega(), "j": params.j(), "ij": params.i() * params.j(),
    }
    total = params.quat()
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ArgumentError(f"cannot parse quaternion literal {text!r}")
        sign, coef, name = m.groups()
        if pos > 0 and not sign:
            raise ArgumentError(f"missing sign between terms in {text!r}")
        value = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            value = -value
        key = re.sub(r"[\s*]", "", name or "")
        total = total + basis[key] * value
        pos = m.end()
    return total
