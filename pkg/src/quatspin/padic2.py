"""Exact p-adic predicates on nonzero rationals.

Everything here works on :class:`fractions.Fraction` values.  A p-adic
quantity that the rest of the package needs (valuation, unit residue, square
class, Hilbert symbol) is a function of finitely many digits, so no truncated
p-adic type exists anywhere.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Union

from .errors import ArgumentError, DomainError

RatLike = Union[int, Fraction, str]

#: canonical representatives of Q_2^* / Q_2^{*2}
SQUARE_CLASSES_2 = (1, 5, -1, -5, 2, 10, -2, -10)

# (v2 mod 2, unit mod 8) -> representative
_CLASS_TABLE = {
    (0, 1): 1, (0, 5): 5, (0, 7): -1, (0, 3): -5,
    (1, 1): 2, (1, 5): 10, (1, 7): -2, (1, 3): -10,
}


class UnitDefect(enum.Enum):
    SQUARE = "square"
    MINIMAL = "minimal"
    NON_MINIMAL = "non-minimal"


def as_rat(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ArgumentError(f"not a rational: {x!r}")
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ArgumentError(f"not a rational literal: {x!r}") from exc
    raise ArgumentError(f"not a rational: {x!r}")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _nonzero(x: RatLike, what: str = "argument") -> Fraction:
    q = as_rat(x)
    if q == 0:
        raise DomainError(f"{what} of zero")
    return q


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ArgumentError(f"{p!r} is not a prime")


def _int_val(n: int, p: int) -> int:
    v = 0
    if p == 2:
        return (n & -n).bit_length() - 1
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x: RatLike, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    _check_prime(p)
    q = _nonzero(x, "valuation")
    return _int_val(abs(q.numerator), p) - _int_val(q.denominator, p)


def unit_part(x: RatLike, p: int) -> Fraction:
    """``x / p**vp(x)`` as an exact rational."""
    q = _nonzero(x, "unit part")
    v = vp(q, p)
    return q / Fraction(p) ** v


def unit_part_mod(x: RatLike, p: int, k: int) -> int:
    """Residue of the unit part of ``x`` modulo ``p**k``."""
    if k < 1:
        raise ArgumentError("k must be positive")
    u = unit_part(x, p)
    m = p**k
    return u.numerator * pow(u.denominator, -1, m) % m


def square_class_2(x: RatLike) -> int:
    """Canonical representative of the class of ``x`` in Q_2^*/Q_2^{*2}."""
    q = _nonzero(x, "square class")
    return _CLASS_TABLE[(vp(q, 2) % 2, unit_part_mod(q, 2, 3))]


def square_class_mul(a: int, b: int) -> int:
    """Group law on the canonical representatives."""
    return square_class_2(Fraction(a) * b)


def is_square_2(x: RatLike) -> bool:
    return square_class_2(x) == 1


def classify_unit_defect(u: RatLike) -> UnitDefect:
    q = _nonzero(u, "defect")
    if vp(q, 2) != 0:
        raise ArgumentError(f"not a unit: {q}")
    r = unit_part_mod(q, 2, 3)
    if r == 1:
        return UnitDefect.SQUARE
    if r == 5:
        return UnitDefect.MINIMAL
    return UnitDefect.NON_MINIMAL


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert_2_parts(va: int, ua: int, vb: int, ub: int) -> int:
    """Hilbert symbol at 2 from valuations and odd unit residues mod 8."""
    e = _eps(ua) * _eps(ub) + va * _omega(ub) + vb * _omega(ua)
    return -1 if e % 2 else 1


def hilbert_2(a: RatLike, b: RatLike) -> int:
    qa, qb = _nonzero(a, "Hilbert symbol"), _nonzero(b, "Hilbert symbol")
    return hilbert_2_parts(
        vp(qa, 2), unit_part_mod(qa, 2, 3), vp(qb, 2), unit_part_mod(qb, 2, 3)
    )


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p; 0 if p | a."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_p(a: RatLike, b: RatLike, p: int) -> int:
    """Hilbert symbol at an odd prime p."""
    _check_prime(p)
    if p == 2:
        raise ArgumentError("hilbert_p needs an odd prime; use hilbert_2")
    qa, qb = _nonzero(a, "Hilbert symbol"), _nonzero(b, "Hilbert symbol")
    al, be = vp(qa, p), vp(qb, p)
    u, v = unit_part_mod(qa, p, 1), unit_part_mod(qb, p, 1)
    s = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
    if be % 2:
        s *= legendre(u, p)
    if al % 2:
        s *= legendre(v, p)
    return s


def hilbert_real(a: RatLike, b: RatLike) -> int:
    qa, qb = _nonzero(a, "Hilbert symbol"), _nonzero(b, "Hilbert symbol")
    return -1 if qa < 0 and qb < 0 else 1


def hilbert(a: RatLike, b: RatLike, place: Union[int, str]) -> int:
    """Hilbert symbol at a place: a prime number or ``"inf"``."""
    if place in ("inf", "oo", "infinity"):
        return hilbert_real(a, b)
    if place == 2:
        return hilbert_2(a, b)
    return hilbert_p(a, b, int(place))
