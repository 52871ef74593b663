"""From local spinor images to the spinor class field over Q.

Each local image H_v is given by a finite list of generators in Q_v^*.  A
quadratic field Q(sqrt(m)) lies in the spinor class field exactly when every
H_v consists of local norms from Q_v(sqrt(m)), i.e. (g, m)_v = 1 for every
generator g at every place v.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import ArgumentError
from .images import SpinorImage
from .padic2 import as_rat, hilbert, is_prime, legendre, square_class_2

Place = Union[int, str]

INF = "inf"
INF_POSITIVE = "positive"          # Sigma is real: H_inf is all of R^*, so m > 0
INF_UNCONSTRAINED = "unconstrained"  # H_inf = R_{>0}: no condition at infinity


def least_nonresidue(p: int) -> int:
    if not is_prime(p) or p == 2:
        raise ArgumentError(f"{p} is not an odd prime")
    return next(n for n in range(2, p) if legendre(n, p) == -1)


def unit_generators(place: Place) -> Tuple[Fraction, ...]:
    """Generators of Z_v^* Q_v^{*2}, the default local image."""
    if place == 2:
        return (Fraction(-1), Fraction(5))
    return (Fraction(least_nonresidue(int(place))),)


def image_generators(img: SpinorImage) -> Tuple[Fraction, ...]:
    """A minimal generating set of a subgroup of Q_2^*/Q_2^{*2}."""
    members = img.members()
    span = {1}
    gens: List[Fraction] = []
    for c in members:
        if c not in span:
            gens.append(Fraction(c))
            span |= {square_class_2(Fraction(s) * c) for s in span}
    return tuple(gens)


def _parse_place(key) -> Place:
    if str(key) in ("inf", "oo", "infinity"):
        return INF
    try:
        p = int(str(key))
    except ValueError as exc:
        raise ArgumentError(f"bad place {key!r}") from exc
    if not is_prime(p):
        raise ArgumentError(f"place {p} is not a prime")
    return p


@dataclass(frozen=True)
class LocalImageSpec:
    """Generators of H_v per finite place, plus the condition at infinity.

    Absent odd primes (and an absent 2) carry the unit classes; an absent
    infinite place means H_inf = R^*, which only admits real fields.
    """

    entries: Dict[int, Tuple[Fraction, ...]] = field(default_factory=dict)
    inf: str = INF_POSITIVE

    def __post_init__(self) -> None:
        clean: Dict[int, Tuple[Fraction, ...]] = {}
        for p, gens in self.entries.items():
            if not isinstance(p, int) or not is_prime(p):
                raise ArgumentError(f"place {p!r} is not a prime")
            gens = tuple(as_rat(g) for g in gens)
            if not gens:
                raise ArgumentError(f"empty generator list at {p}")
            if any(g == 0 for g in gens):
                raise ArgumentError(f"zero generator at {p}")
            clean[p] = gens
        object.__setattr__(self, "entries", clean)
        if self.inf not in (INF_POSITIVE, INF_UNCONSTRAINED):
            raise ArgumentError(f"infinite place must be {INF_POSITIVE!r} or {INF_UNCONSTRAINED!r}")

    def generators(self, p: int) -> Tuple[Fraction, ...]:
        return self.entries.get(p) or unit_generators(p)

    def with_entry(self, p: int, gens: Iterable) -> "LocalImageSpec":
        entries = dict(self.entries)
        entries[p] = tuple(as_rat(g) for g in gens)
        return LocalImageSpec(entries, self.inf)

    def to_json(self) -> dict:
        places: Dict[str, object] = {str(p): [str(g) for g in gens]
                                     for p, gens in sorted(self.entries.items())}
        places["inf"] = self.inf
        return {"schema": 1, "places": places}

    @classmethod
    def from_json(cls, obj: dict) -> "LocalImageSpec":
        """Places map to generator lists; 2 may also hold a spinor image object.

        The infinite place takes ``"positive"``, ``"unconstrained"`` or a
        generator list (containing a negative number means ``"positive"``).
        """
        if not isinstance(obj, dict) or not isinstance(obj.get("places", {}), dict):
            raise ArgumentError("spec JSON must be an object with a \"places\" object")
        if "schema" in obj and str(obj["schema"]) != "1":
            raise ArgumentError(f"unsupported spec schema {obj['schema']!r}")
        entries: Dict[int, Tuple[Fraction, ...]] = {}
        inf = INF_POSITIVE
        for key, val in obj.get("places", {}).items():
            place = _parse_place(key)
            if place == INF:
                if isinstance(val, list):
                    inf = INF_POSITIVE if any(as_rat(str(g)) < 0 for g in val) else INF_UNCONSTRAINED
                else:
                    inf = str(val)
                continue
            if isinstance(val, dict):
                if place != 2:
                    raise ArgumentError("image objects are only understood at 2")
                entries[place] = image_generators(SpinorImage.from_json(val))
                if not entries[place]:
                    raise ArgumentError("the trivial group is not a spinor image")
            elif isinstance(val, list):
                entries[place] = tuple(as_rat(str(g)) for g in val)
            else:
                raise ArgumentError(f"bad generator list at {key}: {val!r}")
        return cls(entries, inf)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "LocalImageSpec":
        try:
            return cls.from_json(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise ArgumentError(f"{path}: not valid JSON: {exc}") from exc


def is_squarefree(m: int) -> bool:
    if m == 0:
        return False
    n = abs(m)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


def prime_divisors(n: int) -> List[int]:
    n, out, f = abs(n), [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def field_in_sigma(spec: LocalImageSpec, m: int) -> bool:
    """Is Q(sqrt(m)) contained in the spinor class field?"""
    if not isinstance(m, int) or isinstance(m, bool):
        raise ArgumentError(f"m must be an integer, got {m!r}")
    if m == 1 or not is_squarefree(m):
        raise ArgumentError(f"m = {m} must be squarefree and different from 0, 1")
    if spec.inf == INF_POSITIVE and m < 0:
        return False
    places = set(spec.entries) | set(prime_divisors(2 * m))
    return all(hilbert(g, m, p) == 1 for p in sorted(places) for g in spec.generators(p))


@dataclass(frozen=True)
class ClassFieldResult:
    discriminants: Tuple[int, ...]     # every m != 1 with Q(sqrt m) inside
    generators: Tuple[int, ...]        # an independent set generating them mod squares
    spinor_genera: int
    class_number: Optional[int] = None

    @property
    def is_rational(self) -> bool:
        return not self.generators

    def describe(self) -> str:
        if not self.generators:
            return "Q"
        return "Q(" + ", ".join(f"sqrt({m})" for m in self.generators) + ")"

    def to_json(self) -> dict:
        return {
            "sigma": self.describe(),
            "sigma_generators": [str(m) for m in self.generators],
            "discriminants": [str(m) for m in self.discriminants],
            "spinor_genera": str(self.spinor_genera),
            "class_number": None if self.class_number is None else str(self.class_number),
        }


def _squarefree_product(ms: Iterable[int]) -> int:
    sign, primes = 1, set()
    for m in ms:
        if m < 0:
            sign = -sign
        for p in prime_divisors(m):
            primes ^= {p}
    out = sign
    for p in primes:
        out *= p
    return out


def spinor_class_field(spec: LocalImageSpec, support: Sequence[int],
                       indefinite: bool = False) -> ClassFieldResult:
    """Sigma inside the compositum of Q(sqrt(-1)) and Q(sqrt(p)) for p in ``support``.

    ``indefinite`` asserts that class and spinor genus coincide, which makes the
    number of spinor genera a class number.
    """
    support = sorted(set(int(p) for p in support))
    for p in support:
        if not is_prime(p):
            raise ArgumentError(f"support entry {p} is not a prime")
    if 2 not in support:
        raise ArgumentError("the support must contain 2")
    missing = sorted(set(spec.entries) - set(support))
    if missing:
        raise ArgumentError(f"support must contain every prime of the spec; missing {missing}")
    basis = [-1] + support
    admitted = []
    for bits in itertools.product((0, 1), repeat=len(basis)):
        m = _squarefree_product(b for b, on in zip(basis, bits) if on)
        if m != 1 and field_in_sigma(spec, m):
            admitted.append(m)
    admitted.sort(key=lambda m: (abs(m), m < 0))
    gens: List[int] = []
    span = {1}
    for m in admitted:
        if m not in span:
            gens.append(m)
            span |= {_squarefree_product((s, m)) for s in span}
    if len(span) != len(admitted) + 1:
        raise AssertionError("admitted discriminants do not form a group")
    genera = len(span)
    return ClassFieldResult(tuple(admitted), tuple(gens), genera, genera if indefinite else None)


# -- worked examples -------------------------------------------------------------------

def load_example(name: str) -> LocalImageSpec:
    text = resources.files("quatspin.data").joinpath(f"{name}.json").read_text()
    return LocalImageSpec.from_json(json.loads(text))


def example_family_spec(t: int) -> LocalImageSpec:
    """<i> _|_ <2^t i> in (2, 5 / Q): unimodular away from 2, H_2 from the local table."""
    from .quatalg import DEFAULT_PARAMS
    from .spinor_table import LatticeDescriptor, spinor_image

    h2 = spinor_image(LatticeDescriptor.binary(DEFAULT_PARAMS.i(), t))
    return LocalImageSpec({2: image_generators(h2)}, INF_POSITIVE)
