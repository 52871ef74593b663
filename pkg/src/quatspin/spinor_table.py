"""H(Lambda) for skew-hermitian lattices over Q_2 from their Jordan data.

A lattice is described by its rank-1 components <a_1>, ..., <a_n> (in order
of non-increasing scale, i.e. non-decreasing valuation) and the number s of
indecomposable rank-2 components.  The image depends only on s, the set A of
norm classes of the a_m, and the minimal valuation gap mu between consecutive
rank-1 components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple, Union

from .errors import ArgumentError, DomainError
from .images import SpinorImage
from .padic2 import as_rat, square_class_2
from .quatalg import DEFAULT_PARAMS, AlgebraParams, Quat, d_valuation, is_pure, parse_quat, reduced_norm

INF = math.inf

# valuation thresholds on D: nu(8) and nu(16)
NU8 = 6
NU16 = 8

UNIT_CLASSES = frozenset({1, 5})            # -u for u of non-minimal defect
PRIME_CLASSES = frozenset({2, -2, 10, -10})
MINUS_DELTA = -5

# dispatch rules, in the order they are tried
RULE_RANK2 = "rank2-present"
RULE_SEVERAL = "several-norm-classes"
RULE_MINUS_DELTA = "norm-class-minus-delta"
RULE_UNIT_LOW = "unit-class-mu-below-nu8"
RULE_UNIT_HIGH = "unit-class-mu-at-least-nu8"
RULE_PRIME_LOW = "prime-class-mu-at-most-nu16"
RULE_PRIME_HIGH = "prime-class-mu-above-nu16"

RULES = (RULE_SEVERAL, RULE_MINUS_DELTA, RULE_UNIT_LOW, RULE_UNIT_HIGH,
         RULE_PRIME_LOW, RULE_PRIME_HIGH, RULE_RANK2)

Mu = Union[int, float]


@dataclass(frozen=True)
class LatticeDescriptor:
    rank1_components: Tuple[Quat, ...]
    rank2_count: int = 0

    def __post_init__(self) -> None:
        comps = tuple(self.rank1_components)
        object.__setattr__(self, "rank1_components", comps)
        if not isinstance(self.rank2_count, int) or self.rank2_count < 0:
            raise ArgumentError(f"rank2_count must be a non-negative integer, got {self.rank2_count!r}")
        if not comps and self.rank2_count == 0:
            raise ArgumentError("a lattice needs at least one component")
        for a in comps:
            if not is_pure(a):
                raise ArgumentError(f"rank-1 component {a} is not a nonzero pure quaternion")
            a._same(comps[0])
        vals = [d_valuation(a) for a in comps]
        if any(x > y for x, y in zip(vals, vals[1:])):
            raise ArgumentError(f"components must have non-decreasing valuation, got {vals}")

    @property
    def params(self) -> AlgebraParams:
        return self.rank1_components[0].params if self.rank1_components else DEFAULT_PARAMS

    def scaled(self, c) -> "LatticeDescriptor":
        c = as_rat(c)
        return LatticeDescriptor(tuple(a * c for a in self.rank1_components), self.rank2_count)

    @classmethod
    def binary(cls, a1: Quat, t: int) -> "LatticeDescriptor":
        """<a1> _|_ <2^t a1>."""
        return cls((a1, a1 * (Fraction(2) ** t)))

    def as_binary(self) -> Optional[Tuple[Quat, int]]:
        """(a1, t) if this is <a1> _|_ <2^t a1> with t >= 1, else None."""
        if self.rank2_count or len(self.rank1_components) != 2:
            return None
        a1, a2 = self.rank1_components
        k = next(n for n in range(4) if a1.coords[n])
        ratio = a2.coords[k] / a1.coords[k]
        if a2 != a1 * ratio or ratio.denominator != 1 or ratio.numerator < 2:
            return None
        t = ratio.numerator.bit_length() - 1
        return (a1, t) if ratio.numerator == 1 << t else None

    def to_json(self) -> dict:
        p = self.params
        return {
            "schema": 1,
            "pi": str(p.pi),
            "delta": str(p.delta),
            "components": [{"coords": [str(x) for x in a.coords], "scale_shift": "0"}
                           for a in self.rank1_components],
            "rank2_count": str(self.rank2_count),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LatticeDescriptor":
        """Components are ``2^scale_shift * q`` with q given by ``coords`` or a ``quat`` literal."""
        if not isinstance(obj, dict):
            raise ArgumentError("lattice JSON must be an object")
        if "schema" in obj and str(obj["schema"]) != "1":
            raise ArgumentError(f"unsupported lattice schema {obj['schema']!r}")
        params = AlgebraParams(obj.get("pi", "2"), obj.get("delta", "1"))
        comps = []
        for c in obj.get("components", []):
            if not isinstance(c, dict):
                raise ArgumentError(f"bad component {c!r}")
            if "coords" in c:
                if len(c["coords"]) != 4:
                    raise ArgumentError("coords must have four entries")
                q = Quat.from_coords(params, (as_rat(str(x)) for x in c["coords"]))
            elif "quat" in c:
                q = parse_quat(str(c["quat"]), params)
            else:
                raise ArgumentError(f"component needs coords or quat: {c!r}")
            shift = int(str(c.get("scale_shift", "0")))
            comps.append(q * (Fraction(2) ** shift))
        try:
            rank2 = int(str(obj.get("rank2_count", "0")))
        except ValueError as exc:
            raise ArgumentError(f"bad rank2_count {obj.get('rank2_count')!r}") from exc
        return cls(tuple(comps), rank2)


@dataclass(frozen=True)
class Classification:
    s: int
    A: FrozenSet[int]
    mu: Mu

    def to_json(self) -> dict:
        return {"s": str(self.s), "A": sorted(str(x) for x in self.A),
                "mu": "inf" if self.mu == INF else str(self.mu)}


@dataclass(frozen=True)
class ImageResult:
    image: SpinorImage
    rule: str
    classification: Classification

    def to_json(self) -> dict:
        return {**self.image.to_json(), "rule": self.rule,
                "classification": self.classification.to_json()}


def classify(desc: LatticeDescriptor) -> Classification:
    classes = set()
    for a in desc.rank1_components:
        c = square_class_2(reduced_norm(a))
        if c == -1:
            raise DomainError(f"a pure quaternion cannot have norm in the class -1 (got {a})")
        classes.add(c)
    vals = [d_valuation(a) for a in desc.rank1_components]
    gaps = [y - x for x, y in zip(vals, vals[1:])]
    mu: Mu = min(gaps) if gaps else INF
    return Classification(desc.rank2_count, frozenset(classes), mu)


def dispatch(c: Classification, norm_of_a: Optional[Fraction] = None) -> Tuple[SpinorImage, str]:
    """The image for classification data; ``norm_of_a`` is N(a_m) for the single-class rows."""
    if c.s != 0:
        return SpinorImage.full(), RULE_RANK2
    if len(c.A) > 1:
        return SpinorImage.full(), RULE_SEVERAL
    if len(c.A) == 0:
        raise ArgumentError("no rank-1 components and no rank-2 components")
    (cls,) = tuple(c.A)
    if cls != MINUS_DELTA and cls not in UNIT_CLASSES | PRIME_CLASSES:
        raise DomainError(f"norm class {cls} cannot occur for a pure quaternion")
    own = SpinorImage.norm_group(-(norm_of_a if norm_of_a is not None else cls))
    if cls == MINUS_DELTA:
        return SpinorImage.norm_group(5), RULE_MINUS_DELTA
    if cls in UNIT_CLASSES:
        if c.mu < NU8:
            return SpinorImage.full(), RULE_UNIT_LOW
        return own, RULE_UNIT_HIGH
    if cls in PRIME_CLASSES:
        if c.mu <= NU16:
            return SpinorImage.full(), RULE_PRIME_LOW
        return own, RULE_PRIME_HIGH
    raise DomainError(f"norm class {cls} cannot occur for a pure quaternion")


def spinor_image_result(desc: LatticeDescriptor) -> ImageResult:
    c = classify(desc)
    n = reduced_norm(desc.rank1_components[0]) if desc.rank1_components else None
    img, rule = dispatch(c, n)
    return ImageResult(img, rule, c)


def spinor_image(desc: LatticeDescriptor) -> SpinorImage:
    return spinor_image_result(desc).image


def curated_descriptors() -> List[Tuple[str, LatticeDescriptor, SpinorImage]]:
    """Hand-picked lattices with their expected images, one or more per rule and boundary."""
    P = DEFAULT_PARAMS
    q = lambda s: parse_quat(s, P)  # noqa: E731
    jij, ipj, i, iw = q("j+ij"), q("i+j"), q("i"), q("iw")
    i10, im10 = P.quat(0, 0, 2, 1), P.quat(0, 0, 1, -2)   # N = -10, N = 10
    m5 = q("j")                                           # N(j) = -5
    two = lambda k: Fraction(2) ** k  # noqa: E731
    D = LatticeDescriptor
    full = SpinorImage.full()
    ng = SpinorImage.norm_group
    return [
        ("several classes", D((jij, ipj * 2)), full),
        ("several classes, wide gap", D((i, jij * 2**5)), full),
        ("rank-2 present", D((jij, jij * 2**10), 1), full),
        ("rank-2 only", D((), 2), full),
        ("minus delta, single", D((m5,)), ng(5)),
        ("minus delta, pair", D((m5, m5 * 2)), ng(5)),
        ("minus delta, far apart", D((m5, m5 * 2**9)), ng(5)),
        ("class 5, mu = 0", D((jij, jij)), full),
        ("class 5, mu = nu(4)", D((jij, jij * 4)), full),
        ("class 1, mu = nu(4)", D((ipj, ipj * 4)), full),
        ("class 5, mu = nu(8)", D((jij, jij * 8)), ng(-5)),
        ("class 1, mu = nu(8)", D((ipj, ipj * 8)), ng(7)),
        ("class 5, three components", D((jij, jij * 4, jij * 64)), full),
        ("class 1, three components", D((ipj, ipj * 8, ipj * 512)), ng(7)),
        ("class 5, single", D((jij,)), ng(-5)),
        ("class 1, single", D((ipj,)), ng(7)),
        ("class -2, mu = nu(2)", D((i, i * 2)), full),
        ("class -2, mu = nu(16)", D((i, i * two(4))), full),
        ("class -2, mu = nu(32)", D((i, i * two(5))), ng(2)),
        ("class 2, mu = nu(16)", D((iw, iw * two(4))), full),
        ("class 2, mu = nu(32)", D((iw, iw * two(5))), ng(-2)),
        ("class -10, mu = nu(16)", D((i10, i10 * two(4))), full),
        ("class -10, mu = nu(32)", D((i10, i10 * two(5))), ng(10)),
        ("class 10, mu = nu(32)", D((im10, im10 * two(5))), ng(-10)),
        ("class -2, single", D((i,)), ng(2)),
        ("odd valuation gap", D((i, jij * 2)), full),
    ]
