"""Spinor images H(Lambda) as subgroups of Q_2^* containing the squares."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import ArgumentError
from .padic2 import SQUARE_CLASSES_2, RatLike, as_rat, hilbert_2, square_class_2


@dataclass(frozen=True)
class SpinorImage:
    """Either all of Q_2^* (``d is None``) or the norm group {x : (x, d)_2 = 1}."""

    d: Optional[int] = None

    def __post_init__(self) -> None:
        if self.d is not None:
            if square_class_2(self.d) != self.d:
                raise ArgumentError(f"{self.d} is not a canonical square class")
            if self.d == 1:
                raise ArgumentError("NormGroup(1) is the whole group; use SpinorImage.full()")

    @classmethod
    def full(cls) -> "SpinorImage":
        return cls(None)

    @classmethod
    def norm_group(cls, d: RatLike) -> "SpinorImage":
        return cls(square_class_2(d))

    @property
    def is_full(self) -> bool:
        return self.d is None

    def members(self) -> Tuple[int, ...]:
        """The canonical square classes lying in the image."""
        return tuple(c for c in SQUARE_CLASSES_2 if image_contains(self, c))

    def to_json(self) -> dict:
        if self.is_full:
            return {"image": "full"}
        return {"image": "norm_group", "d": str(self.d)}

    @classmethod
    def from_json(cls, obj: dict) -> "SpinorImage":
        if obj.get("image") == "full":
            return cls.full()
        if obj.get("image") == "norm_group":
            return cls.norm_group(int(obj["d"]))
        raise ArgumentError(f"bad spinor image JSON: {obj!r}")

    def __str__(self) -> str:
        if self.is_full:
            return "Q_2^*"
        if self.d == 5:
            return "Z_2^* Q_2^{*2}"
        return f"N(Q_2(sqrt({self.d}))^*)"


def image_contains(img: SpinorImage, x: RatLike) -> bool:
    x = as_rat(x)
    if img.is_full:
        square_class_2(x)  # rejects zero
        return True
    return hilbert_2(x, img.d) == 1
