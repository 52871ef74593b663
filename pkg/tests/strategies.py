"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import assume
from hypothesis import strategies as st

from quatspin.quatalg import DEFAULT_PARAMS, Quat, d_valuation

nonzero_ints = st.integers(-(2**10), 2**10).filter(lambda n: n != 0)
small = st.integers(-20, 20)


@st.composite
def nonzero_rationals(draw, bound: int = 2**10):
    num = draw(st.integers(-bound, bound).filter(lambda n: n != 0))
    den = draw(st.integers(1, 64))
    return Fraction(num, den)


@st.composite
def quats(draw, lo: int = -20, hi: int = 20, params=DEFAULT_PARAMS):
    return Quat(params, *(draw(st.integers(lo, hi)) for _ in range(4)))


@st.composite
def integral_pure(draw, lo: int = -12, hi: int = 12, max_val: int = 1, params=DEFAULT_PARAMS):
    """b*j + c*i + d*iw with valuation at most ``max_val``."""
    b, c, d = (draw(st.integers(lo, hi)) for _ in range(3))
    q = Quat(params, -b, 2 * b, c, d)
    assume(bool(q) and d_valuation(q) <= max_val)
    return q
