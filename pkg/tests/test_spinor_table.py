from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import MANY
from quatspin.errors import ArgumentError, DomainError
from quatspin.images import SpinorImage, image_contains
from quatspin.padic2 import SQUARE_CLASSES_2, hilbert_2
from quatspin.quatalg import DEFAULT_PARAMS, d_valuation, parse_quat
from quatspin.spinor_table import (
    RULES,
    Classification,
    LatticeDescriptor,
    classify,
    curated_descriptors,
    dispatch,
    spinor_image,
    spinor_image_result,
)

P = DEFAULT_PARAMS
D = LatticeDescriptor


def q(s):
    return parse_quat(s, P)


def test_classify_examples():
    c = classify(D((q("j+ij"), q("j+ij") * 4)))
    assert (c.s, c.A, c.mu) == (0, frozenset({5}), 4)
    for t in (1, 3, 6):
        c = classify(D.binary(q("i"), t))
        assert (c.s, c.A, c.mu) == (0, frozenset({-2}), 2 * t)
    c = classify(D((q("i+j"),)))
    assert (c.A, c.mu) == (frozenset({1}), math.inf)


def test_image_examples():
    assert spinor_image(D((q("j+ij"), q("j+ij") * 8))) == SpinorImage.norm_group(-5)
    assert spinor_image(D.binary(q("i"), 4)) == SpinorImage.full()
    assert spinor_image(D.binary(q("i"), 5)) == SpinorImage.norm_group(2)


def test_curated_set_covers_every_rule():
    cases = curated_descriptors()
    assert len(cases) >= 20
    rules = set()
    for label, desc, want in cases:
        res = spinor_image_result(desc)
        assert res.image == want, label
        rules.add(res.rule)
    assert rules == set(RULES)


def test_boundaries():
    jij, i = q("j+ij"), q("i")
    # unit rows: strict at nu(8)
    assert spinor_image(D((jij, jij * 4))).is_full
    assert not spinor_image(D((jij, jij * 8))).is_full
    # prime rows: inclusive at nu(16)
    assert spinor_image(D((i, i * 16))).is_full
    assert not spinor_image(D((i, i * 32))).is_full
    # mu computed directly at the thresholds, including odd gaps
    assert dispatch(Classification(0, frozenset({5}), 5))[0].is_full
    assert not dispatch(Classification(0, frozenset({5}), 6))[0].is_full
    assert dispatch(Classification(0, frozenset({-2}), 8))[0].is_full
    assert not dispatch(Classification(0, frozenset({-2}), 9))[0].is_full


def test_classify_errors():
    with pytest.raises(ArgumentError):
        D((q("1+i"),))
    with pytest.raises(ArgumentError):
        D((q("i") * 4, q("i")))          # scales out of order
    with pytest.raises(ArgumentError):
        D(())
    with pytest.raises(DomainError):
        dispatch(Classification(0, frozenset({-1}), 4))


def test_json_round_trip():
    desc = D((q("i"), q("i") * 32), 0)
    again = D.from_json(desc.to_json())
    assert again == desc
    obj = {"pi": "2", "delta": "1", "components": [{"quat": "i", "scale_shift": "0"},
                                                   {"quat": "i", "scale_shift": "5"}]}
    assert D.from_json(obj) == desc
    assert desc.as_binary() == (q("i"), 5)
    assert D((q("i"), q("i") * 3)).as_binary() is None


def test_norm_groups_have_index_two():
    for d in SQUARE_CLASSES_2:
        if d == 1:
            continue
        img = SpinorImage.norm_group(d)
        assert len(img.members()) == 4
        assert all(hilbert_2(x, d) == 1 for x in img.members())
    assert image_contains(SpinorImage.norm_group(5), 3)
    assert not image_contains(SpinorImage.norm_group(5), 2)
    assert SpinorImage.norm_group(5).members() == (1, 5, -1, -5)
    with pytest.raises(DomainError):
        image_contains(SpinorImage.full(), 0)


PURE_POOL = [q(s) for s in ("j+ij", "i+j", "i", "iw", "j", "2i+iw", "i-2iw", "3j+i", "j+2i")]


@st.composite
def descriptors(draw):
    """Rank-1 components scaled by powers of 2, sorted by valuation."""
    n = draw(st.integers(1, 5))
    comps = [draw(st.sampled_from(PURE_POOL)) * Fraction(2) ** draw(st.integers(0, 8))
             for _ in range(n)]
    comps.sort(key=d_valuation)
    return D(tuple(comps), draw(st.sampled_from([0, 0, 0, 1, 2])))


@MANY
@given(descriptors(), st.data())
def test_images_grow_with_the_lattice(desc, data):
    img = spinor_image(desc)
    comps = list(desc.rank1_components)
    if len(comps) < 2:
        return
    cut = data.draw(st.integers(1, len(comps) - 1))
    split = data.draw(st.booleans())
    parts = [D(tuple(comps[:cut]), 0), D(tuple(comps[cut:]), desc.rank2_count if split else 0)]
    for part in parts:
        sub = spinor_image(part)
        for x in SQUARE_CLASSES_2:
            if image_contains(sub, x):
                assert image_contains(img, x)


@MANY
@given(descriptors(), st.sampled_from([Fraction(3), Fraction(-1, 7), Fraction(2), Fraction(1, 4), Fraction(-6)]))
def test_rescaling_invariance(desc, c):
    if not desc.rank1_components:
        return
    assert spinor_image(desc.scaled(c)) == spinor_image(desc)


def test_random_splits_seeded():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(2, 4)
        comps, v = [], 0
        for _ in range(k):
            a = rng.choice(PURE_POOL)
            comp = a * Fraction(4) ** (v // 2 + 1)
            comps.append(comp)
            v += rng.randint(2, 12)
        comps.sort(key=d_valuation)
        whole = spinor_image(D(tuple(comps)))
        for x in SQUARE_CLASSES_2:
            if image_contains(spinor_image(D((comps[0],))), x):
                assert image_contains(whole, x)


def test_dispatcher_matches_search():
    """For binary lattices the table and the k-star search must agree."""
    from quatspin.search import KStarInstance, decide_H_binary
    names = ["j+ij", "i+j", "i", "iw", "j", "2i+iw", "i-2iw"]
    for name in names:
        a1 = q(name)
        for t in range(1, 6):
            want = spinor_image(D.binary(a1, t))
            got = decide_H_binary(KStarInstance(a1, t))
            assert got == want, (name, t)
