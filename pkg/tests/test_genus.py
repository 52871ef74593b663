from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import MANY
from quatspin.errors import ArgumentError
from quatspin.genus import (
    INF_UNCONSTRAINED,
    LocalImageSpec,
    example_family_spec,
    field_in_sigma,
    image_generators,
    is_squarefree,
    least_nonresidue,
    load_example,
    spinor_class_field,
)
from quatspin.images import SpinorImage
from quatspin.padic2 import hilbert
from quatspin.quatalg import DEFAULT_PARAMS, parse_quat, reduced_norm
from quatspin.spinor_table import LatticeDescriptor, spinor_image

SUPPORT = (2, 3, 5, 7)


def test_example_i_plus_j():
    res = spinor_class_field(load_example("lattice_i_plus_j"), SUPPORT, indefinite=True)
    assert res.describe() == "Q" and res.spinor_genera == 1 and res.class_number == 1


def test_local_image_at_two_for_i_plus_j():
    """N(i+j) = -7, class 1: the table gives NormGroup(7), generated by 2 and 5."""
    a = parse_quat("i+j", DEFAULT_PARAMS)
    assert reduced_norm(a) == -7
    img = spinor_image(LatticeDescriptor.binary(a, 3))
    assert img == SpinorImage.norm_group(7)
    assert set(img.members()) == {1, 2, 5, 10}


@pytest.mark.parametrize("t", range(1, 7))
def test_example_family(t):
    res = spinor_class_field(example_family_spec(t), SUPPORT)
    if t <= 4:
        assert res.describe() == "Q" and res.spinor_genera == 1
    else:
        assert res.describe() == "Q(sqrt(2))" and res.spinor_genera == 2
        assert res.discriminants == (2,)


def test_stored_family_example_matches_computed():
    stored = load_example("lattice_i_family_t5")
    assert spinor_class_field(stored, SUPPORT) == spinor_class_field(example_family_spec(5), SUPPORT)


def test_generator_choice_does_not_matter():
    a = LocalImageSpec({2: (Fraction(-1), Fraction(5))})
    b = LocalImageSpec({2: (Fraction(-5), Fraction(5), Fraction(-1))})
    assert spinor_class_field(a, SUPPORT) == spinor_class_field(b, SUPPORT)


def test_full_image_everywhere_gives_q():
    spec = LocalImageSpec({2: image_generators(SpinorImage.full())})
    assert spinor_class_field(spec, SUPPORT).describe() == "Q"


def test_unit_images_everywhere_give_q():
    # Q has no quadratic extension unramified at every finite prime
    res = spinor_class_field(LocalImageSpec({}, INF_UNCONSTRAINED), SUPPORT)
    assert res.describe() == "Q" and res.spinor_genera == 1


def test_infinite_place():
    free = LocalImageSpec({2: (Fraction(2),)}, INF_UNCONSTRAINED)
    pos = LocalImageSpec({2: (Fraction(2),)})
    assert field_in_sigma(free, -1) and not field_in_sigma(pos, -1)
    assert field_in_sigma(free, 2) and field_in_sigma(pos, 2)
    assert spinor_class_field(free, SUPPORT).describe() == "Q(sqrt(-1), sqrt(2))"
    assert spinor_class_field(pos, SUPPORT).describe() == "Q(sqrt(2))"


def test_errors():
    spec = LocalImageSpec({})
    for m in (0, 1, 4, -12, 18):
        with pytest.raises(ArgumentError):
            field_in_sigma(spec, m)
    with pytest.raises(ArgumentError):
        spinor_class_field(spec, (3, 5))
    with pytest.raises(ArgumentError):
        spinor_class_field(LocalImageSpec({11: (Fraction(2),)}), SUPPORT)
    with pytest.raises(ArgumentError):
        LocalImageSpec({4: (Fraction(2),)})
    with pytest.raises(ArgumentError):
        LocalImageSpec.from_json({"places": {"2": {"image": "norm_group", "d": "1"}}})
    with pytest.raises(ArgumentError):
        LocalImageSpec.from_json({"places": {"inf": "sometimes"}})


def test_helpers():
    assert [least_nonresidue(p) for p in (3, 5, 7, 11, 13, 17, 23)] == [2, 2, 3, 2, 2, 3, 5]
    assert is_squarefree(-30) and not is_squarefree(12) and not is_squarefree(0)


def test_json_round_trip():
    spec = load_example("lattice_i_plus_j")
    assert LocalImageSpec.from_json(spec.to_json()) == spec


GEN_POOL = [-1, 2, 3, 5, 6, 7, 10, -2, -5, 14, 15, 21, 35]


@st.composite
def specs(draw):
    entries = {}
    for p in SUPPORT:
        if draw(st.booleans()):
            entries[p] = tuple(Fraction(g) for g in draw(st.lists(st.sampled_from(GEN_POOL), min_size=1, max_size=3)))
    inf = draw(st.sampled_from(["positive", INF_UNCONSTRAINED]))
    return LocalImageSpec(entries, inf)


@MANY
@given(specs())
def test_genera_is_a_power_of_two(spec):
    res = spinor_class_field(spec, SUPPORT)
    n = res.spinor_genera
    assert n & (n - 1) == 0
    assert n == len(res.discriminants) + 1


@MANY
@given(specs(), st.sampled_from(SUPPORT), st.sampled_from(GEN_POOL))
def test_bigger_images_shrink_sigma(spec, p, g):
    bigger = spec.with_entry(p, spec.generators(p) + (Fraction(g),))
    small = set(spinor_class_field(spec, SUPPORT).discriminants)
    big = set(spinor_class_field(bigger, SUPPORT).discriminants)
    assert big <= small


@MANY
@given(specs(), st.sampled_from([-1, 2, 3, 5, 7, -2, 6, -7, 10, 15, 21, -105]))
def test_field_membership_matches_hilbert_symbols(spec, m):
    expected = not (spec.inf == "positive" and m < 0)
    for p in (2, 3, 5, 7):
        for g in spec.generators(p):
            expected &= hilbert(g, m, p) == 1
    assert field_in_sigma(spec, m) == expected
