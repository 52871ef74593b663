from __future__ import annotations

import threading
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import MANY
from oracles import naive_kstar, naive_search_int
from quatspin.errors import ArgumentError, SearchAborted
from quatspin.images import SpinorImage, image_contains
from quatspin.padic2 import square_class_2
from quatspin.quatalg import DEFAULT_PARAMS, AlgebraParams, Quat, i_pi, parse_quat
from quatspin.search import (
    JUSTIFY_GENERAL,
    JUSTIFY_MU16,
    JUSTIFY_UNIT_T34,
    KStarInstance,
    bound_justification,
    decide_binary,
    decide_H_binary,
    default_bound,
    kstar_check,
    search_witness,
    theorem_bound,
)
from strategies import integral_pure

P = DEFAULT_PARAMS
A1 = {"j+ij": (-1, 2, -1, 2), "i+j": (-1, 2, 1, 0), "i": (0, 0, 1, 0), "iw": (0, 0, 0, 1),
      "i10": (0, 0, 2, 1)}

# lexicographically first witnesses in [0, 2^u)^4, frozen from the naive oracle
FROZEN_NAIVE = {
    ("j+ij", 1, 2): (1, 0, 0, 2), ("j+ij", 1, 3): (1, 0, 0, 2),
    ("j+ij", 2, 2): (1, 0, 0, 2), ("j+ij", 2, 3): (1, 0, 0, 2),
    ("j+ij", 3, 2): None, ("j+ij", 3, 3): None,
    ("i+j", 1, 2): (1, 0, 2, 2), ("i+j", 1, 3): (1, 0, 2, 2),
    ("i+j", 2, 2): (1, 0, 2, 2), ("i+j", 2, 3): (1, 0, 2, 2),
    ("i+j", 3, 2): None, ("i+j", 3, 3): None,
    ("i", 1, 2): (3, 2, 1, 2), ("i", 1, 3): (1, 0, 1, 4),
    ("i", 2, 2): None, ("i", 2, 3): (5, 2, 0, 4),
    ("i", 3, 2): None, ("i", 3, 3): None,
    ("iw", 1, 2): (3, 2, 2, 1), ("iw", 1, 3): (1, 0, 4, 1),
    ("iw", 2, 2): None, ("iw", 2, 3): (1, 4, 0, 0),
    ("iw", 3, 2): None, ("iw", 3, 3): (1, 4, 0, 0),
    ("i10", 1, 2): (1, 0, 2, 3), ("i10", 1, 3): (1, 0, 2, 3),
    ("i10", 2, 2): None, ("i10", 2, 3): (1, 4, 4, 2),
    ("i10", 3, 2): None, ("i10", 3, 3): (1, 4, 4, 2),
}

PARAMS = [AlgebraParams(2, 1), AlgebraParams(-2, 1), AlgebraParams(10, 1), AlgebraParams(2, 3)]


def inst(name: str, t: int) -> KStarInstance:
    return KStarInstance(Quat(P, *A1[name]), t)


def coords(q):
    return None if q is None else tuple(int(x) for x in q.coords)


@st.composite
def instances(draw, max_t: int = 4):
    params = draw(st.sampled_from(PARAMS))
    a1 = draw(integral_pure(-6, 6, params=params))
    return KStarInstance(a1, draw(st.integers(1, max_t)))


# -- kstar_check ------------------------------------------------------------------------

def test_kstar_stored_example():
    rep = kstar_check(inst("j+ij", 2), parse_quat("1+2iw"))
    assert rep.passed
    assert rep.n1mr == 2 * 2**2
    assert rep.nz_na1 == 2**4 * 5**2
    assert rep.spinor_class == square_class_2(5 * 8)


def test_kstar_prime_example():
    ip, _ = i_pi(P, 10)
    rep = kstar_check(KStarInstance(ip, 4), parse_quat("15+8w"))
    assert rep.passed
    assert rep.nz_na1 == 2**10 * 5**2 * (1 + 8 * 38)


def test_kstar_degenerate():
    rep = kstar_check(inst("i", 1), Quat(P, 1))
    assert rep.degenerate and not rep.passed
    # r = -1 centralises everything: z = 0
    rep = kstar_check(inst("i", 1), Quat(P, -1))
    assert rep.degenerate and not rep.passed


def test_kstar_rejects_bad_input():
    with pytest.raises(ArgumentError):
        kstar_check(inst("i", 1), Quat(P, Fraction(1, 2)))
    with pytest.raises(ArgumentError):
        KStarInstance(parse_quat("1+i"), 1)
    with pytest.raises(ArgumentError):
        KStarInstance(parse_quat("2i"), 1)
    with pytest.raises(ArgumentError):
        KStarInstance(parse_quat("i"), 0)


# -- bounds ---------------------------------------------------------------------------------

def test_default_bound():
    assert default_bound(inst("j+ij", 4), refined=True) == 7
    assert default_bound(inst("j+ij", 2), refined=False) == 8
    assert default_bound(inst("j+ij", 1), refined=True) == 4


def test_bound_justification():
    assert bound_justification(inst("j+ij", 3), 6) == JUSTIFY_UNIT_T34
    assert bound_justification(inst("i+j", 4), 7) == JUSTIFY_UNIT_T34
    assert bound_justification(inst("i", 3), 6) is None
    assert bound_justification(inst("i", 4), 7) == JUSTIFY_MU16
    assert bound_justification(inst("j+ij", 2), 5) is None
    assert bound_justification(inst("j+ij", 2), 8) == JUSTIFY_GENERAL
    assert theorem_bound(inst("i", 2)) == (8, JUSTIFY_GENERAL)
    assert theorem_bound(inst("j+ij", 4)) == (7, JUSTIFY_UNIT_T34)
    # the nu(16) reading is never picked automatically
    assert theorem_bound(inst("j+ij", 5)) == (11, JUSTIFY_GENERAL)
    assert theorem_bound(inst("i", 5)) == (11, JUSTIFY_GENERAL)


# -- search ------------------------------------------------------------------------------------

@pytest.mark.parametrize("key", sorted(FROZEN_NAIVE))
def test_search_matches_frozen_oracle(key):
    name, t, u = key
    for engine in ("tree", "scan"):
        out = search_witness(inst(name, t), u, engine=engine)
        assert coords(out.witness) == FROZEN_NAIVE[key]
        assert not out.aborted


def test_nonexistence_refined_bound():
    for name in ("j+ij", "i+j"):
        for t in (3, 4):
            out = search_witness(inst(name, t), t + 3)
            assert out.witness is None and not out.aborted
            assert out.candidates_scanned == out.total


def test_witness_for_i2_t4_is_below_table_entry():
    out = search_witness(inst("i", 4), 7)
    assert out.witness is not None
    assert coords(out.witness) <= (15, 8, 0, 0)
    assert kstar_check(inst("i", 4), out.witness).passed


def test_search_argument_checks():
    with pytest.raises(ArgumentError):
        search_witness(inst("i", 1), 0)
    with pytest.raises(ArgumentError):
        search_witness(inst("i", 1), 17)
    with pytest.raises(ArgumentError):
        search_witness(inst("i", 1), 3, engine="magic")
    with pytest.raises(ArgumentError):
        search_witness(KStarInstance(AlgebraParams(Fraction(2, 3), 1).i(), 1), 3)
    # an odd denominator is a 2-adic unit and is simply scaled away
    third = search_witness(KStarInstance(Quat(P, 0, 0, Fraction(1, 3), 0), 2), 3)
    assert third.witness == search_witness(inst("i", 2), 3).witness


def test_abort_is_explicit():
    out = search_witness(inst("j+ij", 4), 7, engine="scan", max_nodes=1000)
    assert out.aborted and out.witness is None
    assert 0 < out.candidates_scanned < out.total
    assert out.to_json()["aborted"] is True


def test_cancel_and_progress():
    seen = []
    ev = threading.Event()

    def progress(done, total):
        seen.append(done)
        if done > 5000:
            ev.set()

    out = search_witness(inst("j+ij", 3), 6, engine="scan", progress=progress, cancel=ev)
    assert out.aborted
    assert seen == sorted(seen) and seen[-1] <= out.total


def test_progress_reaches_total():
    seen = []
    out = search_witness(inst("i+j", 3), 6, progress=lambda d, t: seen.append((d, t)))
    assert seen and seen[-1] == (out.total, out.total)
    assert [d for d, _ in seen] == sorted(d for d, _ in seen)


@pytest.mark.parametrize("name,t,u", [("j+ij", 2, 5), ("i", 3, 5), ("i+j", 3, 4), ("i10", 2, 4)])
def test_process_pool_matches_serial(name, t, u):
    base = search_witness(inst(name, t), u, 1)
    for jobs in (2, 8):
        out = search_witness(inst(name, t), u, jobs)
        assert out.witness == base.witness and out.aborted is False
        assert out.candidates_scanned == out.total or out.witness is not None
    scan = search_witness(inst(name, t), u, 2, engine="scan")
    assert scan.witness == base.witness


# -- decisions -------------------------------------------------------------------------------

def test_decide_examples():
    assert decide_H_binary(inst("j+ij", 2), 5) == SpinorImage.full()
    assert decide_H_binary(inst("j+ij", 4), 7) == SpinorImage.norm_group(-5)
    assert decide_H_binary(inst("i", 3), 6) == SpinorImage.full()


def test_decide_needs_justified_bound():
    with pytest.raises(ArgumentError):
        decide_binary(inst("i", 5), 6)
    dec = decide_binary(inst("i", 5), 6, require_justification=False)
    assert dec.image == SpinorImage.norm_group(2)


def test_decide_propagates_abort():
    with pytest.raises(SearchAborted):
        decide_binary(inst("j+ij", 3), 6, engine="scan", max_nodes=10)


# -- properties --------------------------------------------------------------------------------

@MANY
@given(instances(), st.tuples(*[st.integers(-8, 8)] * 4),
       st.sampled_from([Fraction(3), Fraction(-1, 5), Fraction(7, 3), Fraction(4), Fraction(1, 2)]))
def test_scaling_invariance(base, r, c):
    r = Quat(base.a1.params, *r)
    assume(r != 1)
    scaled = base.a1 * c
    from quatspin.quatalg import d_valuation
    assume(d_valuation(scaled) in (0, 1) and all(x.denominator % 2 for x in scaled.coords))
    a = kstar_check(base, r)
    b = kstar_check(KStarInstance(scaled, base.t), r)
    assert (a.cond_hilbert, a.cond_square, a.cond_integral) == (b.cond_hilbert, b.cond_square, b.cond_integral)


@MANY
@given(instances(), st.tuples(*[st.integers(-8, 8)] * 4))
def test_hilbert_condition_is_spinor_class_test(base, r):
    r = Quat(base.a1.params, *r)
    rep = kstar_check(base, r)
    assume(rep.n1mr is not None and not rep.degenerate)
    own = SpinorImage.norm_group(-base.norm_a1)
    assert rep.cond_hilbert == (not image_contains(own, rep.spinor_class))


@MANY
@given(instances(max_t=5), st.tuples(*[st.integers(-16, 16)] * 4))
def test_monotone_in_t(base, r):
    r = Quat(base.a1.params, *r)
    if kstar_check(base, r).passed:
        for s in range(1, base.t):
            assert kstar_check(base.with_t(s), r).passed
    # and a naive reimplementation agrees point-wise
    p = base.a1.params
    want = naive_kstar(base.a1.coords, base.t, r.coords, p.pi, p.delta)
    rep = kstar_check(base, r)
    assert (want is None) == rep.degenerate
    assert bool(want) == rep.passed


@MANY
@given(instances(), st.integers(1, 3))
def test_matches_naive_loop(base, u):
    p = base.a1.params
    want = naive_search_int(tuple(int(x) for x in base.a1.coords), base.t, u, int(p.pi), int(p.delta))
    out = search_witness(base, u)
    assert coords(out.witness) == want


@MANY
@given(instances(), st.integers(1, 4))
def test_deterministic_across_parallelism(base, u):
    ref = search_witness(base, u, 1)
    for jobs in (2, 8):
        out = search_witness(base, u, jobs, executor="inline")
        assert out.witness == ref.witness
    assert search_witness(base, min(u, 3), 1, engine="scan").witness == search_witness(base, min(u, 3)).witness


@pytest.fixture(scope="module")
def table_witness_list():
    from quatspin.witnesses import table_witnesses
    return table_witnesses()


@MANY
@given(st.data())
def test_witness_stable_mod_2u(table_witness_list, data):
    a1, t, r = data.draw(st.sampled_from(table_witness_list))
    u = t + 6
    beta = Quat(P, *(data.draw(st.integers(-50, 50)) for _ in range(4)))
    inst_ = KStarInstance(a1, t)
    assert kstar_check(inst_, r).passed
    assert kstar_check(inst_, r + beta * Fraction(2) ** u).passed
