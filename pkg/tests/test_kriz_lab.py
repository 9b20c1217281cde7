import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from recurrence_lab.generators import SetFamily
from recurrence_lab.kriz_lab import (
    CayleyGraph,
    HammingSpace,
    RationalTorusPoint,
    Witness,
    assemble_separation,
    chromatic_intersectivity_certificate,
    chromatic_number,
    concat_witness,
    hamming_ball,
    htilde,
    is_proper,
    kneser_bound_check,
    scale_witness,
    seed_round,
    verify_witness,
    witness_search,
)

NATURALS = SetFamily("naturals")


def independent_witness_ok(S, B, m, delta) -> bool:
    bset = set(B)
    for b in B:
        if not 1 <= b <= m:
            return False
        for s in S:
            if b + s in bset or b + s > m:
                return False
            for t in S:
                if b + s + t > m:
                    return False
    return len(B) > Fraction(delta) * m


def test_hamming_ball_sizes():
    space = HammingSpace(4)
    assert len(hamming_ball(space, 1, 0b1111)) == 5
    ball = hamming_ball(space, 3, 0b1111)
    assert len(ball) == 15 and 0 not in ball
    assert len(hamming_ball(HammingSpace(6), 6, 5)) == 64


def test_chromatic_examples():
    for d in (4, 5):
        space = HammingSpace(d)
        g = CayleyGraph.hamming(d, hamming_ball(space, 3, space.ones))
        res = chromatic_number(g)
        assert res.exact and res.chi == 16 and is_proper(g, res.coloring)
    assert chromatic_number(CayleyGraph(list(range(10)), frozenset())).chi == 1


def test_self_loop_rejected():
    with pytest.raises(ValueError, match="self-loop"):
        CayleyGraph([0, 1], frozenset({0}))


def test_kneser_examples():
    for d in (4, 5):
        rep = kneser_bound_check(d, 1)
        assert rep.chi == 16 and rep.holds and not rep.degenerate
    assert kneser_bound_check(3, 2).degenerate


@pytest.mark.parametrize("n", [1, 2, 7, 20, 64])
def test_complete_graphs(n):
    g = CayleyGraph(list(range(n)), frozenset(range(1, n)))
    assert chromatic_number(g).chi == n


def test_chromatic_monotone_under_deletion():
    rng = random.Random(3)
    graphs = [
        CayleyGraph(list(range(1, 40)), frozenset({1, 3, 5})),
        CayleyGraph(list(range(1, 30)), frozenset({2, 3, 7})),
        CayleyGraph.hamming(4, [1, 2, 4, 8, 15]),
    ]
    for g in graphs:
        full = chromatic_number(g).chi
        for _ in range(50):
            keep = [v for v in g.vertices if rng.random() < 0.7] or g.vertices[:1]
            gens = frozenset(s for s in g.generators if rng.random() < 0.8)
            sub = CayleyGraph(keep, gens, g.group)
            assert chromatic_number(sub).chi <= full


def test_htilde_examples():
    half = RationalTorusPoint((Fraction(1, 2),))
    assert htilde(half, 0, Fraction(1, 8), (1, 10)) == [1, 3, 5, 7, 9]
    zero = RationalTorusPoint((Fraction(0),))
    assert htilde(zero, 0, Fraction(1, 8), (1, 10)) == []
    assert htilde(zero, 1, Fraction(1, 8), (1, 10)) == list(range(1, 11))


@given(
    st.lists(st.fractions(min_value=0, max_value=Fraction(59, 60), max_denominator=60), min_size=1, max_size=3),
    st.integers(0, 3),
    st.sampled_from([Fraction(1, 8), Fraction(1, 10), Fraction(1, 5)]),
)
def test_htilde_stable_under_rescaling(coords, k, eps):
    a = RationalTorusPoint(tuple(coords))
    b = RationalTorusPoint(tuple((2 * c.numerator, 2 * c.denominator) for c in coords))
    assert htilde(a, k, eps, (1, 300)) == htilde(b, k, eps, (1, 300))


def test_witness_examples():
    res = witness_search([1], 10, Fraction(35, 100))
    assert res.witness.B == (2, 4, 6, 8)
    assert independent_witness_ok([1], res.witness.B, 10, Fraction(35, 100))
    res = witness_search([1], 10, Fraction(45, 100))
    assert res.witness is None and res.best_size == 4
    assert witness_search([], 9, Fraction(1, 2)).witness.B == tuple(range(1, 10))


def test_scale_witness():
    assert scale_witness([10, 20, 25], 10) == [1, 2]
    with pytest.raises(ValueError):
        scale_witness([1], 0)


@given(st.sets(st.integers(1, 500), max_size=20), st.integers(1, 30))
def test_scale_witness_round_trip(S, m):
    assert {m * x for x in scale_witness(S, m)} <= S


def test_concat_examples():
    w1 = Witness((2, 4, 6, 8), 10, Fraction(35, 100))
    w2 = Witness((1, 3), 5, Fraction(3, 10))
    res = concat_witness([1], w1, [1], w2, 8)
    assert res.witness is not None
    assert verify_witness(res.S, res.witness)["ok"]
    assert independent_witness_ok(res.S, res.witness.B, res.witness.m, res.witness.delta)
    assert set(res.S) == {1, 10}
    empty = concat_witness([1], w1, [], Witness((1, 2, 3), 5, Fraction(1, 2)), 3)
    assert empty.witness is not None
    with pytest.raises(ValueError):
        concat_witness([1], w1, [1], w2, 1)


def test_intersectivity_certificates():
    odds = list(range(1, 11, 2))
    assert chromatic_intersectivity_certificate(NATURALS, odds, 1, (1, 10)).certified
    assert not chromatic_intersectivity_certificate(NATURALS, odds, 2, (1, 10)).certified
    assert not chromatic_intersectivity_certificate(NATURALS, [], 1, (1, 10)).certified


def test_seed_round_and_assembly():
    S, C, m = seed_round(Fraction(1, 4))
    assert (S, C, m) == ((1,), (1,), 3)
    out = assemble_separation(NATURALS, Fraction(1, 4), 1)
    assert out.rounds_completed == 1 and out.ok
    with pytest.raises(ValueError):
        assemble_separation(NATURALS, Fraction(1, 2), 2)


@given(st.sets(st.integers(1, 6), max_size=3), st.integers(1, 24), st.fractions(0, Fraction(1, 2), max_denominator=12))
def test_every_witness_passes_independent_checker(S, m, delta):
    res = witness_search(sorted(S), m, delta)
    if res.witness is not None:
        assert independent_witness_ok(S, res.witness.B, m, delta)
        assert verify_witness(S, res.witness)["ok"]
