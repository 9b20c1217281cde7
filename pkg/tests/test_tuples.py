import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import trial_division_prime
from recurrence_lab.generators import SetFamily
from recurrence_lab.tuples import (
    Tuple,
    delta_star_certify,
    huang_wu_extract,
    huang_wu_threshold,
    is_admissible,
    load_coloring,
    parse_tuple,
    partition_pigeonhole_check,
    prime_index_parity_coloring,
    syndeticity_index_cover,
    translate_search,
    verify_cover,
)
from recurrence_lab.windows import Window

EIGHT = Tuple((0, 2, 6, 8, 12, 18, 20, 26))


def scan_admissible(offsets) -> bool:
    """Residue scanner over every prime up to 13."""
    return all(
        len({x % p for x in offsets}) < p for p in range(2, 14) if trial_division_prime(p)
    )


def test_admissibility_examples():
    assert is_admissible(Tuple((0, 2)))
    assert not is_admissible(Tuple((0, 2, 4)))
    assert is_admissible(EIGHT)


def test_translate_search_examples():
    assert 11 in translate_search(EIGHT, 8, 100)
    assert translate_search(Tuple((0, 2)), 2, 20) == [3, 5, 11, 17]
    with pytest.raises(ValueError):
        translate_search(Tuple((0, 2)), 3, 20)


def test_translate_search_matches_brute_force():
    h = parse_tuple("0,4,6,10")
    for r in (2, 3, 4):
        brute = [n for n in range(1, 3000) if sum(trial_division_prime(n + x) for x in h) >= r]
        assert translate_search(h, r, 2999) == brute


def test_translate_search_other_family():
    h = Tuple((0, 1))
    got = translate_search(h, 2, 100, family=SetFamily("poly", (1, 0, 0)))
    assert got == []
    got = translate_search(Tuple((0, 3)), 2, 100, family=SetFamily("poly", (1, 0, 0)))
    assert got == [1]


def test_huang_wu_examples():
    assert is_admissible(huang_wu_extract(range(1, 21), 3))
    got = huang_wu_extract(range(2, 61, 2), 5)
    assert len(got) == 5 and is_admissible(got)
    with pytest.raises(ValueError, match="set too small"):
        huang_wu_extract(range(1, 5), 5)


def test_huang_wu_threshold_value():
    assert huang_wu_threshold(3) == 9


def test_delta_star_examples():
    full = Window.from_members(range(1, 21), 1, 20)
    for r in (2, 3, 4):
        assert delta_star_certify(full, r, 20).violation is None
    odds = Window.from_members(range(1, 41, 2), 1, 40)
    rep = delta_star_certify(odds, 2, 10)
    assert rep.violation == (0, 2) and rep.status == "violation certificate"
    sixes = Window.from_members(range(6, 1001, 6), 1, 1000)
    assert delta_star_certify(sixes, 2, 5).violation == (0, 1)


def test_delta_star_sampling_is_seeded():
    odds = Window.from_members(range(1, 4001, 2), 1, 4000)
    a = delta_star_certify(odds, 6, 3000, trials=200, seed=7)
    b = delta_star_certify(odds, 6, 3000, trials=200, seed=7)
    assert a.mode == "sampled" and a == b
    assert a.violation is not None


def test_cover_examples():
    evens = Window.from_members(range(2, 201, 2), 1, 200)
    rep = syndeticity_index_cover(evens, 5)
    assert rep.index == 2 and (rep.translates[1] - rep.translates[0]) % 2 == 1
    assert verify_cover(evens, rep)
    full = Window.from_members(range(1, 201), 1, 200)
    assert syndeticity_index_cover(full, 5).index == 1
    fives = Window.from_members(range(5, 501, 5), 1, 500)
    rep = syndeticity_index_cover(fives, 10)
    assert rep.index == 5 and verify_cover(fives, rep)
    assert not syndeticity_index_cover(fives, 3).ok


def test_pigeonhole_examples():
    coloring = prime_index_parity_coloring(200)
    rep = partition_pigeonhole_check(SetFamily("primes"), coloring, EIGHT, 100)
    assert 11 in rep.translates and rep.all_in_h_minus_h
    single = {p: 1 for p in coloring}
    rep = partition_pigeonhole_check(SetFamily("primes"), single, Tuple((0, 2)), 100)
    assert rep.translates == [3, 5, 11, 17, 29, 41, 59, 71]
    missing = dict(coloring)
    missing.pop(13)
    with pytest.raises(ValueError):
        partition_pigeonhole_check(SetFamily("primes"), missing, EIGHT, 100)


def test_load_coloring():
    assert load_coloring("2 1\n3, 2  # comment\n\n5 1\n") == {2: 1, 3: 2, 5: 1}


@pytest.mark.parametrize("size", range(1, 6))
def test_admissibility_agrees_with_scanner(size):
    for h in combinations(range(13), size):
        assert is_admissible(Tuple(h)) == scan_admissible(h)


@given(st.sets(st.integers(min_value=0, max_value=60), min_size=1, max_size=8), st.integers(-100, 100))
def test_admissibility_translation_invariant(offsets, c):
    h = Tuple(tuple(sorted(offsets)))
    assert is_admissible(h) == is_admissible(h.shift(c))


@given(st.integers(min_value=1, max_value=7), st.integers(min_value=0, max_value=2**32))
def test_huang_wu_output_admissible(k, seed):
    rng = random.Random(seed)
    need = int(huang_wu_threshold(k)) + 1
    a = rng.sample(range(1, 2000), need + rng.randrange(0, 40))
    out = huang_wu_extract(a, k)
    assert len(out) == k and is_admissible(out) and set(out) <= set(a)


@given(st.sets(st.integers(min_value=0, max_value=30), min_size=2, max_size=5), st.integers(min_value=2, max_value=5))
def test_translates_nested_in_r(offsets, r):
    h = Tuple(tuple(sorted(offsets)))
    r = min(r, len(h))
    assert set(translate_search(h, r, 500)) <= set(translate_search(h, r - 1, 500))


@given(st.sets(st.integers(min_value=1, max_value=120), min_size=1, max_size=40))
def test_cover_reaches_everything_after_threshold(members):
    w = Window.from_members(sorted(members), 1, 120)
    rep = syndeticity_index_cover(w, 200)
    assert rep.ok and verify_cover(w, rep)
