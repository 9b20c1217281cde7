from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import big_omega, trial_division_prime
from recurrence_lab.generators import (
    BudgetError,
    DomainError,
    SetFamily,
    count_profile,
    digit_balanced_count,
    is_chen,
    parse_family,
)

FAMILIES = [
    "primes", "chen", "chen-strict", "twin", "squares", "poly:1,0,1",
    "digit-balanced", "sos", "naturals", "explicit:3,5,8,13",
]


def test_membership_examples():
    assert SetFamily("primes").contains(97)
    assert SetFamily("digit-balanced").contains(9)
    assert not SetFamily("digit-balanced").contains(5)
    assert SetFamily("poly", (1, 0, 0)).contains(1)


def test_is_chen_examples():
    assert is_chen(7)
    assert not is_chen(43)
    assert is_chen(3, strict=True)


def test_count_profile_examples():
    prof = count_profile(SetFamily("primes"), 20, [2])
    assert prof.E_of_x[-1] == 8 and prof.E_m_of_x[2][-1] == 4
    assert count_profile(SetFamily("primes"), 20, [1]).E_m_of_x[1][-1] == 1
    prof = count_profile(SetFamily("explicit", (1, 2, 3)), 3, [1])
    assert prof.E_of_x[-1] == 3 and prof.E_m_of_x[1][-1] == 2


@pytest.mark.parametrize("n_max,count", [(4, 1), (16, 4), (64, 14)])
def test_digit_balanced_counts(n_max, count):
    assert digit_balanced_count(n_max) == count
    brute = sum(1 for n in range(1, n_max + 1) if len(bin(n)[2:]) == 2 * bin(n).count("1"))
    assert brute == count


@pytest.mark.parametrize("name", FAMILIES)
def test_mask_and_membership_round_trip(name):
    fam = parse_family(name)
    limit = 3000
    members = fam.members(limit)
    assert np.all(np.diff(members) > 0)
    member_set = set(members.tolist())
    assert all(fam.contains(n) == (n in member_set) for n in range(1, limit + 1))


def test_primes_against_trial_division():
    mask = SetFamily("primes").mask(100_000)
    oracle = np.array([trial_division_prime(n) for n in range(100_001)])
    assert np.array_equal(mask, oracle)


def test_chen_inclusions_up_to_1e5():
    limit = 100_000
    primes = SetFamily("primes").mask(limit)
    chen = SetFamily("chen").mask(limit)
    strict = SetFamily("chen-strict").mask(limit)
    assert not np.any(strict & ~chen)
    assert not np.any(chen & ~primes)


def test_chen_mask_against_factor_count():
    chen = SetFamily("chen").mask(2000)
    for p in range(2, 2001):
        expected = trial_division_prime(p) and big_omega(p + 2) <= 2
        assert chen[p] == expected, p


def test_bounded_gap_pairs():
    twins = SetFamily("bounded-gap", (2,)).members(100).tolist()
    assert twins == [3, 5, 11, 17, 29, 41, 59, 71]


def test_polynomial_image_values_are_positive():
    fam = SetFamily("poly", (1, -10, 30))
    vals = fam.members(500)
    assert vals.min() >= 1
    brute = sorted({x * x - 10 * x + 30 for x in range(0, 40)} & set(range(1, 501)))
    assert vals.tolist() == brute


def test_invalid_families_rejected():
    with pytest.raises(ValueError):
        SetFamily("explicit", (3, 2))
    with pytest.raises(ValueError):
        SetFamily("poly", (-1, 0, 0))
    with pytest.raises(ValueError):
        parse_family("unknown-kind")
    with pytest.raises(DomainError):
        SetFamily("primes").contains(0)


def test_budget_guard():
    with pytest.raises(BudgetError):
        count_profile(SetFamily("primes"), 100, [1], cell_budget=50)


@given(
    st.sampled_from(["primes", "squares", "digit-balanced", "sos"]),
    st.integers(min_value=2, max_value=4000),
    st.lists(st.integers(min_value=1, max_value=60), min_size=1, max_size=4),
)
def test_pair_counts_bounded_and_monotone(name, x_max, shifts):
    fam = parse_family(name)
    xs = sorted({max(2, x_max // 4), max(2, x_max // 2), x_max})
    prof = count_profile(fam, x_max, shifts, x_values=xs)
    for m, series in prof.E_m_of_x.items():
        assert all(0 <= a <= e for a, e in zip(series, prof.E_of_x))
        assert series == sorted(series)
        assert prof.c_m_estimates[m] == (Fraction(series[-1], prof.E_of_x[-1]) if prof.E_of_x[-1] else 0)
