"""Acceptance criteria 1-11, one test each; every test records a PASS/FAIL line."""
import json
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, trial_division_prime
from recurrence_lab.bohr_sieve import pipeline, quadratic_form_values, validate_blocked
from recurrence_lab.chen_desk import chen_sum, fourier_u2, gowers_norm, recurrence_search, verify_recurrence
from recurrence_lab.cli import main, strip_timing
from recurrence_lab.gap_coloring import build_thick_R, greedy_two_color
from recurrence_lab.generators import SetFamily, parse_family
from recurrence_lab.kriz_lab import assemble_separation, chromatic_intersectivity_certificate, kneser_bound_check, witness_search
from recurrence_lab.ntheory import primes_upto
from recurrence_lab.presets import PRESETS
from recurrence_lab.sparse_difference import auto_tune_growth, digit_counterexample_battery, parse_growth, r_hits_bruteforce
from recurrence_lab.tuples import Tuple, huang_wu_extract, huang_wu_threshold, is_admissible, translate_search
from recurrence_lab.windows import Window

CHEN_SUM_BAND = (3.8, 4.1)


@contextmanager
def criterion(n: int, title: str):
    notes: list[str] = []
    try:
        yield notes
    except BaseException as exc:
        reason = str(exc).splitlines()[0][:160] if str(exc) else type(exc).__name__
        ACCEPTANCE_LINES[n] = f"ACCEPTANCE {n:2d} FAIL  {title}: {reason}"
        print(ACCEPTANCE_LINES[n])
        raise
    detail = "; ".join(notes)
    ACCEPTANCE_LINES[n] = f"ACCEPTANCE {n:2d} PASS  {title}" + (f" ({detail})" if detail else "")
    print(ACCEPTANCE_LINES[n])


def test_criterion_01_sparse_difference_primes():
    with criterion(1, "sparse-difference pipeline on primes, f = x^2, window 1e7") as notes:
        t0 = time.perf_counter()
        tuned = auto_tune_growth(SetFamily("primes"), parse_growth("pow:2"), 10**7)
        elapsed = time.perf_counter() - t0
        res = tuned.result
        assert elapsed <= 300, f"took {elapsed:.1f}s"
        assert res.r_hits == 0
        assert r_hits_bruteforce(res.A, res.intervals, res.window) == 0
        density = res.density_A_in_E
        notes.append(f"density {float(density):.4f}, {elapsed:.1f}s")
        assert density >= Fraction(9, 10), f"density {float(density):.4f} < 0.9"
        ladder = [Fraction(r["density_A"]) for r in tuned.ladder if r.get("ok")]
        drops = [(float(a), float(b)) for a, b in zip(ladder, ladder[1:]) if b < a]
        assert not drops, f"density not monotone across the tuning ladder: drops {drops[:3]}"


def test_criterion_02_digit_battery():
    with criterion(2, "digit-balanced battery") as notes:
        t0 = time.perf_counter()
        for n_max, expected in ((4, 1), (16, 4), (64, 14)):
            brute = sum(1 for n in range(1, n_max + 1) if len(bin(n)[2:]) == 2 * bin(n).count("1"))
            assert brute == expected == SetFamily("digit-balanced").members(n_max).size
        rep = digit_counterexample_battery(50, 24, banach_lengths=[1024])
        assert all(c >= 1 for c in rep["counts"].values())
        ratio = dict(rep["banach_profile"])[1024]
        elapsed = time.perf_counter() - t0
        notes.append(f"{elapsed:.1f}s")
        assert elapsed <= 120
        assert ratio < Fraction(1, 50), f"Banach ratio at N=1024 is {float(ratio):.4f}, not below 0.02"


def test_criterion_03_kneser_bound():
    with criterion(3, "Hamming Cayley chromatic bound") as notes:
        for d in (4, 5):
            rep = kneser_bound_check(d, 1)
            assert rep.exact and rep.chi == 16, (d, rep)
        worst = 0.0
        for k in (1, 2):
            for d in range(2 * k + 2, 11):
                t0 = time.perf_counter()
                rep = kneser_bound_check(d, k, time_limit=60)
                dt = time.perf_counter() - t0
                worst = max(worst, dt)
                assert dt <= 60, (d, k, dt)
                assert rep.lower >= 2 * k + 1, (d, k, rep.lower)
        notes.append(f"slowest solve {worst:.1f}s")


def _max_witness_bruteforce(S, m) -> int:
    cands = [b for b in range(1, m + 1) if all(b + s + t <= m for s in S for t in S)]
    if not S:
        return len(cands)
    best = 0

    def go(i, chosen, size):
        nonlocal best
        if size + len(cands) - i <= best:
            return
        if i == len(cands):
            best = size
            return
        b = cands[i]
        if not any(b - s in chosen for s in S):
            chosen.add(b)
            go(i + 1, chosen, size + 1)
            chosen.discard(b)
        go(i + 1, chosen, size)

    go(0, set(), 0)
    return best


def _four_constraints(S, B, m, delta) -> bool:
    bs = {b + s for b in B for s in S}
    bss = {x + s for x in bs for s in S}
    return (
        len(B) > delta * m
        and set(B) <= set(range(1, m + 1))
        and not (set(B) & bs)
        and bss <= set(range(1, m + 1))
        and bs <= set(range(1, m + 1))
    )


def test_criterion_04_witness_suite():
    with criterion(4, "witness search against exhaustive enumeration") as notes:
        t0 = time.perf_counter()
        res = witness_search([1], 10, Fraction(35, 100))
        assert res.exact and res.best_size == 4
        assert _four_constraints([1], res.witness.B, 10, Fraction(35, 100))
        cases = 0
        for size in range(0, 4):
            for S in combinations(range(1, 6), size):
                for m in range(1, 21):
                    got = witness_search(list(S), m, Fraction(0), mode="exact")
                    assert got.best_size == _max_witness_bruteforce(S, m), (S, m)
                    if got.witness is not None:
                        assert _four_constraints(S, got.witness.B, m, Fraction(0)), (S, m)
                    cases += 1
        elapsed = time.perf_counter() - t0
        notes.append(f"{cases} cases, {elapsed:.1f}s")
        assert elapsed <= 600


def _scan_admissible(offsets) -> bool:
    return all(len({x % p for x in offsets}) < p for p in range(2, 14) if trial_division_prime(p))


def test_criterion_05_tuples():
    with criterion(5, "admissible tuples and prime translates"):
        for size in range(1, 6):
            for h in combinations(range(13), size):
                assert is_admissible(Tuple(h)) == _scan_admissible(h), h
        assert 11 in translate_search(Tuple((0, 2, 6, 8, 12, 18, 20, 26)), 8, 100)
        rng = random.Random(2024)
        for _ in range(1000):
            k = rng.randint(1, 8)
            need = math.ceil(huang_wu_threshold(k))
            a = rng.sample(range(1, 5000), need + rng.randint(0, 50))
            out = huang_wu_extract(a, k)
            assert len(out) == k and is_admissible(out)


def test_criterion_06_gowers_norms():
    with criterion(6, "Gowers norms"):
        for n in range(1, 12):
            for k in (1, 2, 3):
                assert abs(gowers_norm(np.ones(n), k) - 1) < 1e-12, (n, k)
        delta = np.zeros(5)
        delta[0] = 1
        assert abs(gowers_norm(delta, 2) - 5 ** (-0.75)) < 1e-9
        rng = np.random.default_rng(6)
        tested = []
        for _ in range(50):
            f = rng.normal(size=8) + 1j * rng.normal(size=8)
            assert abs(gowers_norm(f, 2) - fourier_u2(f)) < 1e-9
            tested.append(f)
        tested += [np.ones(7), delta]
        for f in tested:
            assert gowers_norm(f, 2) <= gowers_norm(f, 3) + 1e-9


def test_criterion_07_chen_desk():
    with criterion(7, "Chen weights and shifted-Chen recurrence") as notes:
        ratio = chen_sum(10**6).ratio
        assert CHEN_SUM_BAND[0] <= ratio <= CHEN_SUM_BAND[1] and ratio > 0.05, ratio
        primes100 = primes_upto(100)
        got = recurrence_search(Window.from_members(primes100, 1, 100), 1)
        assert got == (3, 3) and verify_recurrence(primes100.tolist(), 1, *got)
        primes = SetFamily("primes").members(10**5)
        densities = []
        for t in range(20):
            rng = np.random.default_rng([0, t])
            subset = primes[rng.random(primes.size) < 0.4]
            densities.append(subset.size / primes.size)
            assert densities[-1] >= 0.3
            found = recurrence_search(Window.from_members(subset, 1, 10**5), 1)
            assert found is not None, f"subset {t} has no recurrence"
            assert verify_recurrence(subset.tolist(), 1, *found)
        notes.append(f"ratio {ratio:.4f}, min subset density {min(densities):.3f}")


def test_criterion_08_bohr_sieve():
    with criterion(8, "Bohr closure bounds"):
        rep = pipeline(SetFamily("primes"), 100)
        direct = Fraction(1)
        for p in primes_upto(100).tolist():
            direct *= 1 - Fraction(1, p)
        assert rep.final_bound == direct
        mertens = math.exp(-0.5772156649015329) / math.log(100)
        assert abs(float(direct) / mertens - 1) <= 0.10
        values, definite = quadratic_form_values(1, 0, 1, 10**6)
        assert definite
        sos = pipeline(SetFamily("sos"), 50)
        for bm in sos.moduli:
            hits = values[np.isin(values % bm.c, list(bm.blocked))]
            assert hits.size == 0, (bm.c, hits[:3])
            validate_blocked(bm, values)
        for trail in (rep.bound_trail, sos.bound_trail):
            full = [Fraction(1)] + trail
            assert all(b < a for a, b in zip(full, full[1:]))


def test_criterion_09_gap_coloring():
    with criterion(9, "two-colouring of squares avoiding R") as notes:
        t0 = time.perf_counter()
        squares = parse_family("squares")
        r = build_thick_R(squares, [16, 10**4, 10**8], window_hi=10**6)
        e = Window.from_mask(squares.mask(10**6), 1, 10**6)
        res = greedy_two_color(e, r)
        elapsed = time.perf_counter() - t0
        assert res.hits == {1: 0, 2: 0}
        assert res.graph.max_backward_degree <= 1
        for c in (1, 2):
            cls = sorted(a for a, k in res.colors.items() if k == c)
            assert not any(
                iv.lo <= y - x <= iv.hi for i, x in enumerate(cls) for y in cls[i + 1 :] for iv in r
            )
        assert elapsed <= 30
        notes.append(f"{elapsed:.2f}s")


def test_criterion_10_assembly():
    with criterion(10, "two-round separating assembly over the naturals") as notes:
        naturals = SetFamily("naturals")
        out = assemble_separation(naturals, Fraction(1, 4), 2)
        assert out.rounds_completed == 2
        rounds = [e for e in out.transcript if e["lemma"] in ("seed", "conditions")]
        assert len(rounds) == 2 and all(e["verified"] for e in rounds)
        for e in rounds:
            cond = e["conditions"]
            assert cond["i"] and cond["ii"] and cond["iii"]
        last = out.history[-1]
        S, C, m = last["S"], last["C"], last["m"]
        diffs = {y - x for x in C for y in C if y > x}
        assert not diffs & set(S)
        chrom = chromatic_intersectivity_certificate(naturals, S, 2, (1, last["window_hi"]))
        assert chrom.chi_lower >= 3
        notes.append(f"S2={S}, m2={m}, |C2|={len(C)}, chi>={chrom.chi_lower}")


def test_criterion_11_reproducibility(tmp_path):
    with criterion(11, "report reruns are identical and verify passes") as notes:
        for name, argv in PRESETS.items():
            first, again = tmp_path / f"{name}.json", tmp_path / f"{name}.b.json"
            main(argv + ["--out", str(first)])
            main([argv[0], "--config", str(first), "--out", str(again)])
            a, b = json.loads(first.read_text()), json.loads(again.read_text())
            assert strip_timing(a) == strip_timing(b), f"{name} differs on rerun"
            code = main(["verify", "--report", str(first), "--out", str(tmp_path / f"{name}.v.json")])
            assert code == 0, f"verify failed on {name}"
        notes.append(f"{len(PRESETS)} reports")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
