"""Report producers and raw-data verifiers behind the command line.

Each ``run_<command>`` takes a resolved config dict and returns
``(result, raw, checks)``: ``result`` holds headline numbers, ``raw`` the
sets needed to recompute every hard invariant, and ``checks`` the booleans
computed during the run. ``verify_<command>`` recomputes ``checks`` from
``raw`` alone and never reads the stored verdicts.
"""
from __future__ import annotations

import base64
import math
from fractions import Fraction

import numpy as np

from . import bohr_sieve, chen_desk, gap_coloring, kriz_lab, sparse_difference, tuples
from .generators import SetFamily, count_profile, parse_family
from .ntheory import is_prime
from .windows import Window, banach_profile


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def unfrac(s: str) -> Fraction:
    return Fraction(s)


def pack_window(w: Window) -> str:
    return base64.b64encode(w.to_rle()).decode("ascii")


def unpack_window(s: str) -> Window:
    return Window.from_rle(base64.b64decode(s))


def parse_int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    return [int(float(t)) if "e" in t.lower() else int(t) for t in str(text).split(",") if t.strip()]


# ---------------------------------------------------------------------------
# sieve


def run_sieve(cfg):
    fam = parse_family(cfg["family"])
    x = cfg["window"]
    shifts = parse_int_list(cfg["shifts"])
    prof = count_profile(fam, x, shifts)
    reach = x + max(shifts, default=0)
    w = Window.from_mask(fam.mask(reach), 1, reach)
    result = {
        "family": fam.name,
        "window": x,
        "E": prof.E_of_x[-1],
        "E_m": {str(m): v[-1] for m, v in prof.E_m_of_x.items()},
        "c_m": {str(m): frac(c) for m, c in prof.c_m_estimates.items()},
    }
    raw = {"members": pack_window(w)}
    checks = {"E_m_le_E": all(v[-1] <= prof.E_of_x[-1] for v in prof.E_m_of_x.values())}
    return result, raw, checks


def verify_sieve(report):
    res, raw = report["result"], report["raw"]
    w = unpack_window(raw["members"])
    x = res["window"]
    bits = w.bits
    e = int(bits[:x].sum())
    ok = e == res["E"]
    fam = parse_family(res["family"])
    sample = w.members()[:200]
    ok_members = all(fam.contains(int(v)) for v in sample)
    em_ok = True
    for m, v in res["E_m"].items():
        m = int(m)
        em_ok &= int((bits[:x] & bits[m : x + m]).sum()) == v
    return {"E_m_le_E": ok and em_ok and ok_members and all(v <= e for v in res["E_m"].values())}


# ---------------------------------------------------------------------------
# thmB


def run_thmB(cfg):
    fam = parse_family(cfg["family"])
    f = sparse_difference.parse_growth(cfg["f"])
    window = cfg["window"]
    ladder = []
    if cfg["g"] == "auto":
        tuned = sparse_difference.auto_tune_growth(fam, f, window, k_max=cfg["k_max"])
        res, ladder = tuned.result, tuned.ladder
    else:
        g = sparse_difference.parse_growth(cfg["g"])
        k_max = cfg["k_max"] if g.domain_max is None else min(cfg["k_max"], g.domain_max)
        res = sparse_difference.build_sparse_difference(fam, f, sparse_difference.ThickSpec(g, k_max), window)
    dens = [Fraction(r["density_A"]) for r in ladder if r.get("ok")]
    result = {
        "family": res.family,
        "f": res.f,
        "g": res.g,
        "window": res.window,
        "density_A": frac(res.density_A_in_E),
        "density_A_float": float(res.density_A_in_E),
        "density_B": frac(res.density_B_in_E),
        "r_hits": res.r_hits,
        "provisional_tail": res.provisional_tail,
        "checked_levels": res.checked_levels,
        "sizes": {"C": res.C.cardinality, "B": res.B.cardinality, "A": res.A.cardinality},
        "ladder": [
            {k: (frac(v) if isinstance(v, Fraction) else v) for k, v in r.items()} for r in ladder
        ],
        "ladder_monotone": all(b >= a for a, b in zip(dens, dens[1:])),
    }
    raw = {
        "A": pack_window(res.A),
        "B": pack_window(res.B),
        "C": pack_window(res.C),
        "intervals": [list(iv) for iv in res.intervals],
    }
    checks = {
        "r_hits_zero": res.r_hits == 0,
        "A_is_C_minus_B": res.A.cardinality == res.C.cardinality - int((res.C.bits & res.B.bits).sum()),
    }
    return result, raw, checks


def verify_thmB(report):
    res, raw = report["result"], report["raw"]
    a, b, c = (unpack_window(raw[k]) for k in ("A", "B", "C"))
    hits = sparse_difference.r_hits_bruteforce(a, raw["intervals"], res["window"])
    fam = parse_family(res["family"])
    e = fam.mask(res["window"])[1:]
    a_sub = bool(np.all(e[a.bits]) and np.all(c.bits[a.bits]) and not np.any(a.bits & b.bits))
    same = np.array_equal(a.bits, c.bits & ~b.bits)
    dens = Fraction(a.cardinality, int(e.sum())) == unfrac(res["density_A"])
    return {"r_hits_zero": hits == 0 and res["r_hits"] == 0 and dens, "A_is_C_minus_B": a_sub and same}


# ---------------------------------------------------------------------------
# digit battery


def run_digit(cfg):
    out = sparse_difference.digit_counterexample_battery(cfg["a_max"], cfg["window_exp"])
    top = 1 << cfg["window_exp"]
    e = SetFamily("digit-balanced").mask(top)
    pairs = {}
    for a in range(1, cfg["a_max"] + 1):
        hit = np.flatnonzero(e[a:] & e[:-a])
        if hit.size:
            pairs[str(a)] = [int(hit[0]) + a, int(hit[0])]
    n_len = cfg["banach_n"]
    profile = dict(out["banach_profile"])
    result = {
        "window_exp": cfg["window_exp"],
        "size": out["size"],
        "counts": {str(a): c for a, c in out["counts"].items()},
        "all_represented": out["all_represented"],
        "banach_profile": {str(n): frac(v) for n, v in out["banach_profile"]},
        "banach_max_at_n_float": float(profile[n_len]),
        "banach_at_n": frac(profile[n_len]),
        "small_counts": {str(1 << j): int(e[: (1 << j) + 1].sum()) for j in (2, 4, 6)},
    }
    raw = {"witness_pairs": pairs, "banach_n": n_len}
    result["banach_below_threshold"] = profile[n_len] < Fraction(cfg["banach_max"])
    checks = {
        "all_represented": out["all_represented"],
        "banach_matches_rescan": True,
    }
    return result, raw, checks


def _digit_balanced(n: int) -> bool:
    s = bin(n)[2:]
    return len(s) % 2 == 0 and s.count("1") == len(s) // 2


def verify_digit(report):
    res, raw, cfg = report["result"], report["raw"], report["full_config"]
    pairs = raw["witness_pairs"]
    rep = all(
        str(a) in pairs
        and pairs[str(a)][0] - pairs[str(a)][1] == a
        and all(_digit_balanced(v) and 1 <= v <= (1 << res["window_exp"]) for v in pairs[str(a)])
        for a in range(1, cfg["a_max"] + 1)
    )
    top = 1 << res["window_exp"]
    small_ok = all(
        sum(_digit_balanced(v) for v in range(1, int(n) + 1)) == c
        for n, c in res["small_counts"].items()
    )
    e = Window.from_mask(SetFamily("digit-balanced").mask(top), 1, top)
    prof = dict(banach_profile(e, [raw["banach_n"]]))
    return {
        "all_represented": rep and small_ok,
        "banach_matches_rescan": frac(prof[raw["banach_n"]]) == res["banach_at_n"]
        and (prof[raw["banach_n"]] < Fraction(cfg["banach_max"])) == res["banach_below_threshold"],
    }


# ---------------------------------------------------------------------------
# tuples


def run_tuples(cfg):
    h = tuples.parse_tuple(cfg["H"])
    found = tuples.translate_search(h, cfg["r"], cfg["n_max"])
    result = {
        "H": list(h.offsets),
        "admissible": tuples.is_admissible(h),
        "r": cfg["r"],
        "n_max": cfg["n_max"],
        "translates": found,
    }
    checks = {"translates_valid": True}
    if cfg.get("delta_star_span"):
        diffs = sorted({y - x for x in h.offsets for y in h.offsets if y > x})
        w = Window.from_members(diffs, 1, max(diffs))
        rep = tuples.delta_star_certify(w, cfg["delta_star_r"], cfg["delta_star_span"], seed=cfg["seed"])
        result["delta_star"] = {"status": rep.status, "violation": rep.violation, "mode": rep.mode}
    return result, {"H": list(h.offsets), "translates": found}, checks


def verify_tuples(report):
    res, raw = report["result"], report["raw"]
    h, r = raw["H"], res["r"]
    ok = all(sum(is_prime(n + x) for x in h) >= r for n in raw["translates"])
    brute_adm = all(len({x % p for x in h}) < p for p in range(2, len(h) + 1) if is_prime(p))
    return {"translates_valid": ok and brute_adm == res["admissible"]}


# ---------------------------------------------------------------------------
# color-gaps


def run_color_gaps(cfg):
    fam = parse_family(cfg["family"])
    anchors = parse_int_list(cfg["f_indices"])
    r = gap_coloring.build_thick_R(fam, anchors, window_hi=cfg["window"])
    e = Window.from_mask(fam.mask(cfg["window"]), 1, cfg["window"])
    col = gap_coloring.greedy_two_color(e, r)
    cls = {c: [a for a, k in col.colors.items() if k == c] for c in (1, 2)}
    result = {
        "family": fam.name,
        "window": cfg["window"],
        "intervals": [[iv.lo, iv.hi] for iv in r],
        "method": col.method,
        "hits": {str(k): v for k, v in col.hits.items()},
        "edges": len(col.graph.edges),
        "max_backward_degree": col.graph.max_backward_degree,
        "flags": col.graph.flags,
    }
    raw = {
        "class1": pack_window(Window.from_members(cls[1], 1, cfg["window"])),
        "class2": pack_window(Window.from_members(cls[2], 1, cfg["window"])),
        "intervals": result["intervals"],
    }
    checks = {
        "zero_hits": col.verified,
        "backward_degree_le_1": col.graph.max_backward_degree <= 1,
    }
    return result, raw, checks


def verify_color_gaps(report):
    res, raw = report["result"], report["raw"]
    c1, c2 = unpack_window(raw["class1"]), unpack_window(raw["class2"])
    span = res["window"] - 1
    hits = 0
    for w in (c1, c2):
        if w.cardinality < 2:
            continue
        bits = w.as_int()
        for lo, hi in raw["intervals"]:
            for d in range(lo, min(hi, span) + 1):
                hits += (bits & (bits >> d)).bit_count()
    fam = parse_family(res["family"])
    e = fam.mask(res["window"])[1:]
    partition = np.array_equal(c1.bits | c2.bits, e) and not np.any(c1.bits & c2.bits)
    members = np.flatnonzero(e) + 1
    deg = 0
    mset = set(members.tolist())
    for a in members.tolist():
        cnt = sum(1 for lo, hi in raw["intervals"] for d in range(lo, hi + 1) if (a - d) in mset)
        deg = max(deg, cnt)
    return {"zero_hits": hits == 0 and partition, "backward_degree_le_1": deg <= 1}


# ---------------------------------------------------------------------------
# kriz


def run_kriz(cfg):
    action = cfg["action"]
    if action == "kneser":
        rep = kriz_lab.kneser_bound_check(cfg["d"], cfg["k"], time_limit=cfg["time_limit"])
        result = {
            "action": action, "d": cfg["d"], "k": cfg["k"], "bound": 2 * cfg["k"] + 1,
            "degenerate": rep.degenerate, "note": rep.note, "chi": rep.chi,
            "chi_lower": rep.lower, "chi_upper": rep.upper, "exact": rep.exact,
            "certificate": rep.certificate,
            "verdict": "degenerate" if rep.degenerate else ("pass" if rep.holds else "fail"),
        }
        raw = {"clique": rep.clique, "coloring": rep.coloring}
        return result, raw, {"bound_holds": rep.degenerate or bool(rep.holds)}
    if action == "witness":
        S = parse_int_list(cfg["S"])
        delta = Fraction(cfg["delta"])
        res = kriz_lab.witness_search(S, cfg["m"], delta)
        result = {"action": action, "S": S, "m": cfg["m"], "delta": frac(delta),
                  "best_size": res.best_size, "exact": res.exact, "mode": res.mode,
                  "found": res.witness is not None}
        raw = {"S": S, "B": list(res.best_set), "m": cfg["m"], "delta": frac(delta)}
        return result, raw, {"witness_valid": True}
    if action == "assemble":
        fam = parse_family(cfg["family"])
        out = kriz_lab.assemble_separation(fam, Fraction(cfg["delta"]), cfg["rounds"])
        result = {
            "action": action, "family": fam.name, "delta": frac(Fraction(cfg["delta"])),
            "rounds_requested": cfg["rounds"], "rounds_completed": out.rounds_completed,
            "final": {"S": list(out.S), "m": out.m, "C_size": len(out.C)},
            "transcript": out.transcript,
        }
        checks = {
            "conditions_each_round": all(
                e["verified"] for e in out.transcript if e["lemma"] in ("seed", "conditions")
            ),
            "rounds_completed": out.rounds_completed == cfg["rounds"],
        }
        return result, {"history": out.history}, checks
    raise ValueError(f"unknown kriz action {action!r}")


def _weight(x: int) -> int:
    return bin(x).count("1")


def verify_kriz(report):
    res, raw = report["result"], report["raw"]
    action = res["action"]
    if action == "kneser":
        d, k, radius = res["d"], res["k"], res["bound"]
        if res["degenerate"]:
            return {"bound_holds": d <= radius}
        n = 1 << d
        gens = np.array([g for g in range(n) if _weight(g) >= d - radius], dtype=np.int64)
        clique = raw["clique"]
        clique_ok = len(clique) >= radius and all(
            _weight(x ^ y) >= d - radius for i, x in enumerate(clique) for y in clique[i + 1 :]
        )
        col = np.asarray(raw["coloring"], dtype=np.int64)
        x = np.arange(n, dtype=np.int64)
        proper = col.size == n and all(bool(np.all(col != col[x ^ g])) for g in gens.tolist())
        exact_ok = True
        if res["exact"]:
            exact_ok = len(set(col.tolist())) == res["chi"] and len(clique) == res["chi"]
        return {"bound_holds": clique_ok and proper and exact_ok and res["chi_lower"] >= 2 * k + 1}
    if action == "witness":
        found = _plain_witness_check(raw["S"], raw["B"], raw["m"], Fraction(raw["delta"]))
        return {"witness_valid": found == res["found"] and len(raw["B"]) == res["best_size"]}
    fam = parse_family(res["family"])
    delta = Fraction(res["delta"])
    ok = bool(raw["history"])
    for rnd in raw["history"]:
        S, C, m, k, win = rnd["S"], rnd["C"], rnd["m"], rnd["k"], rnd["window_hi"]
        cset = set(C)
        ii = (
            len(C) > delta * m
            and all(1 <= c <= m for c in C)
            and all(c + s + t <= m for c in C for s in S for t in S)
        )
        iii = not any((c + s) in cset for c in C for s in S)
        in_diff = all(
            any(fam.contains(x) and fam.contains(x + s) for x in range(1, win + 1)) for s in S
        )
        chrom = kriz_lab.chromatic_intersectivity_certificate(fam, S, k, (1, win))
        ok = ok and ii and iii and in_diff and chrom.chi_lower > k
    done = len(raw["history"]) == res["rounds_requested"] == res["rounds_completed"]
    return {"conditions_each_round": ok, "rounds_completed": done}


def _plain_witness_check(S, B, m, delta) -> bool:
    bset = set(B)
    return (
        len(B) > delta * m
        and all(1 <= b <= m for b in B)
        and not any((b + s) in bset for b in B for s in S)
        and all(b + s + t <= m for b in B for s in S for t in S)
    )


# ---------------------------------------------------------------------------
# bohr


def run_bohr(cfg):
    fam = bohr_sieve.parse_bohr_family(cfg["family"])
    rep = bohr_sieve.pipeline(fam, cfg["prime_bound"])
    result = rep.to_dict()
    trail = rep.bound_trail
    result["final_bound_float"] = float(rep.final_bound)
    if getattr(fam, "kind", "") == "primes":
        gamma = 0.5772156649015329
        mertens = math.exp(-gamma) / math.log(cfg["prime_bound"])
        result["mertens_ratio"] = float(rep.final_bound) / mertens
    raw = {"moduli": [[bm.c, sorted(bm.blocked), list(bm.exceptions)] for bm in rep.moduli]}
    checks = {
        "trail_strictly_decreasing": all(b < a for a, b in zip([Fraction(1)] + trail, trail)),
        "moduli_validated": True,
    }
    return result, raw, checks


def verify_bohr(report):
    res, raw = report["result"], report["raw"]
    fam = bohr_sieve.parse_bohr_family(res["family"])
    mods, members, _ = bohr_sieve._family_moduli(fam, report["full_config"]["prime_bound"])
    members = np.asarray(members, dtype=np.int64)
    valid = True
    prod = Fraction(1)
    trail = []
    for c, blocked, exc in raw["moduli"]:
        in_blocked = members[np.isin(members % c, np.asarray(blocked, dtype=np.int64))]
        valid &= set(in_blocked.tolist()) <= set(exc)
        prod *= 1 - Fraction(len(blocked), c)
        trail.append(prod)
    matches = [frac(t) for t in trail] == res["bound_trail"] and frac(prod) == res["final_bound"]
    coprime = all(math.gcd(a[0], b[0]) == 1 for i, a in enumerate(raw["moduli"]) for b in raw["moduli"][i + 1 :])
    return {
        "trail_strictly_decreasing": all(b < a for a, b in zip([Fraction(1)] + trail, trail)) and matches,
        "moduli_validated": bool(valid and coprime and len(mods) == len(raw["moduli"])),
    }


# ---------------------------------------------------------------------------
# chen


def run_chen(cfg):
    action = cfg["action"]
    if action == "sum":
        s = chen_desk.chen_sum(cfg["N"])
        result = {"action": action, "N": cfg["N"], "total": s.total, "ratio": s.ratio}
        return result, {}, {"ratio_positive": s.ratio > 0.05}
    if action == "gowers":
        f = chen_desk.load_zn_function(cfg["function"], cfg["N"])
        val = chen_desk.gowers_norm(f, cfg["k"])
        result = {"action": action, "function": cfg["function"], "N": cfg["N"], "k": cfg["k"], "norm": val}
        return result, {"values": [[z.real, z.imag] for z in f.tolist()]}, {"nonnegative": bool(val >= 0)}
    if action == "recurrence":
        primes = SetFamily("primes").members(cfg["n_max"])
        subsets, outcomes = [], []
        for t in range(cfg["trials"]):
            chosen = primes
            if cfg["subset_density"] < 1:
                rng = np.random.default_rng([cfg["seed"], t])
                chosen = primes[rng.random(primes.size) < cfg["subset_density"]]
            w = Window.from_members(chosen, 1, cfg["n_max"])
            found = chen_desk.recurrence_search(w, cfg["k"])
            subsets.append(pack_window(w))
            outcomes.append(list(found) if found else None)
        result = {
            "action": action, "n_max": cfg["n_max"], "k": cfg["k"], "trials": cfg["trials"],
            "subset_density": cfg["subset_density"], "found": outcomes,
            "relative_densities": [frac(Fraction(unpack_window(x).cardinality, primes.size)) for x in subsets],
        }
        return result, {"subsets": subsets, "found": outcomes}, {"recurrence_found": all(outcomes)}
    raise ValueError(f"unknown chen action {action!r}")


def verify_chen(report):
    res, raw = report["result"], report["raw"]
    action = res["action"]
    if action == "sum":
        s = chen_desk.chen_sum(res["N"])
        return {"ratio_positive": s.total == res["total"] and s.ratio > 0.05}
    if action == "gowers":
        f = np.array([complex(a, b) for a, b in raw["values"]])
        return {"nonnegative": bool(abs(chen_desk.gowers_norm(f, res["k"]) - res["norm"]) < 1e-9)}
    ok = bool(raw["subsets"])
    for packed, found in zip(raw["subsets"], raw["found"]):
        if not found:
            return {"recurrence_found": False}
        members = unpack_window(packed).members().tolist()
        ok = ok and chen_desk.verify_recurrence(members, res["k"], found[0], found[1])
    return {"recurrence_found": ok}


RUNNERS = {
    "sieve": (run_sieve, verify_sieve),
    "thmB": (run_thmB, verify_thmB),
    "digit": (run_digit, verify_digit),
    "tuples": (run_tuples, verify_tuples),
    "color-gaps": (run_color_gaps, verify_color_gaps),
    "kriz": (run_kriz, verify_kriz),
    "bohr": (run_bohr, verify_bohr),
    "chen": (run_chen, verify_chen),
}

