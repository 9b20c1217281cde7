"""Admissible tuples, prime-tuple translates and finite Delta*_r probes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .generators import SetFamily
from .ntheory import prime_mask, primes_upto
from .windows import Window

EXHAUSTIVE_LIMIT = 10**7
MAX_DELTA_R = 12


@dataclass(frozen=True)
class Tuple:
    offsets: tuple

    def __post_init__(self):
        offs = tuple(int(h) for h in self.offsets)
        if not offs:
            raise ValueError("a tuple needs at least one offset")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError("offsets must be strictly increasing")
        object.__setattr__(self, "offsets", offs)

    def __len__(self) -> int:
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def shift(self, c: int) -> "Tuple":
        return Tuple(tuple(h + c for h in self.offsets))

    @property
    def span(self) -> int:
        return self.offsets[-1] - self.offsets[0]


def parse_tuple(text: str) -> Tuple:
    return Tuple(tuple(sorted({int(t) for t in text.split(",") if t.strip()})))


def is_admissible(h: Tuple) -> bool:
    """No prime p <= |H| sees every residue class occupied."""
    k = len(h)
    for p in primes_upto(k):
        p = int(p)
        if len({x % p for x in h}) == p:
            return False
    return True


def huang_wu_threshold(k: int) -> Fraction:
    out = Fraction(k)
    for p in primes_upto(k):
        out *= Fraction(int(p), int(p) - 1)
    return out


def huang_wu_extract(a, k: int) -> Tuple:
    """Admissible k-subset of A: drop the sparsest residue class mod each p <= k."""
    if k < 1:
        raise ValueError("k must be positive")
    vals = sorted({int(v) for v in a})
    need = huang_wu_threshold(k)
    if len(vals) < need:
        raise ValueError(f"set too small: |A| = {len(vals)} < {float(need):.4g} required for k = {k}")
    for p in primes_upto(k):
        p = int(p)
        counts = [0] * p
        for v in vals:
            counts[v % p] += 1
        drop = min(range(p), key=lambda r: (counts[r], r))
        vals = [v for v in vals if v % p != drop]
    if len(vals) < k:
        raise ValueError(f"set too small: only {len(vals)} survivors after sieving")
    return Tuple(tuple(vals[:k]))


# ---------------------------------------------------------------------------
# translates


def _hit_counts(h: Tuple, n_max: int, family: SetFamily | None, segment: int):
    top = n_max + h.offsets[-1]
    mask = prime_mask(top) if family is None else family.mask(top)
    for start in range(1, n_max + 1, segment):
        stop = min(start + segment, n_max + 1)
        counts = np.zeros(stop - start, dtype=np.int16)
        for off in h.offsets:
            lo, hi = start + off, stop + off
            if hi <= 0:
                continue
            seg = np.zeros(stop - start, dtype=bool)
            clip = max(lo, 0)
            seg[clip - lo :] = mask[clip:hi]
            counts += seg
        yield start, counts


def translate_search(
    h: Tuple, r: int, n_max: int, family: SetFamily | None = None, segment: int = 1 << 22
) -> list[int]:
    """All n in [1, n_max] with at least r of n + h_i in E (primes by default)."""
    if r < 1 or r > len(h):
        raise ValueError(f"r must lie in [1, {len(h)}]")
    if n_max < 1:
        return []
    out: list[int] = []
    for start, counts in _hit_counts(h, n_max, family, segment):
        out.extend((np.flatnonzero(counts >= r) + start).tolist())
    return out


# ---------------------------------------------------------------------------
# Delta*_r probing


@dataclass
class DeltaStarReport:
    r: int
    probe_span: int
    mode: str
    checked: int
    violation: tuple | None
    status: str
    notes: list[str] = field(default_factory=list)

    @property
    def definitive(self) -> bool:
        return self.violation is not None


def _first_violation(a_bits: np.ndarray, r: int, span: int):
    """Lexicographically first S with 0 in S, |S| = r, S - S avoiding A."""
    s = [0]

    def extend(start):
        if len(s) == r:
            return True
        for x in range(start, span + 1):
            if len(s) + (span - x + 1) < r:
                return False
            if any(a_bits[x - y] for y in s):
                continue
            s.append(x)
            if extend(x + 1):
                return True
            s.pop()
        return False

    return tuple(s) if extend(1) else None


def delta_star_certify(
    union_of_diffs: Window, r: int, probe_span: int, trials: int = 10_000, seed: int = 0
) -> DeltaStarReport:
    """Search for an r-set S in [0, probe_span] whose positive differences miss A.

    Finding one is a certificate that A is not Delta*_r. Not finding one is
    evidence only.
    """
    if r < 1 or r > MAX_DELTA_R:
        raise ValueError(f"r must lie in [1, {MAX_DELTA_R}]")
    notes = []
    if probe_span > union_of_diffs.hi:
        notes.append(f"probe_span clipped to the window top {union_of_diffs.hi}")
        probe_span = union_of_diffs.hi
    a_bits = np.zeros(probe_span + 1, dtype=bool)
    m = union_of_diffs.members()
    m = m[(m >= 1) & (m <= probe_span)]
    a_bits[m] = True
    if r == 1:
        return DeltaStarReport(1, probe_span, "exhaustive", 1, (0,), "violation certificate", notes)
    if math.comb(probe_span + 1, r) <= EXHAUSTIVE_LIMIT:
        # Translation invariance lets the smallest element sit at 0.
        found = _first_violation(a_bits, r, probe_span)
        mode, checked = "exhaustive", math.comb(probe_span, r - 1)
    else:
        rng = np.random.default_rng(seed)
        found = None
        checked = 0
        for _ in range(trials):
            s = np.sort(rng.choice(probe_span + 1, size=r, replace=False))
            s = s - s[0]
            checked += 1
            if not any(a_bits[int(y - x)] for x, y in combinations(s.tolist(), 2)):
                found = tuple(int(v) for v in s)
                break
        mode = "sampled"
    status = "violation certificate" if found is not None else "no violation found"
    return DeltaStarReport(r, probe_span, mode, int(checked), found, status, notes)


# ---------------------------------------------------------------------------
# syndeticity index


@dataclass
class CoverReport:
    translates: list[int]
    threshold: int
    horizon: int
    ok: bool
    message: str

    @property
    def index(self) -> int:
        return len(self.translates)


def syndeticity_index_cover(a: Window, r_bound: int, t1: int = 1) -> CoverReport:
    """Greedy translates t_1 < t_2 < ... with each t_k outside the earlier t_i + A.

    Runs on [t1, a.hi]. Everything in (threshold, horizon] ends up covered.
    """
    if a.cardinality == 0:
        raise ValueError("A must be nonempty")
    horizon = a.hi
    covered = np.zeros(horizon + 1, dtype=bool)
    am = a.members()
    ts: list[int] = []
    t = t1
    while t <= horizon:
        if len(ts) == r_bound:
            return CoverReport(ts, t, horizon, False, "index exceeds bound on window")
        ts.append(t)
        hit = am + t
        covered[hit[hit <= horizon]] = True
        rest = np.flatnonzero(~covered[t + 1 :])
        if not rest.size:
            break
        t = int(rest[0]) + t + 1
    return CoverReport(ts, ts[-1], horizon, True, "covered")


def verify_cover(a: Window, report: CoverReport) -> bool:
    """Independent check: each n in (threshold, horizon] is some t_i + a."""
    members = set(a.members().tolist())
    return all(
        any((n - t) in members for t in report.translates)
        for n in range(report.threshold + 1, report.horizon + 1)
    )


# ---------------------------------------------------------------------------
# colorings and pigeonhole


def load_coloring(text: str) -> dict[int, int]:
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        n, c = line.replace(",", " ").split()[:2]
        out[int(n)] = int(c)
    return out


def prime_index_parity_coloring(limit: int) -> dict[int, int]:
    """Color the i-th prime (1-based) by 1 + (i mod 2)."""
    return {int(p): 1 + (i + 1) % 2 for i, p in enumerate(primes_upto(limit))}


@dataclass
class PigeonholeReport:
    colors: int
    translates: list[int]
    pairs: list[dict]
    all_in_h_minus_h: bool


def partition_pigeonhole_check(
    family: SetFamily, coloring: dict[int, int], h: Tuple, n_max: int
) -> PigeonholeReport:
    """At every translate with r+1 hits, find two equal-colored members."""
    colors = sorted(set(coloring.values()))
    r = len(colors)
    if r + 1 > len(h):
        raise ValueError("tuple too short for r + 1 hits")
    top = n_max + h.offsets[-1]
    members = family.members(top)
    missing = [int(v) for v in members if int(v) not in coloring]
    if missing:
        raise ValueError(f"coloring is missing members, first {missing[0]}")
    fam = None if family.kind == "primes" else family
    diffs = {y - x for x, y in combinations(h.offsets, 2)}
    pairs = []
    mask = family.mask(top)
    for n in translate_search(h, r + 1, n_max, family=fam):
        seen: dict[int, int] = {}
        for off in h.offsets:
            v = n + off
            if v < 1 or not mask[v]:
                continue
            c = coloring[v]
            if c in seen:
                pairs.append({"n": n, "color": c, "h_j": seen[c], "h_m": off, "d": off - seen[c]})
                break
            seen[c] = off
    return PigeonholeReport(r, [p["n"] for p in pairs], pairs, all(p["d"] in diffs for p in pairs))
