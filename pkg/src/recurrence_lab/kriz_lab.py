"""Hamming-ball Cayley graphs, exact chromatic numbers and non-intersectivity witnesses.

Graphs are stored as one Python-int bitset of neighbours per vertex. The
chromatic solver brackets chi between a greedy clique and a DSATUR
coloring and closes the gap with a budgeted DSATUR backtracking search.
"""
from __future__ import annotations

import math
import sys
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations

import numpy as np

from .generators import SetFamily
from .windows import Window, difference_set, representation_count

VERTEX_LIMIT = 2**14
EXACT_WITNESS_M = 60
EXACT_SEARCH_LIMIT = 2500  # backtracking recursion depth guard


# ---------------------------------------------------------------------------
# Hamming space


@dataclass(frozen=True)
class HammingSpace:
    d: int

    def __post_init__(self):
        if not 1 <= self.d <= 24:
            raise ValueError("dimension must lie in [1, 24]")

    @property
    def size(self) -> int:
        return 1 << self.d

    @property
    def ones(self) -> int:
        return self.size - 1

    @staticmethod
    def weight(x: int) -> int:
        return int(x).bit_count()


def hamming_ball(space: HammingSpace, k: int, center: int) -> list[int]:
    if not 0 <= k <= space.d:
        raise ValueError("radius must lie in [0, d]")
    w = np.bitwise_count(np.arange(space.size, dtype=np.uint32) ^ np.uint32(center))
    return np.flatnonzero(w <= k).tolist()


# ---------------------------------------------------------------------------
# Cayley graphs


@dataclass
class CayleyGraph:
    """Vertices joined when their difference (or XOR, for ``group="f2"``) lies in S."""

    vertices: list[int]
    generators: frozenset
    group: str = "int"

    def __post_init__(self):
        self.vertices = sorted(set(int(v) for v in self.vertices))
        gens = {int(s) for s in self.generators}
        if self.group == "int":
            gens = {abs(s) for s in gens}
        elif self.group != "f2":
            raise ValueError("group must be 'int' or 'f2'")
        if 0 in gens:
            raise ValueError("self-loop: 0 is a generator")
        self.generators = frozenset(gens)

    @classmethod
    def hamming(cls, d: int, generators) -> "CayleyGraph":
        return cls(list(range(1 << d)), frozenset(generators), "f2")

    def __len__(self) -> int:
        return len(self.vertices)

    def adjacency(self) -> list[int]:
        """Neighbour bitsets indexed by vertex position."""
        index = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        gens = sorted(self.generators)
        if self.group == "f2" and n == 1 << (n.bit_length() - 1) and self.vertices == list(range(n)):
            return _f2_adjacency(n, gens)
        adj = [0] * n
        for i, v in enumerate(self.vertices):
            bits = 0
            for s in gens:
                if self.group == "int":
                    for u in (v - s, v + s):
                        j = index.get(u)
                        if j is not None:
                            bits |= 1 << j
                else:
                    j = index.get(v ^ s)
                    if j is not None:
                        bits |= 1 << j
            adj[i] = bits
        return adj

    def edges(self) -> list[tuple[int, int]]:
        adj = self.adjacency()
        out = []
        for i, bits in enumerate(adj):
            for j in _bits(bits >> (i + 1)):
                out.append((self.vertices[i], self.vertices[i + 1 + j]))
        return out

    def to_adjacency_text(self) -> str:
        adj = self.adjacency()
        lines = []
        for i, bits in enumerate(adj):
            nbrs = " ".join(str(self.vertices[j]) for j in _bits(bits))
            lines.append(f"{self.vertices[i]}: {nbrs}".rstrip())
        return "\n".join(lines) + "\n"


def _f2_adjacency(n: int, gens) -> list[int]:
    # Row x is the generator indicator permuted by x -> x ^ s.
    verts = np.arange(n, dtype=np.int64)
    out = []
    g = np.asarray(gens, dtype=np.int64)
    for x in range(n):
        row = np.zeros(n, dtype=bool)
        if g.size:
            row[verts[g ^ x]] = True
        out.append(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little"))
    return out


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


# ---------------------------------------------------------------------------
# chromatic number


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ChromaticResult:
    lower: int
    upper: int
    coloring: dict[int, int]
    clique: list[int]
    exact: bool
    nodes: int = 0
    lower_reason: str = "clique"

    @property
    def chi(self) -> int | None:
        return self.upper if self.exact else None


def _greedy_clique(adj: list[int], starts: int = 24) -> list[int]:
    n = len(adj)
    order = sorted(range(n), key=lambda v: -adj[v].bit_count())
    best: list[int] = []
    for s in order[:starts]:
        clique = [s]
        cand = adj[s]
        while cand:
            v = max(_bits(cand), key=lambda u: ((adj[u] & cand).bit_count(), -u))
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def _dsatur_greedy(adj: list[int], nbrs: list[list[int]]) -> list[int]:
    n = len(adj)
    colors = [-1] * n
    used = [0] * n
    sat = np.zeros(n, dtype=np.int64)
    deg = np.array([len(x) for x in nbrs], dtype=np.int64)
    key = sat * (n + 1) + deg
    for _ in range(n):
        v = int(np.argmax(key))
        c = (~used[v] & (used[v] + 1)).bit_length() - 1
        colors[v] = c
        key[v] = -1
        for u in nbrs[v]:
            if colors[u] < 0 and not (used[u] >> c) & 1:
                used[u] |= 1 << c
                sat[u] += 1
                key[u] = sat[u] * (n + 1) + deg[u]
    return colors


def _bipartition(nbrs: list[list[int]]) -> list[int] | None:
    n = len(nbrs)
    colors = [-1] * n
    for s in range(n):
        if colors[s] >= 0:
            continue
        colors[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if colors[v] < 0:
                    colors[v] = 1 - colors[u]
                    queue.append(v)
                elif colors[v] == colors[u]:
                    return None
    return colors


def _k_colorable(adj, nbrs, k: int, clique: list[int], budget: int, deadline: float):
    """DSATUR backtracking; returns (coloring or None, nodes). Raises on budget."""
    n = len(adj)
    colors = [-1] * n
    counts = [[0] * k for _ in range(n)]
    sat = [0] * n
    deg = [len(x) for x in nbrs]
    nodes = 0

    def assign(v, c):
        colors[v] = c
        for u in nbrs[v]:
            cu = counts[u]
            if cu[c] == 0:
                sat[u] += 1
            cu[c] += 1

    def unassign(v, c):
        colors[v] = -1
        for u in nbrs[v]:
            cu = counts[u]
            cu[c] -= 1
            if cu[c] == 0:
                sat[u] -= 1

    for i, v in enumerate(clique[:k]):
        assign(v, i)
    uncolored = set(v for v in range(n) if colors[v] < 0)

    def solve(maxc):
        nonlocal nodes
        if not uncolored:
            return True
        nodes += 1
        if nodes > budget or time.monotonic() > deadline:
            raise BudgetExceeded
        v = max(uncolored, key=lambda u: (sat[u], deg[u], -u))
        if sat[v] >= k:
            return False
        uncolored.discard(v)
        for c in range(min(k, maxc + 2)):
            if counts[v][c]:
                continue
            assign(v, c)
            if solve(max(maxc, c)):
                return True
            unassign(v, c)
        uncolored.add(v)
        return False

    ok = solve(len(clique[:k]) - 1)
    return (colors if ok else None), nodes


def chromatic_number(
    g: CayleyGraph, node_budget: int = 200_000, time_limit: float = 30.0, started: float | None = None
) -> ChromaticResult:
    """Chromatic number with a clique certificate for the lower bound.

    ``exact`` is false when the budget runs out before the bounds meet. The
    time limit counts from ``started`` (a ``time.monotonic`` reading), or from
    entry when it is omitted.
    """
    # keep a little of the allowance for building the result after a timeout
    reserve = min(1.0, 0.02 * time_limit)
    deadline = (time.monotonic() if started is None else started) + time_limit - reserve
    n = len(g)
    if n > VERTEX_LIMIT:
        raise ValueError(f"vertex budget exceeded: {n} > {VERTEX_LIMIT}")
    if n == 0:
        return ChromaticResult(0, 0, {}, [], True)
    adj = g.adjacency()
    nbrs = [list(_bits(a)) for a in adj]
    if not any(adj):
        return ChromaticResult(1, 1, {v: 1 for v in g.vertices}, [g.vertices[0]], True)
    clique = _greedy_clique(adj)
    lower, reason = len(clique), "clique"
    best = _dsatur_greedy(adj, nbrs)
    upper = max(best) + 1
    nodes = 0
    if lower < 3 <= upper:
        two = _bipartition(nbrs)
        if two is not None:
            best, upper = two, 2
        else:
            lower, reason = 3, "odd cycle"
    exact = lower == upper
    if not exact and n > EXACT_SEARCH_LIMIT:
        coloring = {g.vertices[i]: c + 1 for i, c in enumerate(best)}
        return ChromaticResult(lower, upper, coloring, [g.vertices[i] for i in clique], False, 0, reason)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, n + 500))
    try:
        while lower < upper:
            found, used = _k_colorable(adj, nbrs, lower, clique, node_budget - nodes, deadline)
            nodes += used
            if found is None:
                lower, reason = lower + 1, "exhaustive refutation"
            else:
                best, upper = found, lower
        exact = True
    except BudgetExceeded:
        exact = False
    finally:
        sys.setrecursionlimit(old_limit)
    coloring = {g.vertices[i]: c + 1 for i, c in enumerate(best)}
    return ChromaticResult(lower, upper, coloring, [g.vertices[i] for i in clique], exact, nodes, reason)


def is_proper(g: CayleyGraph, coloring: dict[int, int]) -> bool:
    return all(coloring[a] != coloring[b] for a, b in g.edges())


# ---------------------------------------------------------------------------
# Kneser-type bound


@dataclass
class KneserReport:
    d: int
    k: int
    degenerate: bool
    note: str
    lower: int | None = None
    upper: int | None = None
    chi: int | None = None
    exact: bool = False
    certificate: str = ""
    holds: bool | None = None
    seconds: float = 0.0
    clique: list = field(default_factory=list)
    coloring: list = field(default_factory=list)


def kneser_bound_check(d: int, k: int, node_budget: int = 200_000, time_limit: float = 30.0) -> KneserReport:
    """chi(Cay(F_2^d, H_{2k+1}(1))) against the bound 2k + 1."""
    if k < 1 or not 1 <= d <= 14:
        raise ValueError("need k >= 1 and 1 <= d <= 14")
    radius = 2 * k + 1
    if d <= radius:
        return KneserReport(
            d, k, True,
            f"degenerate: weight(1 - 0) = {d} <= {radius}, so 0 lies in the ball and every vertex has a self-loop",
        )
    t0 = time.monotonic()
    space = HammingSpace(d)
    g = CayleyGraph.hamming(d, hamming_ball(space, radius, space.ones))
    res = chromatic_number(g, node_budget, time_limit, started=t0)
    if res.lower >= radius and res.lower_reason == "clique":
        cert = f"clique of size {res.lower}"
    else:
        cert = res.lower_reason
    return KneserReport(
        d, k, False, "ok", res.lower, res.upper, res.chi, res.exact, cert,
        res.lower >= radius, time.monotonic() - t0,
        list(res.clique), [res.coloring[v] for v in g.vertices],
    )


# ---------------------------------------------------------------------------
# rational torus points and H-tilde


@dataclass(frozen=True)
class RationalTorusPoint:
    coords: tuple

    def __post_init__(self):
        cs = []
        for c in self.coords:
            f = Fraction(*c) if isinstance(c, tuple) else Fraction(c)
            if not 0 <= f < 1:
                raise ValueError("coordinates must lie in [0, 1)")
            cs.append(f)
        if not cs:
            raise ValueError("need at least one coordinate")
        object.__setattr__(self, "coords", tuple(cs))
        if self.denominator > 10**6:
            raise ValueError("common denominator exceeds 10**6")

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def denominator(self) -> int:
        return reduce(math.lcm, (c.denominator for c in self.coords), 1)


def htilde(alpha: RationalTorusPoint, k: int, epsilon: Fraction, n_range) -> list[int]:
    """n with every coordinate of n*alpha within epsilon of 0 or 1/2 and at most k near 0."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < Fraction(1, 4):
        raise ValueError("epsilon must lie in (0, 1/4)")
    q = alpha.denominator
    lo, hi = n_range
    n = np.arange(lo, hi + 1, dtype=np.int64)
    en, ed = epsilon.numerator, epsilon.denominator
    near_zero_count = np.zeros(n.size, dtype=np.int64)
    ok = np.ones(n.size, dtype=bool)
    for c in alpha.coords:
        p = c.numerator * (q // c.denominator)
        r = (n % q) * p % q
        d0 = np.minimum(r, q - r)
        near0 = d0 * ed < en * q
        nearhalf = np.abs(2 * r - q) * ed < 2 * en * q
        ok &= near0 | nearhalf
        near_zero_count += near0
    ok &= near_zero_count <= k
    return n[ok].tolist()


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class Witness:
    B: tuple
    m: int
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "B", tuple(sorted(int(b) for b in self.B)))
        object.__setattr__(self, "delta", Fraction(self.delta))


def verify_witness(S, w: Witness) -> dict:
    """Plain set arithmetic: |B| > delta m, B ∩ (B+S) empty, B+S and B+S+S inside [1, m]."""
    s = set(S)
    b = set(w.B)
    interval = set(range(1, w.m + 1))
    b_s = {x + y for x in b for y in s}
    b_ss = {x + y for x in b_s for y in s}
    checks = {
        "inside": b <= interval,
        "size": len(b) > w.delta * w.m,
        "disjoint": not (b & b_s),
        "shift_inside": b_s <= interval,
        "double_shift_inside": b_ss <= interval,
    }
    checks["ok"] = all(checks.values())
    return checks


@dataclass
class WitnessResult:
    witness: Witness | None
    best_size: int
    exact: bool
    mode: str
    best_set: tuple = ()


def _candidate_range(S, m: int) -> int:
    return m - 2 * max(S) if S else m


def _mis_exact(n: int, S) -> tuple:
    """Maximum set in [1, n] with no difference in S; ties go to the lexicographically greatest."""
    mask_of = {}
    for v in range(1, n + 1):
        bits = 0
        for s in S:
            for u in (v - s, v + s):
                if 1 <= u <= n:
                    bits |= 1 << u
        mask_of[v] = bits
    memo: dict[int, tuple] = {}

    def best(cand: int) -> tuple:
        if not cand:
            return ()
        got = memo.get(cand)
        if got is not None:
            return got
        v = cand.bit_length() - 1
        take = best(cand & ~(1 << v) & ~mask_of[v]) + (v,)
        skip = best(cand & ~(1 << v))
        out = take if len(take) >= len(skip) else skip
        memo[cand] = out
        return out

    full = ((1 << (n + 1)) - 1) & ~1
    return tuple(sorted(best(full)))


def _periodic_best(n: int, S, max_period: int = 48) -> tuple:
    top = min(max_period, 4 * max(S) + 8)
    best: tuple = ()
    for period in range(2, top + 1):
        forb = {s % period for s in S} | {(-s) % period for s in S}
        if 0 in forb:
            continue
        res = _circulant_mis(period, forb)
        for shift in range(period):
            members = tuple(x for x in range(1, n + 1) if (x + shift) % period in res)
            if len(members) > len(best):
                best = members
    return best


def _circulant_mis(period: int, forb: set, budget: int = 200_000) -> set:
    nbr = [sum(1 << ((x + d) % period) for d in forb) for x in range(period)]
    best = [0, 0]
    nodes = 0

    def go(cand, chosen, size):
        nonlocal nodes
        nodes += 1
        if size > best[0]:
            best[0], best[1] = size, chosen
        if not cand or size + cand.bit_count() <= best[0] or nodes > budget:
            return
        v = cand.bit_length() - 1
        go(cand & ~(1 << v) & ~nbr[v], chosen | (1 << v), size + 1)
        go(cand & ~(1 << v), chosen, size)

    go((1 << period) - 1, 0, 0)
    return set(_bits(best[1]))


def _greedy_first_fit(n: int, S) -> tuple:
    chosen: set = set()
    for x in range(1, n + 1):
        if all((x - s) not in chosen for s in S):
            chosen.add(x)
    return tuple(sorted(chosen))


def witness_search(S, m: int, delta, mode: str = "auto") -> WitnessResult:
    """Largest B in [1, m] with B ∩ (B+S) empty and B+S+S inside [1, m].

    Exact (memoised branching) for m <= 60, otherwise the better of a
    first-fit greedy and the best periodic pattern tiled across the range.
    """
    S = sorted({int(s) for s in S})
    if any(s < 1 for s in S):
        raise ValueError("S must consist of positive integers")
    delta = Fraction(delta)
    if mode == "auto":
        mode = "exact" if m <= EXACT_WITNESS_M else "greedy"
    n = _candidate_range(S, m)
    if n < 1:
        return WitnessResult(None, 0, mode == "exact", mode)
    if not S:
        best = tuple(range(1, m + 1))
    elif mode == "exact":
        best = _mis_exact(n, S)
    else:
        best = max((_greedy_first_fit(n, S), _periodic_best(n, S)), key=len)
    w = Witness(best, m, delta) if len(best) > delta * m else None
    if w is not None and not verify_witness(S, w)["ok"]:
        raise AssertionError("witness search produced an invalid witness")
    return WitnessResult(w, len(best), mode == "exact", mode, best)


def scale_witness(S, m_divisor: int) -> list[int]:
    """S/m = {n : m n in S}."""
    if m_divisor < 1:
        raise ValueError("divisor must be positive")
    return sorted({s // m_divisor for s in S if s % m_divisor == 0})


@dataclass
class ConcatResult:
    witness: Witness | None
    S: tuple
    target: Fraction
    size: int
    seed_size: int
    repaired_size: int
    l: int


def concat_witness(S1, w1: Witness, S2, w2: Witness, l: int) -> ConcatResult:
    """Search for (C, l m) witnessing 2 delta eta non-intersectivity of S1 ∪ m S2 with A ⊆ C.

    Seed: copies of A in the blocks indexed by B2 (tiled with period m2),
    then delete violators outside A, then add any integer that still fits.
    """
    if l < 2:
        raise ValueError("l must be at least 2")
    if not verify_witness(S1, w1)["ok"]:
        raise ValueError("w1 does not witness S1")
    m, A = w1.m, set(w1.B)
    S = tuple(sorted(set(int(s) for s in S1) | {m * int(s) for s in S2}))
    M = l * m
    delta2 = 2 * w1.delta * w2.delta
    target = delta2 * M
    B2 = set(w2.B)
    seed = set(A)
    for t in range(1, l + 1):
        if not S2 or ((t - 1) % w2.m) + 1 in B2:
            seed.update(a + (t - 1) * m for a in A)
    smax = max(S) if S else 0

    def fits(x, chosen):
        if x < 1 or x + 2 * smax > M:
            return False
        return all((x - s) not in chosen and (x + s) not in chosen for s in S)

    chosen = set(a for a in A if a + 2 * smax <= M)
    if len(chosen) < len(A):
        return ConcatResult(None, S, target, 0, len(seed), 0, l)
    for x in sorted(seed - A):
        if fits(x, chosen):
            chosen.add(x)
    repaired = len(chosen)
    for x in range(1, M + 1):
        if x not in chosen and fits(x, chosen):
            chosen.add(x)
    w = Witness(tuple(chosen), M, delta2)
    ok = len(chosen) > target and verify_witness(S, w)["ok"]
    return ConcatResult(w if ok else None, S, target, len(chosen), len(seed), repaired, l)


# ---------------------------------------------------------------------------
# chromatic intersectivity on a window


@dataclass
class IntersectivityVerdict:
    verdict: str
    certified: bool
    k: int
    window: tuple
    vertices: int
    chi_lower: int
    chi_upper: int
    exact: bool
    reason: str


def chromatic_intersectivity_certificate(
    family: SetFamily, S, k: int, window: tuple, node_budget: int = 200_000, time_limit: float = 30.0
) -> IntersectivityVerdict:
    lo, hi = window
    verts = [int(v) for v in family.members(hi) if v >= lo]
    if len(verts) > VERTEX_LIMIT:
        raise ValueError(f"|E ∩ window| = {len(verts)} exceeds {VERTEX_LIMIT}")
    g = CayleyGraph(verts, frozenset(S))
    res = chromatic_number(g, node_budget, time_limit)
    cert = res.lower > k
    verdict = "certified k-chromatically E-intersective" if cert else "inconclusive on window"
    return IntersectivityVerdict(
        verdict, cert, k, (lo, hi), len(verts), res.lower, res.upper, res.exact, res.lower_reason
    )


# ---------------------------------------------------------------------------
# iterative assembly


@dataclass
class AssemblyResult:
    S: tuple
    C: tuple
    m: int
    rounds_completed: int
    transcript: list[dict] = field(default_factory=list)
    history: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.get("verified", False) for e in self.transcript)


def seed_round(delta: Fraction) -> tuple[tuple, tuple, int]:
    """S = {1}, C = odd numbers below 2j + 1, m = 2j + 1, with j minimal so that j / (2j + 1) > delta."""
    j = 1
    while Fraction(j, 2 * j + 1) <= delta:
        j += 1
    return (1,), tuple(range(1, 2 * j, 2)), 2 * j + 1


def _in_difference_set(family: SetFamily, S, window_hi: int) -> bool:
    e = Window.from_mask(family.mask(window_hi), 1, window_hi)
    return all(s <= window_hi - 1 and representation_count(e, s) >= 1 for s in S)


def check_conditions(family, S, C, m, delta, k, window_hi, node_budget=200_000, time_limit=30.0) -> dict:
    """Conditions (i)-(iii) for one round, each recomputed from scratch."""
    delta = Fraction(delta)
    S, C = sorted(S), sorted(C)
    chrom = chromatic_intersectivity_certificate(family, S, k, (1, window_hi), node_budget, time_limit)
    in_diff = _in_difference_set(family, S, window_hi + max(S))
    cs = {c + s for c in C for s in S}
    css = {x + s for x in cs for s in S}
    inside = all(1 <= c <= m for c in C)
    cond_ii = inside and all(1 <= x <= m for x in cs | css) and len(C) > delta * m
    if len(C) >= 2:
        cw = Window.from_members(C, 1, m)
        diffs = difference_set(cw, cw, m - 1).window
        cond_iii = not any(s in diffs for s in S)
    else:
        cond_iii = True
    return {
        "i": bool(chrom.certified and in_diff),
        "i_chi_lower": chrom.chi_lower,
        "i_chi_upper": chrom.chi_upper,
        "i_window": [1, window_hi],
        "i_in_E_minus_E": in_diff,
        "ii": bool(cond_ii),
        "ii_density": f"{len(C)}/{m}",
        "iii": bool(cond_iii),
    }


def _htilde_candidates(k_needed: int, n_max: int = 40):
    """Finite pieces of H-tilde sets whose Hamming-ball radius matches the colour target."""
    half = math.ceil(k_needed / 2)
    radius = 2 * half + 1
    d = 2 * half + 2
    for q in (11, 13, 17):
        alpha = RationalTorusPoint(tuple(Fraction(pow(3, i, q), q) for i in range(d)))
        for eps in (Fraction(1, 5), Fraction(1, 8)):
            members = htilde(alpha, radius, eps, (1, n_max))
            if members:
                yield {"source": "htilde", "d": d, "q": q, "epsilon": str(eps)}, tuple(members)


def _small_candidates(k_needed: int, max_sum: int = 31):
    if k_needed <= 2:
        for total in range(3, max_sum + 1, 2):
            for a in range(1, (total + 1) // 2):
                b = total - a
                if a < b and math.gcd(a, b) == 1:
                    yield {"source": "pair"}, (a, b)
    else:
        for c in range(3, 16):
            for a, b in combinations(range(1, c), 2):
                if math.gcd(math.gcd(a, b), c) == 1:
                    yield {"source": "triple"}, (a, b, c)


def assemble_separation(
    family: SetFamily,
    delta,
    rounds: int,
    window_hi: int = 512,
    max_m: int = 20_000,
    time_limit: float = 120.0,
) -> AssemblyResult:
    """Grow (S_k, C_k, m_k) round by round, machine-checking (i)-(iii) each time."""
    delta = Fraction(delta)
    if not 0 < delta < Fraction(1, 2):
        raise ValueError("delta must lie in (0, 1/2)")
    if not 1 <= rounds <= 3:
        raise ValueError("rounds must lie in [1, 3]")
    deadline = time.monotonic() + time_limit
    S, C, m = seed_round(delta)
    transcript = []
    cond = check_conditions(family, S, C, m, delta, 1, window_hi)
    transcript.append(
        {"round": 1, "lemma": "seed", "parameters": {"S": list(S), "C": list(C), "m": m},
         "conditions": cond, "verified": cond["i"] and cond["ii"] and cond["iii"]}
    )
    history = [{"k": 1, "S": list(S), "C": list(C), "m": m, "window_hi": window_hi}]
    result = AssemblyResult(S, C, m, 1, transcript, list(history))
    if not transcript[-1]["verified"]:
        return result
    for k in range(1, rounds):
        step = _extend(family, delta, S, C, m, k, window_hi, max_m, deadline, transcript)
        if step is None:
            return result
        S, C, m = step
        win = _window_for(S, window_hi)
        cond = check_conditions(family, S, C, m, delta, k + 1, win)
        ok = cond["i"] and cond["ii"] and cond["iii"]
        transcript.append(
            {"round": k + 1, "lemma": "conditions", "parameters": {"S": list(S), "m": m, "C_size": len(C)},
             "conditions": cond, "verified": ok}
        )
        if not ok:
            return result
        history.append({"k": k + 1, "S": list(S), "C": list(C), "m": m, "window_hi": win})
        result = AssemblyResult(S, C, m, k + 1, transcript, list(history))
    return result


def _window_for(S, base: int) -> int:
    return max(base, 8 * max(S))


def _extend(family, delta, S, C, m, k, window_hi, max_m, deadline, transcript):
    delta_k = (Fraction(len(C), m) + delta) / 2
    eta_min = delta / (2 * delta_k)
    tried = []
    sources = list(_htilde_candidates(k + 1)) + list(_small_candidates(k + 1))
    for info, s_prime in sources:
        if time.monotonic() > deadline:
            break
        scaled = tuple(m * s for s in s_prime)
        win = _window_for(scaled, window_hi)
        verts = int(family.mask(win).sum())
        if verts > VERTEX_LIMIT:
            continue
        chrom = chromatic_intersectivity_certificate(family, scaled, k + 1, (1, win), 50_000, 5.0)
        if not chrom.certified:
            tried.append({**info, "S_prime": list(s_prime)[:12], "failed": "chromatic"})
            continue
        if not _in_difference_set(family, scaled, win + max(scaled)):
            tried.append({**info, "S_prime": list(s_prime)[:12], "failed": "E-E"})
            continue
        wit = None
        for m2 in (60, 240, 960):
            res = witness_search(s_prime, m2, eta_min)
            if res.witness is not None:
                rho = Fraction(res.best_size, m2)
                wit = Witness(res.best_set, m2, (eta_min + rho) / 2)
                break
        if wit is None:
            tried.append({**info, "S_prime": list(s_prime)[:12], "failed": "non-intersectivity witness"})
            continue
        transcript.append(
            {"round": k + 1, "lemma": "chromatic and non-intersective piece",
             "parameters": {**info, "S_prime": list(s_prime), "chi_lower": chrom.chi_lower,
                            "eta": str(wit.delta), "witness_m": wit.m, "witness_size": len(wit.B),
                            "rejected_before": len(tried)},
             "verified": verify_witness(s_prime, wit)["ok"] and chrom.certified}
        )
        w1 = Witness(C, m, delta_k)
        l = max(2, 2 * max(s_prime) + 1)
        while l * m <= max_m and time.monotonic() <= deadline:
            cat = concat_witness(S, w1, s_prime, wit, l)
            if cat.witness is not None:
                transcript.append(
                    {"round": k + 1, "lemma": "concatenation",
                     "parameters": {"l": l, "m": l * m, "size": cat.size, "target": str(cat.target),
                                    "delta_k": str(delta_k)},
                     "verified": verify_witness(cat.S, cat.witness)["ok"]}
                )
                return cat.S, cat.witness.B, l * m
            l *= 2
        tried.append({**info, "S_prime": list(s_prime)[:12], "failed": "concatenation"})
    transcript.append(
        {"round": k + 1, "lemma": "chromatic and non-intersective piece",
         "parameters": {"eta_min": str(eta_min), "tried": tried[-20:], "attempts": len(tried)},
         "verified": False}
    )
    return None
