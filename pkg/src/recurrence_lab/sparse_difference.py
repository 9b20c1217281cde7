"""Dense subsets of a sparse set whose difference set avoids a thick set.

Given E, an increasing f and a thick set R = union of I_k = [g(k)-k, g(k)],
:func:`build_sparse_difference` constructs

    C = {s in E : (s + I_k) ∩ E = ∅ for every k with g(k) <= f(s)},
    B = (C + R) ∩ E,
    A = C \\ B,

on a finite window and re-checks (A - A) ∩ R = ∅ by brute force.
The diagnostics at the bottom probe the counting hypotheses on E_m(x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .generators import SetFamily, count_profile
from .windows import Window, banach_profile, representation_count, syndeticity_gap


class GrowthTooSlow(ValueError):
    def __init__(self, inequality: str, detail: str):
        super().__init__(f"growth-too-slow: {inequality} ({detail})")
        self.inequality = inequality


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, by integer Newton iteration."""
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


@dataclass(frozen=True)
class GrowthFn:
    """A strictly increasing integer function evaluated exactly.

    kinds: ``power`` (params = (p, q), f(x) = x**(p/q)), ``exp`` (base**x),
    ``tower`` (x passed through ``levels`` rounds of 2**·), ``table``
    (explicit values f(1), f(2), ...; undefined past the table).
    """

    kind: str
    params: tuple

    @classmethod
    def power(cls, exponent) -> "GrowthFn":
        e = Fraction(exponent)
        if e <= 0:
            raise ValueError("exponent must be positive")
        return cls("power", (e.numerator, e.denominator))

    @classmethod
    def exponential(cls, base: int) -> "GrowthFn":
        if base < 2:
            raise ValueError("base must be at least 2")
        return cls("exp", (int(base),))

    @classmethod
    def tower(cls, levels: int) -> "GrowthFn":
        return cls("tower", (int(levels),))

    @classmethod
    def table(cls, values) -> "GrowthFn":
        vals = tuple(int(v) for v in values)
        if not vals or any(b <= a for a, b in zip(vals, vals[1:])) or vals[0] < 1:
            raise ValueError("table values must be positive and strictly increasing")
        return cls("table", vals)

    @property
    def name(self) -> str:
        if self.kind == "power":
            p, q = self.params
            return f"pow:{p}" if q == 1 else f"pow:{p}/{q}"
        if self.kind == "table":
            return "table:" + ",".join(map(str, self.params))
        return f"{self.kind}:{self.params[0]}"

    @property
    def domain_max(self) -> int | None:
        return len(self.params) if self.kind == "table" else None

    def __call__(self, x: int) -> int:
        """f(x) for integer x >= 1 (floored for fractional powers)."""
        x = int(x)
        if self.kind == "power":
            p, q = self.params
            return iroot(x**p, q)
        if self.kind == "exp":
            return self.params[0] ** x
        if self.kind == "tower":
            v = x
            for _ in range(self.params[0]):
                v = 2**v
            return v
        if not 1 <= x <= len(self.params):
            raise ValueError(f"table growth undefined at {x}")
        return self.params[x - 1]

    def reaches(self, y: int, x: int) -> bool:
        """Exact test of y <= f(x)."""
        if self.kind == "power":
            p, q = self.params
            return y <= 0 or y**q <= x**p
        if self.kind == "table" and x > len(self.params):
            return True
        return y <= self(x)

    def inverse_floor(self, y: int) -> int:
        """Largest integer x >= 0 with f(x) <= y (0 if none)."""
        if self.kind == "power":
            p, q = self.params
            return iroot(y**q, p) if y > 0 else 0
        if self.kind == "table":
            return sum(1 for v in self.params if v <= y)
        x = 0
        while self(x + 1) <= y:
            x += 1
        return x

    def first_reaching(self, y: int) -> int:
        """Smallest integer x >= 1 with f(x) >= y."""
        x = self.inverse_floor(y)
        if x >= 1 and self(x) >= y:
            return x
        return max(x + 1, 1)


def parse_growth(text: str) -> GrowthFn:
    head, _, tail = text.partition(":")
    if head in ("pow", "power"):
        return GrowthFn.power(Fraction(tail))
    if head == "exp":
        return GrowthFn.exponential(int(tail))
    if head == "tower":
        return GrowthFn.tower(int(tail))
    if head == "table":
        return GrowthFn.table(int(float(v)) for v in tail.split(","))
    raise ValueError(f"unknown growth function {text!r}")


@dataclass(frozen=True)
class ThickSpec:
    g: GrowthFn
    k_max: int

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be positive")
        if self.g.domain_max is not None and self.k_max > self.g.domain_max:
            raise ValueError("k_max runs past the growth table")

    def intervals(self) -> list[tuple[int, int]]:
        return [(self.g(k) - k, self.g(k)) for k in range(1, self.k_max + 1)]

    def check_disjoint(self) -> None:
        iv = self.intervals()
        if iv[0][0] < 1:
            raise GrowthTooSlow("g(1) - 1 >= 1", f"I_1 = {iv[0]}")
        for k in range(1, len(iv)):
            if iv[k][0] <= iv[k - 1][1]:
                raise GrowthTooSlow(
                    "g(k) - k > g(k-1)", f"I_{k} = {iv[k - 1]} meets I_{k + 1} = {iv[k]}"
                )


@dataclass
class SparseDiffResult:
    family: str
    f: str
    g: str
    window: int
    C: Window
    B: Window
    A: Window
    r_hits: int
    density_A_in_E: Fraction
    density_B_in_E: Fraction
    provisional_tail: int
    checked_levels: list[int]
    intervals: list[tuple[int, int]]

    @property
    def verification(self) -> dict:
        return {
            "r_hits": self.r_hits,
            "density_A_in_E": self.density_A_in_E,
            "density_B_in_E": self.density_B_in_E,
        }


def r_hits_bruteforce(a: Window, intervals, window_hi: int) -> int:
    """Count pairs (x, x + r) inside A with r in R; shares no code with the construction."""
    bits = a.as_int()
    hits = 0
    for lo, hi in intervals:
        for r in range(lo, min(hi, window_hi) + 1):
            hits += (bits & (bits >> r)).bit_count()
    return hits


def build_sparse_difference(
    family: SetFamily,
    f: GrowthFn,
    thick: ThickSpec,
    window_hi: int,
    shift_filter=None,
) -> SparseDiffResult:
    """Run the C / B / A construction on E ∩ [1, window_hi].

    A level k is sieved only when its first eligible s (the least s with
    f(s) >= g(k)) can see all of s + I_k with E known up to
    window_hi + g(k); members of C that skipped a level are provisional.
    ``shift_filter`` (a set of shifts) restricts which m in I_k are sieved.
    """
    thick.check_disjoint()
    iv = thick.intervals()
    if iv[0][1] > window_hi:
        raise ValueError(f"window {window_hi} is too small to hold I_1 = {iv[0]}")

    e_win = family.mask(window_hi)
    e_win[0] = False
    e_count = int(e_win.sum())
    if e_count == 0:
        raise ValueError("E has no members in the window")

    g_inv = min(thick.g.inverse_floor(window_hi), thick.k_max)
    f_inv = f.inverse_floor(window_hi)
    if g_inv * (f_inv + g_inv) > Fraction(e_count, 2):
        raise GrowthTooSlow(
            "g^-1(x) * (f^-1(x) + g^-1(x)) <= E(x)/2",
            f"x={window_hi}: {g_inv}*({f_inv}+{g_inv}) > {e_count}/2",
        )

    starts = {k: f.first_reaching(thick.g(k)) for k in range(1, thick.k_max + 1)}
    gated = [k for k in starts if thick.g(k) + starts[k] <= window_hi]
    reach = window_hi + max((thick.g(k) for k in gated), default=0)
    e_ext = family.mask(reach) if reach > window_hi else e_win
    cum = np.concatenate(([0], np.cumsum(e_ext, dtype=np.int64)))

    s_all = np.flatnonzero(e_win)
    excluded = np.zeros(len(s_all), dtype=bool)
    provisional = np.zeros(len(s_all), dtype=bool)
    for k in range(1, thick.k_max + 1):
        applies = s_all >= starts[k]
        if not applies.any():
            continue
        if k not in gated:
            provisional |= applies
            continue
        lo, hi = iv[k - 1]
        s = s_all[applies]
        if shift_filter is None:
            hit = (cum[s + hi + 1] - cum[s + lo]) > 0
        else:
            hit = np.zeros(len(s), dtype=bool)
            for m in range(lo, hi + 1):
                if m in shift_filter:
                    hit |= e_ext[s + m]
        excluded[np.flatnonzero(applies)[hit]] = True

    c = np.zeros(window_hi + 1, dtype=bool)
    c[s_all[~excluded]] = True
    cr = np.zeros(window_hi + 1, dtype=bool)
    for lo, hi in iv:
        for r in range(lo, hi + 1):
            if r > window_hi:
                break
            cr[r:] |= c[: window_hi + 1 - r]
    b = cr & e_win
    a = c & ~b

    win = lambda m: Window(1, window_hi, m[1:].copy())  # noqa: E731
    A = win(a)
    hits = r_hits_bruteforce(A, iv, window_hi)
    if hits:
        raise AssertionError(f"hard invariant violated: {hits} differences of A land in R")
    return SparseDiffResult(
        family=family.name,
        f=f.name,
        g=thick.g.name,
        window=window_hi,
        C=win(c),
        B=win(b),
        A=A,
        r_hits=hits,
        density_A_in_E=Fraction(int(a.sum()), e_count),
        density_B_in_E=Fraction(int(b.sum()), e_count),
        provisional_tail=int((provisional & ~excluded).sum()),
        checked_levels=gated,
        intervals=iv,
    )


def doubling_table(base: int, levels: int = 8) -> GrowthFn:
    """g(k) = base ** (2 ** (k - 1)); base 100 gives 100, 10**4, 10**8, ..."""
    return GrowthFn.table(base ** (2 ** (k - 1)) for k in range(1, levels + 1))


@dataclass
class TuneResult:
    thick: ThickSpec
    result: SparseDiffResult
    ladder: list[dict] = field(default_factory=list)


class TuningFailed(RuntimeError):
    def __init__(self, ladder):
        super().__init__(f"no growth found within 8 levels; tried {len(ladder)} rungs")
        self.ladder = ladder


def auto_tune_growth(
    family: SetFamily,
    f: GrowthFn,
    window_hi: int,
    target: Fraction = Fraction(9, 10),
    k_max: int = 8,
) -> TuneResult:
    """Slowest rung of the doubling ladder g_b(k) = b**(2**(k-1)), b = 2, 4, 8, ...

    A rung succeeds when the build passes and density_A_in_E >= target.
    """
    ladder = []
    base = 2
    while base <= window_hi:
        thick = ThickSpec(doubling_table(base, k_max), k_max)
        entry = {"base": base, "g1": base}
        try:
            res = build_sparse_difference(family, f, thick, window_hi)
        except (GrowthTooSlow, ValueError) as exc:
            entry.update(ok=False, error=str(exc))
            ladder.append(entry)
            base *= 2
            continue
        entry.update(ok=True, density_A=res.density_A_in_E, provisional=res.provisional_tail)
        ladder.append(entry)
        if res.density_A_in_E >= target:
            return TuneResult(thick, res, ladder)
        base *= 2
    raise TuningFailed(ladder)


# ---------------------------------------------------------------------------
# counting diagnostics


def selberg_check(x: int, m_max: int) -> dict:
    """max_{m <= m_max} E_m(x)/E(x) for the primes, against (log log x)/log x."""
    if x > 10**7:
        raise ValueError("selberg_check is desk scale: x <= 10**7")
    prof = count_profile(SetFamily("primes"), x, range(1, m_max + 1))
    ratios = prof.c_m_estimates
    argmax = max(ratios, key=lambda m: (ratios[m], -m))
    scale = math.log(math.log(x)) / math.log(x) if x > 15 else 1.0
    return {
        "x": x,
        "m_max": m_max,
        "E": prof.E_of_x[-1],
        "argmax_m": argmax,
        "max_E_m": prof.E_m_of_x[argmax][-1],
        "max_ratio": ratios[argmax],
        "fitted_C": float(ratios[argmax]) / scale,
        "note": "empirical evidence only",
    }


def digit_counterexample_battery(a_max: int, window_exp: int, banach_lengths=None) -> dict:
    """Representation counts of each a <= a_max inside the digit-balanced set."""
    if a_max < 1:
        raise ValueError("differences are positive; a_max must be >= 1")
    if not 1 <= window_exp <= 26:
        raise ValueError("window_exp must lie in [1, 26]")
    top = 1 << window_exp
    e = Window.from_mask(SetFamily("digit-balanced").mask(top), 1, top)
    size = e.cardinality
    counts = {a: representation_count(e, a) for a in range(1, a_max + 1)}
    if banach_lengths is None:
        banach_lengths = [1 << j for j in range(window_exp + 1)]
    return {
        "window_exp": window_exp,
        "size": size,
        "counts": counts,
        "c_a": {a: Fraction(c, size) if size else Fraction(0) for a, c in counts.items()},
        "all_represented": all(c >= 1 for c in counts.values()),
        "banach_profile": banach_profile(e, banach_lengths),
    }


def c_m_syndeticity_scan(family: SetFamily, eta, x: int, m_max: int) -> dict:
    """Level set {m <= m_max : E_m(x)/E(x) > eta} with its gap and density on [1, m_max]."""
    eta = Fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    prof = count_profile(family, x, range(1, m_max + 1))
    level = [m for m, c in prof.c_m_estimates.items() if c > eta]
    w = Window.from_members(level, 1, m_max)
    return {
        "family": family.name,
        "eta": eta,
        "x": x,
        "m_max": m_max,
        "level_set": level,
        "max_gap": syndeticity_gap(w),
        "density": Fraction(len(level), m_max),
    }
