"""Named infinite sets of positive integers and their counting profiles.

A :class:`SetFamily` answers membership for single integers and produces
boolean masks / sorted member arrays up to a limit. The two routes are
written independently, so they can check each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ntheory import (
    MAX_WIDTH,
    RangeError,
    check_width,
    factorize,
    is_prime,
    prime_mask,
    smallest_factor_sieve,
    tenth_root_ceil,
    tenth_root_ceil_array,
)

KINDS = (
    "naturals",
    "primes",
    "chen",
    "chen-strict",
    "bounded-gap",
    "poly",
    "digit-balanced",
    "sos",
    "explicit",
)

DEFAULT_CELL_BUDGET = 600_000_000


class DomainError(ValueError):
    pass


class BudgetError(MemoryError):
    def __init__(self, requested: int, feasible: int):
        super().__init__(
            f"window of {requested} cells exceeds the budget; largest feasible x_max is {feasible}"
        )
        self.requested = requested
        self.feasible = feasible


@dataclass(frozen=True)
class SetFamily:
    """A named subset of the positive integers.

    ``params`` holds the polynomial coefficients (highest degree first) for
    ``poly``, ``(h,)`` for ``bounded-gap`` and the member tuple for ``explicit``.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "poly":
            coeffs = tuple(int(c) for c in self.params)
            while coeffs and coeffs[0] == 0:
                coeffs = coeffs[1:]
            if len(coeffs) < 2 or coeffs[0] <= 0:
                raise ValueError("polynomial needs degree >= 1 and a positive leading coefficient")
            object.__setattr__(self, "params", coeffs)
        elif self.kind == "bounded-gap":
            if len(self.params) != 1 or int(self.params[0]) < 1:
                raise ValueError("bounded-gap needs one positive gap h")
        elif self.kind == "explicit":
            vals = tuple(int(v) for v in self.params)
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError("explicit family must be sorted and deduplicated")
            if vals and vals[0] < 1:
                raise ValueError("explicit family members must be positive")
            object.__setattr__(self, "params", vals)

    # -- naming -----------------------------------------------------------
    @property
    def name(self) -> str:
        if self.kind == "poly":
            return "poly:" + ",".join(map(str, self.params))
        if self.kind == "bounded-gap":
            return f"bounded-gap:{self.params[0]}"
        if self.kind == "explicit":
            return "explicit:" + ",".join(map(str, self.params))
        return self.kind

    # -- scalar membership --------------------------------------------------
    def contains(self, n: int) -> bool:
        n = int(n)
        if n < 1:
            raise DomainError("membership is defined for n >= 1")
        check_width(n)
        k = self.kind
        if k == "naturals":
            return True
        if k == "primes":
            return is_prime(n)
        if k == "chen":
            return is_prime(n) and is_chen(n, strict=False)
        if k == "chen-strict":
            return is_prime(n) and is_chen(n, strict=True)
        if k == "bounded-gap":
            return is_prime(n) and is_prime(n + int(self.params[0]))
        if k == "poly":
            return _poly_hits(self.params, n)
        if k == "digit-balanced":
            bl = n.bit_length()
            return bl % 2 == 0 and bin(n).count("1") == bl // 2
        if k == "sos":
            return any(math.isqrt(n - a * a) ** 2 == n - a * a for a in range(math.isqrt(n) + 1))
        return _bisect_contains(self.params, n)

    # -- bulk ---------------------------------------------------------------
    def mask(self, limit: int) -> np.ndarray:
        """Boolean array of length ``limit + 1``; index n is true iff n is a member."""
        limit = int(limit)
        if limit < 1:
            return np.zeros(max(limit + 1, 1), dtype=bool)
        k = self.kind
        if k == "naturals":
            out = np.ones(limit + 1, dtype=bool)
            out[0] = False
            return out
        if k == "primes":
            return prime_mask(limit)
        if k in ("chen", "chen-strict"):
            return _chen_mask(limit, strict=(k == "chen-strict"))
        if k == "bounded-gap":
            h = int(self.params[0])
            pm = prime_mask(limit + h)
            out = pm[: limit + 1].copy()
            out &= pm[h : limit + h + 1]
            return out
        out = np.zeros(limit + 1, dtype=bool)
        if k == "poly":
            out[_poly_values(self.params, limit)] = True
        elif k == "digit-balanced":
            _digit_balanced_fill(out)
        elif k == "sos":
            for a in range(math.isqrt(limit) + 1):
                b = np.arange(a, math.isqrt(limit - a * a) + 1, dtype=np.int64)
                out[a * a + b * b] = True
            out[0] = False
        else:
            vals = np.array([v for v in self.params if v <= limit], dtype=np.int64)
            out[vals] = True
        return out

    def members(self, limit: int) -> np.ndarray:
        return np.flatnonzero(self.mask(limit)).astype(np.int64)


def parse_family(spec: str) -> SetFamily:
    """Parse canonical names such as ``primes``, ``chen-strict``, ``poly:1,0,0``."""
    spec = spec.strip()
    head, _, tail = spec.partition(":")
    head = head.lower()
    aliases = {
        "prime": "primes",
        "chen-primes": "chen",
        "sums-of-two-squares": "sos",
        "digits": "digit-balanced",
        "n": "naturals",
        "nat": "naturals",
    }
    if head == "squares":
        return SetFamily("poly", (1, 0, 0))
    if head == "twin":
        return SetFamily("bounded-gap", (2,))
    head = aliases.get(head, head)
    if head in ("poly", "bounded-gap", "explicit"):
        if not tail:
            raise ValueError(f"family {head!r} needs parameters after ':'")
        return SetFamily(head, tuple(int(t) for t in tail.split(",") if t.strip()))
    return SetFamily(head)


# ---------------------------------------------------------------------------
# Chen primes


def is_chen(p: int, strict: bool = False) -> bool:
    """Whether the prime p has p+2 prime or a product of two primes.

    The strict variant additionally needs both factors of a semiprime p+2
    to be at least p**(1/10), compared exactly as ``q**10 >= p``.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    fac = factorize(p + 2)
    if len(fac) == 1:
        return True
    if len(fac) != 2:
        return False
    return (not strict) or fac[0] >= tenth_root_ceil(p)


def _chen_mask(limit: int, strict: bool) -> np.ndarray:
    top = limit + 2
    pm = prime_mask(top)
    spf = smallest_factor_sieve(top)
    n = np.arange(limit + 1, dtype=np.int64)
    n2 = n + 2
    q = spf[n2]
    cof = np.where(q > 0, n2 // np.maximum(q, 1), 0)
    semi = (q > 0) & pm[cof]
    if strict:
        semi &= q >= tenth_root_ceil_array(n)
    out = pm[: limit + 1] & (pm[n2] | semi)
    return out


# ---------------------------------------------------------------------------
# polynomial images


def _eval(coeffs, x: int) -> int:
    v = 0
    for c in coeffs:
        v = v * x + c
    return v


def _monotone_start(coeffs) -> int:
    """An integer x0 >= 0 beyond which P is strictly increasing."""
    deg = len(coeffs) - 1
    deriv = [c * (deg - i) for i, c in enumerate(coeffs[:-1])]
    if len(deriv) == 1:
        return 0
    lead = deriv[0]
    bound = 1 + max(abs(Fraction(c, lead)) for c in deriv[1:])
    return math.ceil(bound) + 1


def _poly_values(coeffs, limit: int) -> np.ndarray:
    x0 = _monotone_start(coeffs)
    vals = set()
    for x in range(x0):
        v = _eval(coeffs, x)
        if 1 <= v <= limit:
            vals.add(v)
    x = x0
    while True:
        v = _eval(coeffs, x)
        if v > limit:
            break
        if v >= 1:
            vals.add(v)
        x += 1
    return np.array(sorted(vals), dtype=np.int64)


def _poly_hits(coeffs, n: int) -> bool:
    x0 = _monotone_start(coeffs)
    if any(_eval(coeffs, x) == n for x in range(x0)):
        return True
    lo, hi = x0, max(x0, 1)
    while _eval(coeffs, hi) < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if _eval(coeffs, mid) < n:
            lo = mid + 1
        else:
            hi = mid
    return _eval(coeffs, lo) == n


# ---------------------------------------------------------------------------
# digit-balanced set


def _digit_balanced_fill(out: np.ndarray, chunk: int = 1 << 22) -> None:
    limit = len(out) - 1
    length = 2
    while (1 << (length - 1)) <= limit:
        lo = 1 << (length - 1)
        hi = min((1 << length) - 1, limit)
        for start in range(lo, hi + 1, chunk):
            stop = min(start + chunk, hi + 1)
            block = np.arange(start, stop, dtype=np.uint64)
            out[start:stop] = np.bitwise_count(block) == length // 2
        length += 2


def digit_balanced_count(n_max: int) -> int:
    """|E ∩ [1, n_max]| for the set of integers with equally many 0 and 1 bits."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    return int(SetFamily("digit-balanced").mask(n_max).sum())


def _bisect_contains(vals: tuple, n: int) -> bool:
    import bisect

    i = bisect.bisect_left(vals, n)
    return i < len(vals) and vals[i] == n


# ---------------------------------------------------------------------------
# counting profiles


@dataclass
class CountingProfile:
    x_values: list[int]
    E_of_x: list[int]
    E_m_of_x: dict[int, list[int]] = field(default_factory=dict)
    c_m_estimates: dict[int, Fraction] = field(default_factory=dict)


def count_profile(
    family: SetFamily,
    x_max: int,
    shifts,
    x_values=None,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> CountingProfile:
    """Exact E(x) and E_m(x) = |{n in E ∩ [1,x] : n+m in E}| by full enumeration."""
    if x_max < 2:
        raise ValueError("x_max must be at least 2")
    shifts = [int(m) for m in shifts]
    if any(m < 1 for m in shifts):
        raise ValueError("shifts must be positive")
    reach = x_max + (max(shifts) if shifts else 0)
    if reach + 1 > cell_budget:
        raise BudgetError(reach + 1, cell_budget - 1 - (max(shifts) if shifts else 0))
    xs = sorted(set(int(x) for x in (x_values or [x_max]) if 1 <= x <= x_max))
    if xs[-1] != x_max:
        xs.append(x_max)
    mask = family.mask(reach)
    cum = np.cumsum(mask[: x_max + 1])
    E = [int(cum[x]) for x in xs]
    prof = CountingProfile(xs, E)
    for m in shifts:
        pair = mask[: x_max + 1] & mask[m : x_max + m + 1]
        pc = np.cumsum(pair)
        prof.E_m_of_x[m] = [int(pc[x]) for x in xs]
        prof.c_m_estimates[m] = Fraction(prof.E_m_of_x[m][-1], E[-1]) if E[-1] else Fraction(0)
    return prof


__all__ = [
    "BudgetError",
    "CountingProfile",
    "DomainError",
    "MAX_WIDTH",
    "RangeError",
    "SetFamily",
    "count_profile",
    "digit_balanced_count",
    "is_chen",
    "parse_family",
]
