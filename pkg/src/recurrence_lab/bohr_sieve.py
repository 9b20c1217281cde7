"""Residue-class sieves bounding the Haar measure of a set's Bohr closure.

Each :class:`BlockedModulus` names residue classes mod c that the family
never visits (apart from a finite exception list, which is null). For
pairwise coprime moduli the closure has measure at most
prod(1 - |blocked_i| / c_i).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .ntheory import is_prime, is_square, legendre, primes_upto

VALIDATION_LIMIT = 10**6


class DomainError(ValueError):
    pass


@dataclass
class BlockedModulus:
    c: int
    blocked: frozenset
    provenance: str
    exceptions: tuple = ()
    checked_members: int = 0

    def __post_init__(self):
        if self.c < 2:
            raise ValueError("modulus must be at least 2")
        self.blocked = frozenset(int(r) % self.c for r in self.blocked)
        if len(self.blocked) >= self.c:
            raise ValueError("cannot block every residue class")

    @property
    def factor(self) -> Fraction:
        return 1 - Fraction(len(self.blocked), self.c)


def validate_blocked(bm: BlockedModulus, members: np.ndarray) -> BlockedModulus:
    """Raise unless every member in a blocked class is a listed exception."""
    members = np.asarray(members, dtype=np.int64)
    res = members % bm.c
    hit = members[np.isin(res, np.fromiter(bm.blocked, dtype=np.int64))]
    stray = sorted(set(hit.tolist()) - set(bm.exceptions))
    if stray:
        raise AssertionError(f"modulus {bm.c}: member {stray[0]} lies in a blocked class")
    bm.checked_members = int(members.size)
    return bm


# ---------------------------------------------------------------------------
# polynomial and form helpers


def poly_root_count(coeffs, p: int) -> int:
    """Number of x mod p with P(x) = 0, coefficients highest degree first."""
    if p > 10**6:
        raise ValueError("p must be at most 10**6")
    x = np.arange(p, dtype=np.int64)
    v = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        v = (v * x + c) % p
    return int(np.count_nonzero(v == 0))


def blocked_for_quadratic_form(a: int, b: int, c: int, q: int) -> BlockedModulus | None:
    """Block the nonzero multiples of q mod q^2 when D = b^2 - 4ac is a non-residue mod q.

    Uses 4a(ax^2 + bxy + cy^2) = (2ax + by)^2 - D y^2: if q divides a value,
    q divides both 2ax + by and y, so q^2 divides the value.
    """
    disc = b * b - 4 * a * c
    if is_square(disc):
        raise DomainError(f"discriminant {disc} is a perfect square")
    if q == 2 or not is_prime(q):
        raise ValueError("q must be an odd prime")
    if (4 * a * disc) % q == 0:
        raise ValueError(f"q = {q} divides 4aD = {4 * a * disc}")
    if legendre(disc, q) != -1:
        return None
    return BlockedModulus(
        q * q,
        frozenset(j * q for j in range(1, q)),
        f"non-residue: D={disc} mod {q}; auxiliary form z^2 - ({disc}) t^2 after scaling by 4a={4 * a}",
    )


@dataclass
class InertEvidence:
    q: int
    passed: bool
    multiples_seen: int
    weak: bool


def empirical_inert_test(values, q: int) -> InertEvidence:
    """Every value divisible by q is divisible by q^2, on the supplied sample."""
    vals = np.asarray(values.members() if hasattr(values, "members") else list(values), dtype=np.int64)
    if vals.size == 0:
        raise ValueError("values must be nonempty")
    vals = vals[vals != 0]
    mult = vals[vals % q == 0]
    passed = bool(np.all(mult % (q * q) == 0))
    return InertEvidence(q, passed, int(mult.size), int(mult.size) == 0)


def cubic_norm_values(radius: int = 30) -> np.ndarray:
    """Values of x^3 + 2y^3 + 4z^3 - 6xyz over the box |x|, |y|, |z| <= radius."""
    r = np.arange(-radius, radius + 1, dtype=np.int64)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    v = x**3 + 2 * y**3 + 4 * z**3 - 6 * x * y * z
    return np.unique(v.ravel())


def quadratic_form_values(a: int, b: int, c: int, limit: int) -> tuple[np.ndarray, bool]:
    """Positive values <= limit. Exhaustive for definite forms, a box sample otherwise."""
    disc = b * b - 4 * a * c
    definite = disc < 0 and a > 0
    if definite:
        xb = math.isqrt(4 * c * limit // -disc) + 1
        yb = math.isqrt(4 * a * limit // -disc) + 1
    else:
        xb = yb = math.isqrt(limit) + 1
    out = []
    ys = np.arange(-yb, yb + 1, dtype=np.int64)
    for x in range(-xb, xb + 1):
        v = a * x * x + b * x * ys + c * ys * ys
        out.append(v[(v >= 1) & (v <= limit)])
    return np.unique(np.concatenate(out)), definite


# ---------------------------------------------------------------------------
# the bound


def haar_upper_bound(blocked_list) -> Fraction:
    for x, y in combinations(blocked_list, 2):
        if math.gcd(x.c, y.c) != 1:
            raise ValueError(f"moduli {x.c} and {y.c} are not coprime")
    out = Fraction(1)
    for bm in blocked_list:
        out *= bm.factor
    return out


@dataclass(frozen=True)
class FormFamily:
    """A value set given by a form: ``qform`` (a, b, c) or the cubic norm form."""

    kind: str
    params: tuple = ()

    @property
    def name(self) -> str:
        if self.kind == "qform":
            return "qform:" + ",".join(map(str, self.params))
        return self.kind


def parse_bohr_family(text: str):
    head, _, tail = text.partition(":")
    if head == "qform":
        return FormFamily("qform", tuple(int(t) for t in tail.split(",")))
    if head in ("cubic-norm", "norm3"):
        return FormFamily("cubic-norm")
    from .generators import parse_family

    return parse_family(text)


@dataclass
class BohrReport:
    family: str
    moduli: list[BlockedModulus]
    bound_trail: list[Fraction]
    final_bound: Fraction
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "moduli": [
                {
                    "c": bm.c,
                    "blocked_count": len(bm.blocked),
                    "provenance": bm.provenance,
                    "exceptions": list(bm.exceptions),
                    "checked_members": bm.checked_members,
                }
                for bm in self.moduli
            ],
            "bound_trail": [f"{f.numerator}/{f.denominator}" for f in self.bound_trail],
            "final_bound": f"{self.final_bound.numerator}/{self.final_bound.denominator}",
            "notes": self.notes,
        }


def _family_moduli(family, prime_bound: int):
    notes: list[str] = []
    if isinstance(family, FormFamily) and family.kind == "qform":
        a, b, c = family.params
        members, definite = quadratic_form_values(a, b, c, VALIDATION_LIMIT)
        if not definite:
            notes.append("indefinite form: validation uses a box sample of values")
        disc = b * b - 4 * a * c
        mods = []
        for q in primes_upto(prime_bound):
            q = int(q)
            if q == 2 or (4 * a * disc) % q == 0:
                continue
            bm = blocked_for_quadratic_form(a, b, c, q)
            if bm is not None:
                mods.append(bm)
        return mods, members, notes
    if isinstance(family, FormFamily):
        members = cubic_norm_values()
        mods = []
        for q in primes_upto(prime_bound):
            q = int(q)
            ev = empirical_inert_test(members, q)
            if ev.passed and not ev.weak:
                mods.append(
                    BlockedModulus(
                        q * q, frozenset(j * q for j in range(1, q)),
                        f"empirical: {ev.multiples_seen} multiples of {q} in the sample, all divisible by {q * q}",
                    )
                )
            elif ev.weak:
                notes.append(f"q={q}: no multiples in the sample, skipped")
        return mods, members, notes
    if family.kind == "primes":
        members = family.members(VALIDATION_LIMIT)
        mods = [
            BlockedModulus(int(p), frozenset({0}), "only p itself is a prime multiple of p", (int(p),))
            for p in primes_upto(prime_bound)
        ]
        return mods, members, notes
    if family.kind == "poly":
        members = family.members(VALIDATION_LIMIT)
        mods = [
            BlockedModulus(int(q), frozenset({0}), f"P has no root mod {int(q)}")
            for q in primes_upto(prime_bound)
            if poly_root_count(family.params, int(q)) == 0
        ]
        return mods, members, notes
    if family.kind == "sos":
        return _family_moduli(FormFamily("qform", (1, 0, 1)), prime_bound)
    raise ValueError(f"no residue sieve for family {family.name}")


def pipeline(family, prime_bound: int) -> BohrReport:
    mods, members, notes = _family_moduli(family, prime_bound)
    trail = []
    bound = Fraction(1)
    for bm in mods:
        validate_blocked(bm, members)
        bound *= bm.factor
        trail.append(bound)
    final = haar_upper_bound(mods)
    if final != bound:
        raise AssertionError("trail and direct product disagree")
    return BohrReport(family.name, mods, trail, final, notes)
