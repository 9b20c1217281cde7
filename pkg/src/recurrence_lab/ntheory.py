"""Small exact number-theory kernels shared by the other modules.

Everything here is deterministic. Sieves return numpy arrays; scalar
routines work on Python ints.
"""
from __future__ import annotations

import math
from functools import reduce

import numpy as np

MAX_WIDTH = 2**64
TRIAL_LIMIT = 10**6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class RangeError(ValueError):
    """Input outside the supported integer width."""


def check_width(n: int) -> None:
    if n >= MAX_WIDTH:
        raise RangeError(f"{n} exceeds the supported width 2**64")


def prime_mask(limit: int) -> np.ndarray:
    """Boolean array ``m`` of length ``limit + 1`` with ``m[n]`` true iff n is prime."""
    limit = max(int(limit), 1)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    mask[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if mask[p]:
            mask[p * p :: 2 * p] = False
    return mask


def primes_upto(limit: int) -> np.ndarray:
    return np.flatnonzero(prime_mask(limit)).astype(np.int64)


def smallest_factor_sieve(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n for composite n, 0 for primes, 0/1 unused.

    Only primes up to sqrt(limit) are touched, so the loop is short.
    """
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_upto(math.isqrt(limit)):
        p = int(p)
        idx = np.arange(p * p, limit + 1, p)
        free = spf[idx] == 0
        spf[idx[free]] = p
    return spf


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def factorize(n: int) -> list[int]:
    """Prime factors of n with multiplicity, ascending."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: list[int] = []
    for p in (2, 3, 5):
        while n % p == 0:
            out.append(p)
            n //= p
    f, step = 7, (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f <= TRIAL_LIMIT:
        while n % f == 0:
            out.append(f)
            n //= f
        f += step[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out.append(m)
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return sorted(out)


def tenth_root_ceil(n: int) -> int:
    """Smallest integer q >= 1 with q**10 >= n (exact)."""
    q = max(1, int(round(n ** 0.1)))
    while q**10 < n:
        q += 1
    while q > 1 and (q - 1) ** 10 >= n:
        q -= 1
    return q


_TENTH_POWERS = np.array([q**10 for q in range(79)], dtype=np.int64)


def tenth_root_ceil_array(values: np.ndarray) -> np.ndarray:
    """Vectorised :func:`tenth_root_ceil` for nonnegative values below 2**63."""
    out = np.searchsorted(_TENTH_POWERS, values, side="left").astype(np.int64)
    return np.maximum(out, 1)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def primorial_upto(w: int) -> int:
    return reduce(lambda a, b: a * b, (int(p) for p in primes_upto(w)), 1)


def totient(n: int) -> int:
    result = n
    for p in set(factorize(n)) if n > 1 else ():
        result -= result // p
    return result
