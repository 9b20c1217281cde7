"""Chen weights, W-tricked weights, Gowers norms on Z_N and shifted-Chen recurrences."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .generators import DomainError, SetFamily, is_chen
from .ntheory import factorize, is_prime, primes_upto, tenth_root_ceil, totient
from .windows import Window

GOWERS_BUDGET = 10**9


def _strict_chen_mask(limit: int) -> np.ndarray:
    return SetFamily("chen-strict").mask(limit)


def theta(n: int) -> float:
    """(ln n)^2 when n is prime, n + 2 is a prime or a product of two primes,
    and every prime factor of n(n + 2) is at least n^(1/10); otherwise 0."""
    if n < 2:
        raise ValueError("theta is defined for n >= 2")
    if not is_prime(n):
        return 0.0
    fac = factorize(n + 2)
    if len(fac) > 2:
        return 0.0
    floor_root = tenth_root_ceil(n)
    if any(q < floor_root for q in fac + [n]):
        return 0.0
    return math.log(n) ** 2


def theta_array(limit: int) -> np.ndarray:
    """theta(n) for n = 0..limit (entries 0 and 1 are 0)."""
    mask = _strict_chen_mask(limit)
    out = np.zeros(limit + 1)
    idx = np.flatnonzero(mask)
    out[idx] = np.log(idx.astype(np.float64)) ** 2
    return out


@dataclass
class ChenSum:
    N: int
    total: float
    ratio: float


def chen_sum(N: int) -> ChenSum:
    if N < 1 or N > 10**7:
        raise ValueError("N must lie in [1, 10**7]")
    vals = theta_array(N)[1:]
    total = math.fsum(vals[vals > 0].tolist())
    return ChenSum(N, total, total / N)


@dataclass
class ChenWeights:
    """theta_{W,b}(n) = (phi(W)/W)^2 theta(W n + b) with W the product of primes below w."""

    w: int
    b: int = -1
    cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if math.gcd(self.b, self.W) != 1:
            raise ValueError(f"b = {self.b} is not coprime to W = {self.W}")

    @property
    def W(self) -> int:
        out = 1
        for p in primes_upto(max(self.w - 1, 1)):
            out *= int(p)
        return out

    @property
    def scale(self) -> Fraction:
        return Fraction(totient(self.W), self.W) ** 2

    def __call__(self, n: int) -> float:
        if n not in self.cache:
            m = self.W * n + self.b
            self.cache[n] = float(self.scale) * theta(m) if m >= 2 else 0.0
        return self.cache[n]

    def window(self, n_max: int) -> np.ndarray:
        """Values for n = 1..n_max, computed in bulk."""
        top = self.W * n_max + self.b
        th = theta_array(max(top, 2))
        n = np.arange(1, n_max + 1, dtype=np.int64)
        m = self.W * n + self.b
        vals = np.where(m >= 2, th[np.maximum(m, 0)], 0.0) * float(self.scale)
        for i, v in enumerate(vals.tolist(), start=1):
            self.cache[i] = v
        return vals


# ---------------------------------------------------------------------------
# Gowers norms


def gowers_norm(f, k: int) -> float:
    """||f||_{U^k(Z_N)} by direct enumeration over x and h in Z_N^k."""
    f = np.asarray(f, dtype=np.complex128)
    n = f.size
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if n * n**k > GOWERS_BUDGET:
        raise ValueError(f"enumeration budget exceeded: {n}^{k + 1} > {GOWERS_BUDGET}")
    x = np.arange(n)
    total = 0j
    if k == 1:
        # rows x, columns h
        grid = f[x[:, None]] * np.conj(f[(x[:, None] + x[None, :]) % n])
        total = grid.sum()
    elif k == 2:
        for h1 in range(n):
            a = f[x[:, None]] * np.conj(f[(x[:, None] + h1) % n])
            b = np.conj(f[(x[:, None] + x[None, :]) % n]) * f[(x[:, None] + h1 + x[None, :]) % n]
            total += (a * b).sum()
    else:
        for h1 in range(n):
            for h2 in range(n):
                base = x[:, None]
                h3 = x[None, :]
                prod = (
                    f[base % n]
                    * np.conj(f[(base + h1) % n])
                    * np.conj(f[(base + h2) % n])
                    * f[(base + h1 + h2) % n]
                )
                prod = prod * np.conj(f[(base + h3) % n]) * f[(base + h1 + h3) % n]
                prod = prod * f[(base + h2 + h3) % n] * np.conj(f[(base + h1 + h2 + h3) % n])
                total += prod.sum()
    value = total.real / n ** (k + 1)
    if value < 0:
        if value < -1e-12:
            raise AssertionError(f"Gowers average is negative: {value}")
        warnings.warn("Gowers average slightly negative from rounding; clamped to 0")
        value = 0.0
    return value ** (1.0 / 2**k)


def fourier_u2(f) -> float:
    """(sum_xi |f^(xi)|^4)^(1/4) with f^(xi) = E_x f(x) e(-x xi / N)."""
    f = np.asarray(f, dtype=np.complex128)
    fh = np.fft.fft(f) / f.size
    return float(np.sum(np.abs(fh) ** 4)) ** 0.25


def load_zn_function(text: str, n: int | None = None) -> np.ndarray:
    """Named generator (``constant:c``, ``indicator:primes``, ``delta:j``) or two-column text."""
    head, _, tail = text.partition(":")
    if head in ("constant", "indicator", "delta"):
        if n is None:
            raise ValueError("named generators need N")
        if head == "constant":
            return np.full(n, complex(tail or 1))
        if head == "delta":
            out = np.zeros(n, dtype=np.complex128)
            out[int(tail or 0) % n] = 1
            return out
        fam = SetFamily(tail) if tail != "primes" else SetFamily("primes")
        mask = fam.mask(max(n - 1, 1))[:n]
        return mask.astype(np.complex128)
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    size = n or (max(int(r[0]) for r in rows) + 1)
    out = np.zeros(size, dtype=np.complex128)
    for r in rows:
        out[int(r[0]) % size] = complex(r[1])
    return out


# ---------------------------------------------------------------------------
# shifted-Chen recurrence


def recurrence_search(a: Window, k: int, W: int = 2) -> tuple[int, int] | None:
    """Least (p, a) in lexicographic order, returned as (a, p), with a + j(p + 1) in A for j <= k.

    p runs over Chen primes with p + 1 divisible by W.
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    members = a.members()
    if any(not is_prime(int(v)) for v in members):
        raise DomainError("A must consist of primes")
    if members.size < k + 1:
        return None
    span = int(members[-1] - members[0])
    bits = a.bits
    for p in primes_upto(span // k):
        p = int(p)
        if (p + 1) % W or not is_chen(p):
            continue
        step = p + 1
        ok = bits[: len(bits) - k * step].copy()
        for j in range(1, k + 1):
            ok &= bits[j * step : len(bits) - (k - j) * step]
        hit = np.flatnonzero(ok)
        if hit.size:
            return int(hit[0]) + a.lo, p
    return None


def verify_recurrence(a_set, k: int, a: int, p: int, W: int = 2) -> bool:
    """Independent check with scalar primality and Chen tests."""
    members = set(int(v) for v in a_set)
    if not is_prime(p) or (p + 1) % W:
        return False
    fac = factorize(p + 2)
    if len(fac) > 2:
        return False
    return all((a + j * (p + 1)) in members and is_prime(a + j * (p + 1)) for j in range(k + 1))
