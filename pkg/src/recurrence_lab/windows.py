"""Finite windows of integers and the structural detectors run on them.

A :class:`Window` is a bit array over ``[lo, hi]``. Difference-set kernels
convert the bits to a Python ``int`` and shift-and-OR whole machine words
at a time, which is what makes 10**7-wide windows tractable.

Every detector here reports evidence about a finite window only.
"""
from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

_RLE_MAGIC = b"RLW1"


@dataclass(frozen=True, eq=False)
class Window:
    lo: int
    hi: int
    bits: np.ndarray

    def __post_init__(self):
        if self.lo < 0 or self.hi < self.lo:
            raise ValueError(f"bad window bounds [{self.lo}, {self.hi}]")
        bits = np.ascontiguousarray(self.bits, dtype=bool)
        if bits.shape != (self.hi - self.lo + 1,):
            raise ValueError("bit array length must equal hi - lo + 1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_members(cls, members, lo: int, hi: int) -> "Window":
        arr = np.asarray(list(members) if not isinstance(members, np.ndarray) else members, dtype=np.int64)
        if arr.size and (arr.min() < lo or arr.max() > hi):
            raise ValueError("members fall outside the window")
        bits = np.zeros(hi - lo + 1, dtype=bool)
        bits[arr - lo] = True
        return cls(lo, hi, bits)

    @classmethod
    def from_mask(cls, mask: np.ndarray, lo: int, hi: int) -> "Window":
        """Slice a full-length mask (index = integer) down to ``[lo, hi]``."""
        return cls(lo, hi, mask[lo : hi + 1].copy())

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.bits).astype(np.int64) + self.lo

    @property
    def cardinality(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, n) -> bool:
        return self.lo <= n <= self.hi and bool(self.bits[n - self.lo])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Window)
            and (self.lo, self.hi) == (other.lo, other.hi)
            and np.array_equal(self.bits, other.bits)
        )

    def as_int(self) -> int:
        """Bitset as a Python int, bit i <-> integer lo + i."""
        if not self.bits.any():
            return 0
        packed = np.packbits(self.bits, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def shift(self, c: int) -> "Window":
        return Window(self.lo + c, self.hi + c, self.bits)

    def restrict(self, lo: int, hi: int) -> "Window":
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        if hi < lo:
            return Window(lo, lo, np.zeros(1, dtype=bool))
        return Window(lo, hi, self.bits[lo - self.lo : hi - self.lo + 1])

    def is_subset(self, other: "Window") -> bool:
        m = self.members()
        if not m.size:
            return True
        if m[0] < other.lo or m[-1] > other.hi:
            return False
        return bool(other.bits[m - other.lo].all())

    # -- serialisation ------------------------------------------------------
    def to_rle(self) -> bytes:
        """Run-length encoding: magic, lo, hi, then alternating absent/present runs as LEB128."""
        buf = io.BytesIO()
        buf.write(_RLE_MAGIC)
        buf.write(struct.pack("<QQ", self.lo, self.hi))
        b = self.bits.astype(np.int8)
        edges = np.flatnonzero(np.diff(b)) + 1
        bounds = np.concatenate(([0], edges, [len(b)]))
        runs = np.diff(bounds).tolist()
        if b[0]:
            runs = [0] + runs
        for r in runs:
            _write_varint(buf, r)
        return buf.getvalue()

    @classmethod
    def from_rle(cls, data: bytes) -> "Window":
        if data[:4] != _RLE_MAGIC:
            raise ValueError("not an RLE window")
        lo, hi = struct.unpack("<QQ", data[4:20])
        bits = np.zeros(hi - lo + 1, dtype=bool)
        pos, present, i = 0, False, 20
        while i < len(data):
            r, i = _read_varint(data, i)
            if present:
                bits[pos : pos + r] = True
            pos += r
            present = not present
        if pos != len(bits):
            raise ValueError("RLE runs do not cover the window")
        return cls(lo, hi, bits)

    def to_text(self) -> str:
        """``# lo hi`` header followed by one member per line."""
        lines = [f"# {self.lo} {self.hi}"] + [str(int(v)) for v in self.members()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Window":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("#"):
            raise ValueError("missing '# lo hi' header")
        lo, hi = (int(t) for t in lines[0][1:].split())
        return cls.from_members([int(v) for v in lines[1:]], lo, hi)


def _write_varint(buf, n: int) -> None:
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            buf.write(bytes((byte | 0x80,)))
        else:
            buf.write(bytes((byte,)))
            return


def _read_varint(data: bytes, i: int) -> tuple[int, int]:
    shift = result = 0
    while True:
        byte = data[i]
        i += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, i
        shift += 7


def int_to_members(x: int, offset: int = 0) -> np.ndarray:
    """Members of a bitset int, bit i <-> offset + i."""
    if x == 0:
        return np.zeros(0, dtype=np.int64)
    raw = x.to_bytes((x.bit_length() + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return np.flatnonzero(bits).astype(np.int64) + offset


# ---------------------------------------------------------------------------
# difference sets


@dataclass
class DifferenceSet:
    window: Window
    zero_present: bool


def difference_set(a: Window, b: Window, range_cap: int) -> DifferenceSet:
    """Positive part of A - B up to ``range_cap``; 0 is reported as a flag."""
    if range_cap < 1:
        raise ValueError("range_cap must be positive")
    if range_cap > a.hi - b.lo:
        raise ValueError("range_cap exceeds a.hi - b.lo")
    zero = bool(a.cardinality and b.cardinality and _overlap(a, b))
    # Bits of A placed at absolute positions relative to b.lo, then one
    # shift-and-OR per member of the smaller operand.
    base = b.lo
    a_int = a.as_int() << (a.lo - base) if a.lo >= base else a.as_int() >> (base - a.lo)
    cap_mask = (1 << (range_cap + 1)) - 1
    acc = 0
    for y in b.members():
        acc |= (a_int >> int(y - base)) & cap_mask
        if acc == cap_mask:
            break
    acc &= ~1
    bits = np.zeros(range_cap, dtype=bool)
    idx = int_to_members(acc)
    bits[idx - 1] = True
    return DifferenceSet(Window(1, range_cap, bits), zero)


def _overlap(a: Window, b: Window) -> bool:
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if hi < lo:
        return False
    return bool((a.bits[lo - a.lo : hi - a.lo + 1] & b.bits[lo - b.lo : hi - b.lo + 1]).any())


def representation_count(e: Window, a: int) -> int:
    """Number of ordered pairs (s1, s2) of members with s1 - s2 = a."""
    if a < 1:
        raise ValueError("differences are positive")
    if a > e.hi - e.lo:
        return 0
    return int(np.count_nonzero(e.bits[a:] & e.bits[:-a]))


# ---------------------------------------------------------------------------
# gap / run detectors


def syndeticity_gap(w: Window) -> int | None:
    """Largest gap between consecutive members, with lo-1 and hi+1 as sentinels.

    A value of 1 means the window is a full interval.
    """
    m = w.members()
    if not m.size:
        return None
    pts = np.concatenate(([w.lo - 1], m, [w.hi + 1]))
    return int(np.diff(pts).max())


def _longest_true_run(bits: np.ndarray) -> int:
    if not bits.any():
        return 0
    b = np.concatenate(([False], bits, [False])).astype(np.int8)
    d = np.diff(b)
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    return int((ends - starts).max())


def longest_run_present(w: Window) -> int:
    return _longest_true_run(w.bits)


def longest_run_absent(w: Window) -> int:
    return _longest_true_run(~w.bits)


# ---------------------------------------------------------------------------
# densities


@dataclass
class DensityStats:
    upper_rel: Fraction
    lower_rel: Fraction
    ratios: list[tuple[int, Fraction]]
    banach_profile: list[tuple[int, Fraction]]
    banach_truncated: bool = True
    notes: list[str] = field(default_factory=list)


def banach_profile(w: Window, lengths) -> list[tuple[int, Fraction]]:
    """Exact max over M in the window of |W ∩ [M, M+N)| / N for each N."""
    cum = np.concatenate(([0], np.cumsum(w.bits, dtype=np.int64)))
    out = []
    span = w.hi - w.lo + 1
    for n in lengths:
        n = int(n)
        if n < 1 or n > span:
            continue
        best = int((cum[n:] - cum[:-n]).max())
        out.append((n, Fraction(best, n)))
    return out


def density_stats(e: Window, a: Window, sample_ns, banach_lengths=None) -> DensityStats:
    """Relative density of A in E at each prefix end N, plus E's Banach profile."""
    if not a.is_subset(e):
        raise ValueError("A is not contained in E")
    ce = np.cumsum(e.bits, dtype=np.int64)
    ca_bits = np.zeros_like(e.bits)
    am = a.members()
    ca_bits[am - e.lo] = True
    ca = np.cumsum(ca_bits, dtype=np.int64)
    ratios = []
    for n in sample_ns:
        n = int(n)
        if n < e.lo or n > e.hi:
            continue
        den = int(ce[n - e.lo])
        if den:
            ratios.append((n, Fraction(int(ca[n - e.lo]), den)))
    if not ratios:
        raise ValueError("no sample point has a nonempty E-prefix")
    vals = [r for _, r in ratios]
    if banach_lengths is None:
        span = e.hi - e.lo + 1
        banach_lengths = [1 << j for j in range(span.bit_length()) if (1 << j) <= span]
    return DensityStats(
        upper_rel=max(vals),
        lower_rel=min(vals),
        ratios=ratios,
        banach_profile=banach_profile(e, banach_lengths),
        notes=["window-relative evidence; M ranges only over the supplied window"],
    )
