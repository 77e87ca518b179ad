"""L-bit string algebra and cyclotomic coset machinery.

A cyclotomic coset mod 2^L - 1 is held as an L-bit integer: bit p is the
coefficient of 2^p in the coset representative E.  Squaring an element of
the coset is a left cyclic rotation of the string, so coset identity is
rotation-invariant and the canonical representative is the rotation with
the smallest integer value.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import UnsupportedSizeError

MAX_LENGTH = 64  # single machine word; the built-in table tops out at L = 53


def _check_length(length: int) -> None:
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    if length > MAX_LENGTH:
        raise UnsupportedSizeError(f"length {length} exceeds {MAX_LENGTH}-bit support")


def rotl_int(v: int, r: int, length: int) -> int:
    """Left-rotate the low `length` bits of v by r."""
    r %= length
    mask = (1 << length) - 1
    return ((v << r) | (v >> (length - r))) & mask if r else v


def canon_int(v: int, length: int) -> int:
    """Smallest integer among the `length` rotations of v."""
    best = v
    for _ in range(length - 1):
        v = rotl_int(v, 1, length)
        if v < best:
            best = v
    return best


@dataclass(frozen=True)
class BitString:
    """An L-bit word; bit p holds the coefficient of 2^p."""

    value: int
    length: int

    def __post_init__(self):
        _check_length(self.length)
        if not 0 <= self.value < 1 << self.length:
            raise ValueError(f"value {self.value:#x} out of range for {self.length} bits")

    @classmethod
    def from_positions(cls, positions, length: int) -> "BitString":
        v = 0
        for p in positions:
            v |= 1 << p % length
        return cls(v, length)

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitString":
        return cls(int(text, 16), length)

    def to_hex(self) -> str:
        return f"{self.value:#x}"

    def weight(self) -> int:
        return self.value.bit_count()

    def positions(self) -> tuple[int, ...]:
        return tuple(p for p in range(self.length) if self.value >> p & 1)

    def __str__(self) -> str:
        # positionwise, bit 0 rightmost
        return format(self.value, f"0{self.length}b")


def _same_length(a: BitString, b: BitString) -> None:
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} != {b.length}")


def rotate_left(s: BitString, r: int) -> BitString:
    if r < 0:
        raise ValueError("rotation must be non-negative")
    return BitString(rotl_int(s.value, r, s.length), s.length)


def bit_and(a: BitString, b: BitString) -> BitString:
    _same_length(a, b)
    return BitString(a.value & b.value, a.length)


def bit_xor(a: BitString, b: BitString) -> BitString:
    _same_length(a, b)
    return BitString(a.value ^ b.value, a.length)


def bit_or(strings) -> BitString:
    strings = list(strings)
    if not strings:
        raise ValueError("bit_or needs at least one string")
    first = strings[0]
    v = 0
    for s in strings:
        _same_length(first, s)
        v |= s.value
    return BitString(v, first.length)


def contains(sub: BitString, sup: BitString) -> bool:
    """True iff every 1 of sub is also set in sup."""
    _same_length(sub, sup)
    return sub.value & ~sup.value == 0


@dataclass(frozen=True)
class CosetClass:
    """A cyclotomic coset: rotation-minimal representative plus its size."""

    canonical: BitString
    cardinality: int


def canonicalize(s: BitString) -> CosetClass:
    L = s.length
    v = s.value
    best = v
    period = L
    cur = v
    for r in range(1, L):
        cur = rotl_int(cur, 1, L)
        if cur < best:
            best = cur
        if cur == v and r < period:
            period = r
    return CosetClass(BitString(best, L), period)


def euler_phi(L: int) -> int:
    """Count of integers in [1, L] coprime to L."""
    if L < 1:
        raise ValueError("L must be positive")
    return sum(1 for n in range(1, L + 1) if math.gcd(n, L) == 1)


@dataclass(frozen=True)
class FdcTable:
    """The fixed-distance cosets for (L, k): weight-k strings with 1s in
    arithmetic progression {d*i mod L}, one entry per distance class."""

    L: int
    k: int
    entries: tuple  # of (d, BitString)
    count: int


def check_input_sizes(L: int, k: int) -> None:
    _check_length(L)
    if not 2 < k < L - 2:
        raise ValueError(f"need 2 < k < L-2, got L={L} k={k}")


def fixed_distance_cosets(L: int, k: int) -> FdcTable:
    """Build the distance-d progression strings for all d coprime to L,
    deduplicated by coset class (d and L-d always coincide)."""
    check_input_sizes(L, k)
    entries = []
    seen = set()
    for d in range(1, L):
        if math.gcd(d, L) != 1:
            continue
        v = 0
        for i in range(k):
            v |= 1 << (d * i % L)
        c = canon_int(v, L)
        if c in seen:
            continue
        seen.add(c)
        entries.append((d, BitString(v, L)))
    expected = euler_phi(L) // 2
    if len(entries) != expected:
        # the deduplicated count is the sound one; the closed form is only a claim
        warnings.warn(
            f"distance-class count {len(entries)} != phi({L})/2 = {expected}; "
            "using the deduplicated count",
            stacklevel=2,
        )
    return FdcTable(L=L, k=k, entries=tuple(entries), count=len(entries))
