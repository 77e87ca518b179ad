"""End-to-end measurement oracle: maximal-length LFSR generation, nonlinear
filtering, and Berlekamp-Massey synthesis.

Bit sequences are plain ints with bit n holding s_n, so filtering is a
handful of shifted ANDs and the synthesis discrepancy is one popcount.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cosets import BitString
from .errors import UnsupportedSizeError
from .gf2 import PhaseSet, PolyMod, _field_for, is_primitive

MAX_MEASURE_DEGREE = 17  # two periods of 2^17-1 bits is the practical ceiling


@dataclass(frozen=True)
class LfsrSpec:
    """A maximal-length register: primitive modulus plus nonzero seed
    (bit p of the seed is stage value s_p)."""

    modulus: PolyMod
    seed: int = 1

    def __post_init__(self):
        if not 0 < self.seed < 1 << self.modulus.degree:
            raise ValueError("seed must be a nonzero L-bit state")
        if not is_primitive(self.modulus):
            raise ValueError(f"{self.modulus.to_hex()} is not primitive")


@dataclass(frozen=True)
class FilterSpec:
    """Nonlinear filter with a unique maximum-order product term plus
    optional lower-order terms, all XOR-combined."""

    max_term: PhaseSet
    lower_terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lower_terms", tuple(self.lower_terms))
        k = len(self.max_term)
        if any(len(t) >= k for t in self.lower_terms):
            raise ValueError("max_term must be strictly the largest term")

    @property
    def order(self) -> int:
        return len(self.max_term)

    def to_dict(self) -> dict:
        return {
            "max_term": list(self.max_term.taps),
            "lower_terms": [list(t.taps) for t in self.lower_terms],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FilterSpec":
        return cls(
            max_term=PhaseSet(tuple(d["max_term"])),
            lower_terms=tuple(PhaseSet(tuple(t)) for t in d.get("lower_terms", ())),
        )


@dataclass(frozen=True)
class BmResult:
    """Shortest linear recursion found: its degree and the characteristic
    polynomial mask (bit i = coefficient of x^i), normalized so that an
    m-sequence's connection equals its modulus mask."""

    complexity: int
    connection: int


def seq_pack(value: int, n: int) -> str:
    """Packed hex with explicit bit count."""
    if value >> n:
        raise ValueError("value has more than n bits")
    return f"{n}:{value:x}"


def seq_unpack(text: str) -> tuple:
    count, _, hexpart = text.partition(":")
    return int(hexpart, 16), int(count)


def lfsr_bits(spec: LfsrSpec, n: int) -> int:
    """First n bits of the register's output (bit i = s_i)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    L = spec.modulus.degree
    rec = spec.modulus.mask & ((1 << L) - 1)  # s_{m+L} = sum of c_i * s_{m+i}
    window = spec.seed
    # stage values come straight from the seed for the first L bits
    out = [str(spec.seed >> p & 1) for p in range(min(n, L))]
    for _ in range(L, n):
        bit = (rec & window).bit_count() & 1
        window = (window >> 1) | (bit << (L - 1))
        out.append(str(bit))
    return int("".join(reversed(out)), 2) if out else 0


def filter_bits(lfsr: LfsrSpec, filt: FilterSpec, n: int) -> int:
    """n output bits: XOR over terms of the AND over each term's phases t of
    s_{i+t}."""
    L = lfsr.modulus.degree
    terms = (filt.max_term, *filt.lower_terms)
    top = max(t.taps[-1] for t in terms)
    if top >= L:
        raise ValueError(f"phase {top} outside register stages [0, {L})")
    base = lfsr_bits(lfsr, n + top)
    out = 0
    for term in terms:
        v = base >> term.taps[0]
        for t in term.taps[1:]:
            v &= base >> t
        out ^= v
    return out & ((1 << n) - 1)


def berlekamp_massey(bits: int, n: int) -> BmResult:
    """Synthesize the shortest recursion generating the first n bits.

    The running window R keeps the input reversed (bit i = s_{step-i}) so
    each discrepancy is a single masked popcount against the connection
    polynomial in delay form; the result is re-reversed into the
    characteristic mask x^l * C(1/x).
    """
    if n < 1:
        raise ValueError("need a nonempty sequence")
    c, b = 1, 1  # connection / previous connection, delay-operator masks
    l, shift = 0, 1
    r = 0
    for step in range(n):
        r = (r << 1) | (bits >> step & 1)
        if (c & r).bit_count() & 1 == 0:
            shift += 1
        elif 2 * l <= step:
            c, b = c ^ (b << shift), c
            l = step + 1 - l
            shift = 1
        else:
            c ^= b << shift
            shift += 1
    conn = 0
    for i in range(l + 1):
        if c >> i & 1:
            conn |= 1 << (l - i)
    return BmResult(complexity=l, connection=conn)


def global_lc(lfsr: LfsrSpec, filt: FilterSpec) -> int:
    """Exact global linear complexity, measured over two full periods."""
    L = lfsr.modulus.degree
    if L > MAX_MEASURE_DEGREE:
        raise UnsupportedSizeError(
            f"measurement needs 2*(2^{L}-1) bits; supported up to degree {MAX_MEASURE_DEGREE}"
        )
    n = 2 * ((1 << L) - 1)
    return berlekamp_massey(filter_bits(lfsr, filt, n), n).complexity


def minpoly_root_check(result: BmResult, coset: BitString, modulus: PolyMod) -> bool:
    """Evaluate the measured characteristic polynomial at alpha^E; true iff
    alpha^E is a root, i.e. the coset is present in the minimal polynomial."""
    if coset.weight() < 1:
        raise ValueError("coset must be nonzero")
    fld = _field_for(modulus)
    beta = fld.pow(2, coset.value)
    val = 0
    for i in range(result.complexity, -1, -1):
        val = fld.mul(val, beta)
        if result.connection >> i & 1:
            val ^= 1
    return val == 0
