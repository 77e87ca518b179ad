"""GF(2^L) arithmetic under a primitive modulus and the per-coset
root-presence determinant test.

Field elements are L-bit integers over the polynomial basis {1, a, ...,
a^(L-1)} where a is the class of x modulo the chosen primitive polynomial.
A weight-k coset E is nondegenerate for a phase set {t_j} iff the k x k
determinant with entries a^(t_j * 2^{e_i}) is nonzero; nondegenerate cosets
contribute their cardinality to the linear complexity of the filtered
sequence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .cosets import BitString

# distinct prime factors of 2^L - 1; used by the multiplicative-order test
FACTORS_2L_M1 = {
    2: (3,),
    3: (7,),
    4: (3, 5),
    5: (31,),
    6: (3, 7),
    7: (127,),
    8: (3, 5, 17),
    9: (7, 73),
    10: (3, 11, 31),
    11: (23, 89),
    12: (3, 5, 7, 13),
    13: (8191,),
    14: (3, 43, 127),
    15: (7, 31, 151),
    16: (3, 5, 17, 257),
    17: (131071,),
    18: (3, 7, 19, 73),
    19: (524287,),
    20: (3, 5, 11, 31, 41),
    21: (7, 127, 337),
    22: (3, 23, 89, 683),
    23: (47, 178481),
    24: (3, 5, 7, 13, 17, 241),
    25: (31, 601, 1801),
    26: (3, 2731, 8191),
    27: (7, 73, 262657),
    28: (3, 5, 29, 43, 113, 127),
    29: (233, 1103, 2089),
    30: (3, 7, 11, 31, 151, 331),
    31: (2147483647,),
    32: (3, 5, 17, 257, 65537),
}

# one primitive polynomial per degree (smallest coefficient mask)
PRIMITIVE_POLYS = {
    3: 0xB,          # x^3 + x + 1
    4: 0x13,         # x^4 + x + 1
    5: 0x25,         # x^5 + x^2 + 1
    6: 0x43,         # x^6 + x + 1
    7: 0x83,         # x^7 + x + 1
    8: 0x11D,        # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,        # x^9 + x^4 + 1
    10: 0x409,       # x^10 + x^3 + 1
    11: 0x805,       # x^11 + x^2 + 1
    12: 0x1053,      # x^12 + x^6 + x^4 + x + 1
    13: 0x201B,      # x^13 + x^4 + x^3 + x + 1
    14: 0x402B,      # x^14 + x^5 + x^3 + x + 1
    15: 0x8003,      # x^15 + x + 1
    16: 0x1002D,     # x^16 + x^5 + x^3 + x^2 + 1
    17: 0x20009,     # x^17 + x^3 + 1
    18: 0x40027,     # x^18 + x^5 + x^2 + x + 1
    19: 0x80027,     # x^19 + x^5 + x^2 + x + 1
    20: 0x100009,    # x^20 + x^3 + 1
    21: 0x200005,    # x^21 + x^2 + 1
    22: 0x400003,    # x^22 + x + 1
    23: 0x800021,    # x^23 + x^5 + 1
    24: 0x100001B,   # x^24 + x^4 + x^3 + x + 1
    25: 0x2000009,   # x^25 + x^3 + 1
    26: 0x4000047,   # x^26 + x^6 + x^2 + x + 1
    27: 0x8000027,   # x^27 + x^5 + x^2 + x + 1
    28: 0x10000009,  # x^28 + x^3 + 1
    29: 0x20000005,  # x^29 + x^2 + 1
    30: 0x40000053,  # x^30 + x^6 + x^4 + x + 1
    31: 0x80000009,  # x^31 + x^3 + 1
    32: 0x1000000AF, # x^32 + x^7 + x^5 + x^3 + x^2 + x + 1
}

_EXP_TABLE_MAX_DEGREE = 16  # 2^16-entry tables still cheap to build and hold


@dataclass(frozen=True)
class PolyMod:
    """Binary polynomial as a coefficient mask (bit i = coefficient of x^i)."""

    degree: int
    mask: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")
        if self.mask >> self.degree != 1:
            raise ValueError(f"mask {self.mask:#x} does not have degree {self.degree}")

    @classmethod
    def from_mask(cls, mask: int) -> "PolyMod":
        if mask < 2:
            raise ValueError("constant polynomial")
        return cls(mask.bit_length() - 1, mask)

    @classmethod
    def default(cls, degree: int) -> "PolyMod":
        try:
            return cls(degree, PRIMITIVE_POLYS[degree])
        except KeyError:
            raise ValueError(f"no built-in primitive polynomial of degree {degree}") from None

    def to_hex(self) -> str:
        return f"{self.mask:#x}"


def _mul_raw(a: int, b: int, mask: int, L: int) -> int:
    # carry-less peasant multiplication, reducing by the modulus on overflow
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> L & 1:
            a ^= mask
    return r


def _pow_x_raw(e: int, mask: int, L: int) -> int:
    """x^e mod the polynomial, with e taken literally (no order assumption)."""
    base, r = 2, 1
    while e:
        if e & 1:
            r = _mul_raw(r, base, mask, L)
        base = _mul_raw(base, base, mask, L)
        e >>= 1
    return r


def _factors_of_order(L: int) -> tuple:
    try:
        return FACTORS_2L_M1[L]
    except KeyError:
        pass
    n = (1 << L) - 1
    fs = []
    d = 3
    while d * d <= n:
        if n % d == 0:
            fs.append(d)
            while n % d == 0:
                n //= d
        d += 2
    if n > 1:
        fs.append(n)
    return tuple(fs)


def is_primitive(p: PolyMod) -> bool:
    """True iff the class of x generates the full multiplicative group.

    x has order 2^L - 1 modulo p iff x^(2^L-1) = 1 and no maximal proper
    divisor of the order reaches 1; that combination also rules out every
    reducible p (a product of smaller fields cannot host the full order,
    and x^(2^L-1) - 1 is squarefree).
    """
    if p.degree < 2:
        raise ValueError("primitivity is tested for degree >= 2")
    if not p.mask & 1:
        return False
    L = p.degree
    order = (1 << L) - 1
    if _pow_x_raw(order, p.mask, L) != 1:
        return False
    return all(_pow_x_raw(order // f, p.mask, L) != 1 for f in _factors_of_order(L))


class Field:
    """Arithmetic context for one verified primitive modulus."""

    def __init__(self, modulus: PolyMod):
        if not is_primitive(modulus):
            raise ValueError(f"{modulus.to_hex()} is not primitive")
        self.modulus = modulus
        self.degree = modulus.degree
        self.order = (1 << modulus.degree) - 1
        self._exp = None
        self._log = None
        if modulus.degree <= _EXP_TABLE_MAX_DEGREE:
            self._build_tables()

    def _build_tables(self):
        exp = [1] * self.order
        v = 1
        for i in range(1, self.order):
            v = _mul_raw(v, 2, self.modulus.mask, self.degree)
            exp[i] = v
        log = [0] * (self.order + 1)
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[(self._log[a] + self._log[b]) % self.order]
        return _mul_raw(a, b, self.modulus.mask, self.degree)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 1 if e == 0 else 0
        e %= self.order
        if self._log is not None:
            return self._exp[self._log[a] * e % self.order]
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self._log is not None:
            return self._exp[(self.order - self._log[a]) % self.order]
        return self.pow(a, self.order - 1)

    def alpha_power(self, e: int) -> int:
        return self.pow(2, e)


@lru_cache(maxsize=64)
def _field_for(modulus: PolyMod) -> Field:
    return Field(modulus)


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(2^L): L-bit coefficient vector over a PolyMod basis."""

    value: int
    modulus: PolyMod

    def __post_init__(self):
        if not 0 <= self.value < 1 << self.modulus.degree:
            raise ValueError("value outside the field")


def _same_field(a: FieldElement, b: FieldElement) -> None:
    if a.modulus != b.modulus:
        raise ValueError("elements of different fields")


def element(modulus: PolyMod, value: int) -> FieldElement:
    return FieldElement(value, modulus)


def alpha(modulus: PolyMod) -> FieldElement:
    """The class of x: a fixed root of the modulus."""
    return FieldElement(2, modulus)


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    _same_field(a, b)
    return FieldElement(a.value ^ b.value, a.modulus)


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _same_field(a, b)
    return FieldElement(_field_for(a.modulus).mul(a.value, b.value), a.modulus)


def field_pow(a: FieldElement, e: int) -> FieldElement:
    return FieldElement(_field_for(a.modulus).pow(a.value, e), a.modulus)


def field_inv(a: FieldElement) -> FieldElement:
    return FieldElement(_field_for(a.modulus).inv(a.value), a.modulus)


@dataclass(frozen=True)
class PhaseSet:
    """Strictly increasing LFSR phases t_0 < t_1 < ... < t_{k-1}."""

    taps: tuple

    def __post_init__(self):
        taps = tuple(self.taps)
        object.__setattr__(self, "taps", taps)
        if not taps:
            raise ValueError("empty phase set")
        if any(t < 0 for t in taps):
            raise ValueError("phases must be non-negative")
        if any(a >= b for a, b in zip(taps, taps[1:])):
            raise ValueError("phases must be strictly increasing")

    def __len__(self):
        return len(self.taps)


def _matrix_raw(taps, ebits, fld: Field):
    order = fld.order
    return [[fld.alpha_power((t << e) % order) for t in taps] for e in ebits]


def test_matrix(phases: PhaseSet, coset: BitString, modulus: PolyMod):
    """k x k matrix with entry (i, j) = alpha^(t_j * 2^{e_i}), rows indexed by
    the coset's 1-positions e_0 < ... < e_{k-1}."""
    if coset.weight() != len(phases):
        raise ValueError(f"coset weight {coset.weight()} != phase count {len(phases)}")
    if phases.taps[-1] >= (1 << modulus.degree) - 1:
        raise ValueError("phase beyond the sequence period")
    fld = _field_for(modulus)
    raw = _matrix_raw(phases.taps, coset.positions(), fld)
    return [[FieldElement(v, modulus) for v in row] for row in raw]


def _det_raw(rows, fld: Field) -> int:
    n = len(rows)
    m = [row[:] for row in rows]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]  # char 2: swaps do not change the determinant
        pv = m[c][c]
        det = fld.mul(det, pv)
        pinv = fld.inv(pv)
        for r in range(c + 1, n):
            if m[r][c]:
                f = fld.mul(m[r][c], pinv)
                mr, mc = m[r], m[c]
                for cc in range(c, n):
                    mr[cc] ^= fld.mul(f, mc[cc])
    return det


def det(matrix) -> FieldElement:
    """Determinant over GF(2^L) by Gaussian elimination with pivot search."""
    if not matrix or any(len(row) != len(matrix) for row in matrix):
        raise ValueError("need a non-empty square matrix")
    modulus = matrix[0][0].modulus
    if any(e.modulus != modulus for row in matrix for e in row):
        raise ValueError("matrix mixes fields")
    rows = [[e.value for e in row] for row in matrix]
    return FieldElement(_det_raw(rows, _field_for(modulus)), modulus)


def root_presence(phases: PhaseSet, coset: BitString, modulus: PolyMod) -> bool:
    """True iff alpha^E is a root of the filtered sequence's minimal
    polynomial, i.e. det(test_matrix(...)) != 0; the coset then contributes
    its cardinality to the global linear complexity."""
    if coset.weight() != len(phases):
        raise ValueError(f"coset weight {coset.weight()} != phase count {len(phases)}")
    if phases.taps[-1] >= (1 << modulus.degree) - 1:
        raise ValueError("phase beyond the sequence period")
    fld = _field_for(modulus)
    raw = _matrix_raw(phases.taps, coset.positions(), fld)
    return _det_raw(raw, fld) != 0
