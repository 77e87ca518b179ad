"""Shared test utilities: primitive-polynomial enumeration and an
independent cofactor-expansion determinant."""
from functools import lru_cache

from lcbound import FieldElement, PolyMod, field_add, field_mul, is_primitive


@lru_cache(maxsize=None)
def primitive_moduli(L: int) -> tuple:
    """Every primitive degree-L polynomial over GF(2), as PolyMod."""
    out = []
    for mask in range((1 << L) | 1, 1 << (L + 1), 2):
        p = PolyMod(L, mask)
        if is_primitive(p):
            out.append(p)
    return tuple(out)


def cofactor_det(matrix) -> FieldElement:
    """Laplace expansion along the first row; exponential, oracle only."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    modulus = matrix[0][0].modulus
    total = FieldElement(0, modulus)
    for col in range(n):
        minor = [
            [row[c] for c in range(n) if c != col]
            for row in matrix[1:]
        ]
        term = field_mul(matrix[0][col], cofactor_det(minor))
        # char 2: cofactor signs vanish
        total = field_add(total, term)
    return total


def bits_to_str(bits: int, n: int) -> str:
    """Sequence digits s_0 s_1 ... s_{n-1} left to right."""
    return format(bits, f"0{n}b")[::-1]


def str_to_bits(text: str) -> int:
    return int(text[::-1], 2) if text else 0


def recursion_holds(connection: int, complexity: int, bits: int, n: int) -> bool:
    """Does the characteristic mask annihilate the sequence?  Checks
    sum_j conn_j * s_{t-l+j} = 0 for every t in [l, n)."""
    l = complexity
    if l == 0:
        return bits == 0
    window_mask = (1 << (l + 1)) - 1
    for t in range(l, n):
        window = bits >> (t - l) & window_mask
        if (connection & window).bit_count() & 1:
            return False
    return True
