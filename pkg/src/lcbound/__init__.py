"""Guaranteed lower bounds on the global linear complexity of nonlinearly
filtered LFSR keystreams, with field-arithmetic and keystream-measurement
oracles to validate them."""

from .cosets import (
    BitString,
    CosetClass,
    FdcTable,
    bit_and,
    bit_or,
    bit_xor,
    canon_int,
    canonicalize,
    check_input_sizes,
    contains,
    euler_phi,
    fixed_distance_cosets,
    rotate_left,
    rotl_int,
)
from .engine import (
    BoundReport,
    MaskIndex,
    SetRecord,
    SweepOutcome,
    build_candidates,
    build_mask,
    eliminate_fixed_distance,
    eliminate_previously_seen,
    from_json,
    lb_bound,
    report_from_dict,
    report_to_dict,
    sweep,
    to_json,
)
from .errors import InvariantError, UnsupportedSizeError
from .gf2 import (
    FACTORS_2L_M1,
    PRIMITIVE_POLYS,
    FieldElement,
    PhaseSet,
    PolyMod,
    alpha,
    det,
    element,
    field_add,
    field_inv,
    field_mul,
    field_pow,
    is_primitive,
    root_presence,
    test_matrix,
)
from .keystream import (
    BmResult,
    FilterSpec,
    LfsrSpec,
    berlekamp_massey,
    filter_bits,
    global_lc,
    lfsr_bits,
    minpoly_root_check,
    seq_pack,
    seq_unpack,
)

__version__ = "0.1.0"
