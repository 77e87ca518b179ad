"""The lower-bound engine.

For each distance-d progression string FDC(i) and each removed position
j, the engine builds the candidate family C(i,j): every weight-k string
that keeps the remaining k-1 ones of FDC(i) and adds one extra 1 outside
its support.  After two elimination passes (progression classes, then
classes already analysed) the sweep asks: how many of the surviving
candidates can simultaneously fail to contribute to the linear
complexity?  Whenever the OR of a chosen subset covers some
fixed-distance string, the shared-subsystem argument forbids simultaneous
degeneration, so the largest subset whose OR covers none of them - m* -
caps the failures, and the remaining M - m* candidates are guaranteed
contributors.  The bound accumulates their cardinalities over all (i, j).

Containment has two modes.  `strict` compares raw strings: a candidate is
a progression only if it equals a stored FDC, it was analysed before only
if it contains an earlier mask (XOR weight 1), and the sweep covers
stored FDC strings only.  `rotational` (the default) works at coset-class
level: canonical-form identity for both elimination passes, and the sweep
covers any rotation of any FDC - sound because rotating a string squares
every element of its coset, which preserves both coset identity and the
fixed-distance property.  Rotational is the stronger and non-double-
counting variant; strict applies the raw-string rules literally and is
kept as a comparison point.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .cosets import (
    BitString,
    FdcTable,
    canon_int,
    canonicalize,
    check_input_sizes,
    euler_phi,
    fixed_distance_cosets,
    rotl_int,
)
from .errors import InvariantError

MODES = ("strict", "rotational")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


@dataclass(frozen=True)
class MaskIndex:
    """Identifies one candidate family: FDC index i, removed-1 index j, and
    the weight-(k-1) mask left after clearing position d_i*j mod L."""

    i: int
    j: int
    mask: BitString


@dataclass(frozen=True)
class SweepOutcome:
    m_star: int
    proven_nondegenerate: int
    contribution: int


@dataclass(frozen=True)
class SetRecord:
    i: int
    j: int
    d: int
    mask_hex: str
    M: int
    m_star: int
    contribution: int


@dataclass(frozen=True)
class BoundReport:
    L: int
    k: int
    mode: str
    n_l: int
    initial_delta: int
    delta: int
    nondegenerate_coset_count: int
    sets: tuple


def build_mask(fdc: BitString, j: int, d: int, L: int) -> BitString:
    """FDC(i) with the jth-1 (position d*j mod L) cleared."""
    if fdc.length != L:
        raise ValueError(f"fdc length {fdc.length} != L = {L}")
    k = fdc.weight()
    if not 1 <= j <= k - 1:
        raise ValueError(f"j must be in [1, {k - 1}], got {j}")
    ej = d * j % L
    if not fdc.value >> ej & 1:
        raise ValueError(f"position {ej} is not set; fdc is not the d={d} progression")
    return BitString(fdc.value & ~(1 << ej), L)


def build_candidates(fdc: BitString, mask: BitString) -> list:
    """One weight-k candidate per position outside fdc's support: the mask
    plus one extra 1 there.  L-k candidates; the removed position is
    excluded since restoring it rebuilds fdc itself."""
    if mask.length != fdc.length:
        raise ValueError("length mismatch")
    if mask.value & ~fdc.value or fdc.weight() - mask.weight() != 1:
        raise ValueError("mask must be fdc minus exactly one bit")
    L = fdc.length
    return [
        BitString(mask.value | (1 << p), L)
        for p in range(L)
        if not fdc.value >> p & 1
    ]


def eliminate_fixed_distance(cands, table: FdcTable, mode: str) -> list:
    """Drop candidates that are fixed-distance cosets themselves: raw string
    equality in strict mode, canonical-class equality in rotational mode."""
    _check_mode(mode)
    if mode == "strict":
        stored = {fdc.value for _, fdc in table.entries}
        return [x for x in cands if x.value not in stored]
    classes = {canon_int(fdc.value, table.L) for _, fdc in table.entries}
    return [x for x in cands if canon_int(x.value, x.length) not in classes]


def eliminate_previously_seen(cands, history, prior_masks, mode: str) -> list:
    """Drop candidates already analysed in an earlier family.  Rotational:
    canonical class present in the ledger of retained candidates.  Strict:
    XOR with an earlier mask has weight 1, i.e. the candidate lies in that
    earlier family as generated."""
    _check_mode(mode)
    if mode == "strict":
        mask_vals = [m.mask.value for m in prior_masks]
        return [
            x for x in cands
            if not any((x.value ^ mv).bit_count() == 1 for mv in mask_vals)
        ]
    return [x for x in cands if canon_int(x.value, x.length) not in history]


def _dedup_classes(cands) -> list:
    # one string per coset class within a family (first occurrence wins)
    kept, seen = [], set()
    for x in cands:
        c = canon_int(x.value, x.length)
        if c not in seen:
            seen.add(c)
            kept.append(x)
    return kept


def _checks_for(table: FdcTable, mode: str) -> tuple:
    if mode == "strict":
        return tuple(fdc.value for _, fdc in table.entries)
    return tuple(sorted({
        rotl_int(fdc.value, r, table.L)
        for _, fdc in table.entries
        for r in range(table.L)
    }))


def _max_avoiding(cand_vals, needs, m: int) -> bool:
    """Is there an m-subset whose OR covers none of the needed strings?
    Backtracking over candidate indices in ascending order; a partial OR
    that already covers some need can never be extended into an avoiding
    subset, so the branch is cut."""
    M = len(cand_vals)

    def rec(start: int, depth: int, vor: int) -> bool:
        if depth == m:
            return True
        for idx in range(start, M - (m - depth) + 1):
            nv = vor | cand_vals[idx]
            for f in needs:
                if f & ~nv == 0:
                    break
            else:
                if rec(idx + 1, depth + 1, nv):
                    return True
        return False

    return rec(0, 0, 0)


def _sweep_ints(cand_vals, check_vals) -> int:
    """m* for one candidate family: the largest subset size whose OR covers
    no check string.  Covering is monotone in the subset, so m* is found by
    descending from M; size-1 subsets never cover (equal weights survive
    the first elimination pass only if distinct), giving the floor of 1."""
    M = len(cand_vals)
    if M == 0:
        return 0
    if M == 1:
        return 1
    allor = 0
    for x in cand_vals:
        allor |= x
    common = cand_vals[0]
    for x in cand_vals[1:]:
        common &= x
    # checks outside total reach never trigger; shared candidate bits are
    # always present in a nonempty OR; covering is decided by the minimal
    # remainders alone
    needs = sorted({f & ~common for f in check_vals if f & ~allor == 0})
    needs = [n for n in needs if not any(o != n and o & ~n == 0 for o in needs)]
    for m in range(M, 1, -1):
        if _max_avoiding(cand_vals, needs, m):
            return m
    return 1


def _contribution_unit(cands, L: int) -> int:
    if _is_prime(L):
        return L
    if not cands:
        return L
    return min(canonicalize(x).cardinality for x in cands)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def sweep(cands, table: FdcTable, mode: str) -> SweepOutcome:
    """Run the simultaneous-degeneration sweep on one candidate family."""
    _check_mode(mode)
    cand_vals = tuple(x.value for x in cands)
    m_star = _sweep_ints(cand_vals, _checks_for(table, mode))
    proven = len(cands) - m_star
    return SweepOutcome(
        m_star=m_star,
        proven_nondegenerate=proven,
        contribution=proven * _contribution_unit(cands, table.L),
    )


def _sweep_job(args):
    cand_vals, checks = args
    return _sweep_ints(cand_vals, checks)


def lb_bound(L: int, k: int, mode: str = "rotational", jobs: int = 1) -> BoundReport:
    """Compute the lower bound for (L, k).

    Families are generated and filtered sequentially in loop order (i
    ascending over the distance table, j ascending 1..k-1) so the
    analysed-class ledger is deterministic; the per-family sweeps are
    independent and fan out across `jobs` processes.
    """
    check_input_sizes(L, k)
    _check_mode(mode)
    if jobs < 1:
        raise ValueError("jobs must be >= 1")

    table = fixed_distance_cosets(L, k)
    initial = L * table.count
    checks = _checks_for(table, mode)

    ledger = set()
    prior_masks = []
    pending = []  # (i, j, d, mask, cand_vals, unit)
    for i, (d, fdc) in enumerate(table.entries, 1):
        for j in range(1, k):
            mask = build_mask(fdc, j, d, L)
            cands = build_candidates(fdc, mask)
            cands = eliminate_fixed_distance(cands, table, mode)
            cands = eliminate_previously_seen(cands, ledger, prior_masks, mode)
            cands = _dedup_classes(cands)
            pending.append((
                i, j, d, mask,
                tuple(x.value for x in cands),
                _contribution_unit(cands, L),
            ))
            prior_masks.append(MaskIndex(i=i, j=j, mask=mask))
            if mode == "rotational":
                ledger.update(canon_int(x.value, L) for x in cands)

    if jobs == 1 or len(pending) < 2:
        stars = [_sweep_ints(vals, checks) for *_ix, vals, _u in pending]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(pending))) as pool:
            stars = list(pool.map(
                _sweep_job,
                [(vals, checks) for *_ix, vals, _u in pending],
                chunksize=max(1, len(pending) // (4 * jobs)),
            ))

    records = []
    delta = initial
    proven_total = 0
    for (i, j, d, mask, vals, unit), m_star in zip(pending, stars):
        proven = len(vals) - m_star
        contribution = proven * unit
        delta += contribution
        proven_total += proven
        records.append(SetRecord(
            i=i, j=j, d=d, mask_hex=mask.to_hex(),
            M=len(vals), m_star=m_star, contribution=contribution,
        ))

    report = BoundReport(
        L=L, k=k, mode=mode, n_l=table.count,
        initial_delta=initial, delta=delta,
        nondegenerate_coset_count=table.count + proven_total,
        sets=tuple(records),
    )
    _validate_report(report)
    return report


def _validate_report(r: BoundReport) -> None:
    errs = []
    if r.initial_delta != r.L * r.n_l:
        errs.append("initial_delta != L*N_L")
    if r.delta != r.initial_delta + sum(s.contribution for s in r.sets):
        errs.append("delta != initial + sum(contributions)")
    if not r.L * euler_phi(r.L) // 2 <= r.delta <= math.comb(r.L, r.k):
        errs.append("delta outside [L*phi(L)/2, C(L,k)]")
    if _is_prime(r.L) and r.delta != r.nondegenerate_coset_count * r.L:
        errs.append("delta != count*L for prime L")
    if any(not 0 <= s.m_star <= s.M for s in r.sets):
        errs.append("m_star outside [0, M]")
    if errs:
        raise InvariantError("; ".join(errs))


def report_to_dict(r: BoundReport) -> dict:
    d = asdict(r)
    d["sets"] = [asdict(s) for s in r.sets]
    return d


def report_from_dict(d: dict) -> BoundReport:
    sets = tuple(SetRecord(**s) for s in d["sets"])
    fields = {key: d[key] for key in
              ("L", "k", "mode", "n_l", "initial_delta", "delta",
               "nondegenerate_coset_count")}
    return BoundReport(sets=sets, **fields)


def to_json(r: BoundReport) -> str:
    return json.dumps(report_to_dict(r), indent=2)


def from_json(text: str) -> BoundReport:
    return report_from_dict(json.loads(text))
