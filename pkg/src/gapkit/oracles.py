"""Brute-force ground truth for every decision problem in the package.

Each oracle enumerates its entire candidate space and reports the size of
that space alongside the verdict, so both its answer and its cost are
predictable: |A|*|B| pairs for closest pair, all 2^n or 2^n - 1 coefficient
vectors for a lattice instance, N*M pairs for subset query, and all 2^n
assignments for a formula.  There are no shortcuts that could change the
count; coordinate scans inside a single distance may stop early because
that cannot alter the exact minimum.  Oracles certify generators and the
fast solvers; they are deliberately naive and budget-guarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from operator import add, mul, sub

from . import budgets
from .errors import BudgetExceeded
from .instances import BcpInstance, CnfInstance, Lattice01Instance, SetFamilyInstance
from .metric import Label, Norm, ScaledMagnitude, classify_gap, dist_below, dist_num


@dataclass(frozen=True)
class OracleVerdict:
    """Outcome of a full enumeration.

    witness is present iff the label is YES or PROMISE_VIOLATION; the
    enumerated count is the full candidate-space size, never truncated.
    """

    label: Label
    witness: tuple | None
    exact_min: ScaledMagnitude | None
    enumerated: int


def oracle_closest_pair(inst: BcpInstance) -> OracleVerdict:
    """Scan every (a, b) pair; classify the exact minimum against (r, gamma).

    Ties break to the first pair in row-major (i, j) order.
    """
    acs = [pt.coords for pt in inst.a_points]
    bcs = [pt.coords for pt in inst.b_points]
    p = inst.p
    best: int | None = None
    wi = wj = 0
    for i, a in enumerate(acs):
        for j, b in enumerate(bcs):
            if best is None:
                best = dist_num(a, b, p)
                wi, wj = i, j
            else:
                v = dist_below(a, b, p, best)
                if v is not None:
                    best, wi, wj = v, i, j
    exact_min = ScaledMagnitude(best, inst.scale, p.power)
    label = classify_gap(exact_min, inst.r, inst.gamma)
    witness = (wi, wj) if label is not Label.NO else None
    return OracleVerdict(label, witness, exact_min, len(acs) * len(bcs))


def _alpha_bits(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(n))


def _norm_num(vec: list[int], p: Norm) -> int:
    if p is Norm.LINF:
        return max(map(abs, vec))
    if p is Norm.L1:
        return sum(map(abs, vec))
    return sum(map(mul, vec, vec))


def oracle_lattice01(inst: Lattice01Instance, budget: int | None = None) -> OracleVerdict:
    """Enumerate every {0,1}-coefficient combination of the basis.

    Without a target, all 2^n - 1 non-zero coefficient vectors are measured
    against the origin; with a target, all 2^n vectors (including zero) are
    measured against the target.  The walk is a Gray code so each step
    updates the running sum by one basis vector, but every candidate is
    still visited.  The witness is the lexicographically least minimizing
    coefficient vector (alpha_1 most significant).
    """
    n = inst.n
    limit = budgets.cap(budgets.LATTICE_ORACLE_RANK_CAP, budget)
    if n > limit:
        raise BudgetExceeded(
            f"rank {n} exceeds the enumeration cap {limit}; "
            f"raise GAPKIT_BUDGET to allow 2^{n} candidates"
        )
    rows = [b.coords for b in inst.basis]
    p = inst.p
    if inst.target is None:
        cur = [0] * inst.dim
        best: int | None = None
        best_alpha: tuple[int, ...] | None = None
        enumerated = (1 << n) - 1
    else:
        cur = [-c for c in inst.target.coords]
        best = _norm_num(cur, p)
        best_alpha = (0,) * n
        enumerated = 1 << n
    gray = 0
    for m in range(1, 1 << n):
        j = (m & -m).bit_length() - 1
        bit = 1 << j
        gray ^= bit
        row = rows[j]
        cur = list(map(add, cur, row)) if gray & bit else list(map(sub, cur, row))
        val = _norm_num(cur, p)
        if best is None or val < best:
            best = val
            best_alpha = _alpha_bits(gray, n)
        elif val == best:
            alpha = _alpha_bits(gray, n)
            if alpha < best_alpha:
                best_alpha = alpha
    exact_min = ScaledMagnitude(best, inst.scale, p.power)
    label = classify_gap(exact_min, inst.r, inst.gamma)
    witness = best_alpha if label is not Label.NO else None
    return OracleVerdict(label, witness, exact_min, enumerated)


def oracle_subset_query(inst: SetFamilyInstance) -> OracleVerdict:
    """Scan all (subset, superset) index pairs for a containment.

    The witness is the first containment in row-major order: subset index
    outer, superset index inner, both 0-based.
    """
    witness: tuple[int, int] | None = None
    for i, t in enumerate(inst.subsets):
        for j, s in enumerate(inst.supersets):
            if t & ~s == 0 and witness is None:
                witness = (i, j)
    label = Label.YES if witness is not None else Label.NO
    return OracleVerdict(label, witness, None, len(inst.subsets) * len(inst.supersets))


def oracle_sat(inst: CnfInstance, budget: int | None = None) -> OracleVerdict:
    """Try all 2^n assignments.

    The witness is the lexicographically least satisfying assignment as a
    tuple (x_1, ..., x_n) with False < True; the scan always covers the
    whole cube.
    """
    n = inst.num_vars
    limit = budgets.cap(budgets.SAT_ORACLE_VAR_CAP, budget)
    if n > limit:
        raise BudgetExceeded(
            f"{n} variables exceed the enumeration cap {limit}; "
            f"raise GAPKIT_BUDGET to allow 2^{n} assignments"
        )
    # bit (n - v) of an assignment word holds variable v, so ascending
    # words enumerate assignments in lexicographic order
    masks = []
    for clause in inst.clauses:
        pos = neg = 0
        for lit in clause:
            bit = 1 << (n - abs(lit))
            if lit > 0:
                pos |= bit
            else:
                neg |= bit
        masks.append((pos, neg))
    witness: tuple[int, ...] | None = None
    for a in range(1 << n):
        na = ~a
        for pos, neg in masks:
            if not (a & pos) and not (na & neg):
                break
        else:
            if witness is None:
                witness = tuple((a >> (n - i)) & 1 for i in range(1, n + 1))
    label = Label.YES if witness is not None else Label.NO
    return OracleVerdict(label, witness, None, 1 << n)
