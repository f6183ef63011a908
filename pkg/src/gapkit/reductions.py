"""Executable reductions between the decision problems in the package.

Each transformation emits concrete instances together with total
provenance: every produced point or set carries the source object it came
from, so a winning pair in the image maps back to a witness of the source
problem.  Verdict semantics (how sub-answers recombine) travel with the
output.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from operator import add
from typing import Callable, Sequence

from . import budgets
from .errors import BudgetExceeded, InfeasibleParameters, ParameterError
from .instances import BcpInstance, CnfInstance, Lattice01Instance, SetFamilyInstance
from .metric import ExactPoint, Label, Norm, ScaledMagnitude


class Recombination(Enum):
    OR = "or"
    AND = "and"
    SINGLE = "single"


@dataclass(frozen=True)
class InstanceProvenance:
    """Source objects for each produced point, index-aligned per side."""

    a_sources: tuple
    b_sources: tuple


@dataclass(frozen=True)
class ReductionOutput:
    instances: tuple
    recombination: Recombination
    provenance: tuple[InstanceProvenance, ...]


# -- binary-coefficient lattice -> closest pair -------------------------

def _alpha_bits(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(n))


def _subset_sums(rows: Sequence[tuple[int, ...]], dim: int) -> list[tuple[int, ...]]:
    """All 2^len(rows) subset sums, ordered by ascending coefficient mask."""
    sums = [(0,) * dim]
    for row in rows:
        sums += [tuple(map(add, s, row)) for s in sums]
    return sums


def reduce_lattice01_to_bcp(
    inst: Lattice01Instance, budget: int | None = None
) -> ReductionOutput:
    """Split the basis in half and materialize each half's combinations.

    The first ceil(n/2) vectors feed the a side (all their subset sums);
    the remaining vectors feed the b side negated, so a cross-pair
    difference a - b runs over exactly the full-coefficient combinations.
    Without a target two instances are emitted, (sums, negated-sums minus
    zero) and (sums minus zero, negated-sums), recombined by OR, which
    covers every non-zero coefficient vector exactly once.  With a target
    the b side is shifted by the target and a single instance covers all
    coefficient vectors including zero.  At rank 1 the first instance would
    have an empty side and is dropped.
    """
    n = inst.n
    limit = budgets.cap(budgets.MITM_RANK_CAP, budget)
    if n > limit:
        raise BudgetExceeded(
            f"rank {n} exceeds the split-enumeration cap {limit}; "
            f"raise GAPKIT_BUDGET to materialize 2^{(n + 1) // 2} points per side"
        )
    k = (n + 1) // 2
    dim = inst.dim
    first = [b.coords for b in inst.basis[:k]]
    second = [b.coords for b in inst.basis[k:]]
    a_sums = _subset_sums(first, dim)
    b_sums = [tuple(-c for c in s) for s in _subset_sums(second, dim)]
    a_alphas = tuple(_alpha_bits(mask, k) for mask in range(len(a_sums)))
    b_alphas = tuple(_alpha_bits(mask, n - k) for mask in range(len(b_sums)))
    a_points = tuple(ExactPoint(c) for c in a_sums)

    if inst.target is not None:
        t = inst.target.coords
        b_points = tuple(ExactPoint(tuple(map(add, s, t))) for s in b_sums)
        shifted = BcpInstance(a_points, b_points, inst.r, inst.gamma, inst.p, inst.scale)
        return ReductionOutput(
            (shifted,),
            Recombination.SINGLE,
            (InstanceProvenance(a_alphas, b_alphas),),
        )

    b_points = tuple(ExactPoint(c) for c in b_sums)
    instances = []
    provenance = []
    if len(b_points) > 1:
        instances.append(
            BcpInstance(a_points, b_points[1:], inst.r, inst.gamma, inst.p, inst.scale)
        )
        provenance.append(InstanceProvenance(a_alphas, b_alphas[1:]))
    instances.append(
        BcpInstance(a_points[1:], b_points, inst.r, inst.gamma, inst.p, inst.scale)
    )
    provenance.append(InstanceProvenance(a_alphas[1:], b_alphas))
    recombination = Recombination.OR if len(instances) == 2 else Recombination.SINGLE
    return ReductionOutput(tuple(instances), recombination, tuple(provenance))


def recover_lattice_witness(
    output: ReductionOutput, instance_index: int, pair: tuple[int, int]
) -> tuple[int, ...]:
    """Map a winning (a, b) pair back to the full coefficient vector."""
    prov = output.provenance[instance_index]
    return prov.a_sources[pair[0]] + prov.b_sources[pair[1]]


# -- subset query -> closest pair ---------------------------------------

_SUPERSET_VALUES = (0, 2)  # coordinate for an absent / present element
_SUBSET_VALUES = (1, 3)


def embed_subsetquery_to_bcp(
    inst: SetFamilyInstance, transposed: bool = False
) -> BcpInstance:
    """Embed both families into the scaled unit cube under the max norm.

    Superset-side sets map coordinatewise through {0 -> 0, 1 -> 2} and
    subset-side sets through {0 -> 1, 1 -> 3}, all over denominator 3.
    Per coordinate the difference is 1 except when the subset holds an
    element the superset lacks, where it is 3; so the pair distance is
    exactly 1/3 when the subset is contained and exactly 1 otherwise, a
    realized gap of 3 with no intermediate values.  Point order mirrors
    family order: a_points[j] is superset j, b_points[i] is subset i.

    transposed=True swaps which family gets which value table; the small
    distance then detects containment in the opposite direction (superset-
    side set inside subset-side set).  It exists for comparison and is not
    what any solver in this package expects.
    """
    d = inst.d
    sup_vals, sub_vals = (_SUPERSET_VALUES, _SUBSET_VALUES)
    if transposed:
        sup_vals, sub_vals = sub_vals, sup_vals
    a_points = tuple(
        ExactPoint(tuple(sup_vals[(mask >> j) & 1] for j in range(d)))
        for mask in inst.supersets
    )
    b_points = tuple(
        ExactPoint(tuple(sub_vals[(mask >> j) & 1] for j in range(d)))
        for mask in inst.subsets
    )
    return BcpInstance(
        a_points,
        b_points,
        ScaledMagnitude(1, 3, 1),
        Fraction(3),
        Norm.LINF,
        scale=3,
    )


# -- k-SAT -> subset query (split and list) -----------------------------

def _partial_assignments(bits: int) -> list[tuple[int, ...]]:
    """All assignments over `bits` variables in lexicographic order."""
    return [
        tuple((word >> (bits - i)) & 1 for i in range(1, bits + 1))
        for word in range(1 << bits)
    ]


def reduce_ksat_to_bisq(inst: CnfInstance, budget: int | None = None) -> ReductionOutput:
    """Split the variables in half and list both halves' assignments.

    For a left assignment a, U_L(a) is the set of clause indices no left
    literal satisfies; symmetrically U_R(b) on the right.  The formula is
    satisfiable iff some U_L(a) and U_R(b) are disjoint, i.e. iff the
    right-unsat set is contained in the complement of the left-unsat set.
    The emitted family has one superset [m] \\ U_L(a) per left assignment
    and one subset U_R(b) per right assignment; provenance carries the
    partial assignments.  A formula with no clauses emits a one-element
    ground set with full supersets and empty subsets so every pair is a
    containment.
    """
    n = inst.num_vars
    limit = budgets.cap(budgets.MITM_RANK_CAP, budget)
    if n > limit:
        raise BudgetExceeded(
            f"{n} variables exceed the split-enumeration cap {limit}; "
            f"raise GAPKIT_BUDGET to list 2^{(n + 1) // 2} assignments per side"
        )
    n_left = (n + 1) // 2
    n_right = n - n_left
    m = len(inst.clauses)
    left_parts = _partial_assignments(n_left)
    right_parts = _partial_assignments(n_right)

    if m == 0:
        family = SetFamilyInstance(
            1, (1,) * len(left_parts), (0,) * len(right_parts)
        )
        return ReductionOutput(
            (family,),
            Recombination.SINGLE,
            (InstanceProvenance(tuple(left_parts), tuple(right_parts)),),
        )

    def unsat_mask(part: tuple[int, ...], offset: int, width: int) -> int:
        mask = 0
        for c, clause in enumerate(inst.clauses):
            for lit in clause:
                var = abs(lit)
                if offset < var <= offset + width:
                    value = part[var - offset - 1]
                    if (lit > 0) == bool(value):
                        break
            else:
                mask |= 1 << c
        return mask

    full = (1 << m) - 1
    supersets = tuple(full ^ unsat_mask(part, 0, n_left) for part in left_parts)
    subsets = tuple(unsat_mask(part, n_left, n_right) for part in right_parts)
    family = SetFamilyInstance(m, supersets, subsets)
    return ReductionOutput(
        (family,),
        Recombination.SINGLE,
        (InstanceProvenance(tuple(left_parts), tuple(right_parts)),),
    )


def recover_sat_witness(
    output: ReductionOutput, superset_index: int, subset_index: int
) -> tuple[int, ...]:
    """Left and right partial assignments concatenated to a full one."""
    prov = output.provenance[0]
    return prov.a_sources[superset_index] + prov.b_sources[subset_index]


# -- orthogonal vectors <-> subset query --------------------------------

def convert_ov_bsq(direction: str, inst: SetFamilyInstance) -> SetFamilyInstance:
    """Complement the superset-side family; both directions are this same
    involution.

    Two 0/1 vectors are orthogonal exactly when the support of one is
    contained in the complement of the other's support, so an
    orthogonality instance (first family in the supersets slot, second in
    the subsets slot) becomes a containment instance by complementing the
    first family, and vice versa.  The round trip is the identity.
    """
    if direction not in ("ov-to-bsq", "bsq-to-ov"):
        raise ParameterError(
            f"direction must be 'ov-to-bsq' or 'bsq-to-ov', got {direction!r}"
        )
    full = (1 << inst.d) - 1
    return SetFamilyInstance(
        inst.d, tuple(full ^ s for s in inst.supersets), inst.subsets
    )


# -- closest pair by batched near-neighbor structures -------------------

def solve_bcp_via_ann(
    inst: BcpInstance,
    factory: Callable[[tuple[ExactPoint, ...]], object],
    ell: int,
) -> Label:
    """Decide a closest-pair instance with near-neighbor structures built
    over batches of the a side.

    The a side is cut into ceil(|A|/ell) consecutive batches; the factory
    builds one structure per batch and every b point queries every
    structure, so exactly ceil(|A|/ell) builds and |B| * ceil(|A|/ell)
    queries are issued (no early exit; the counts are part of the
    contract).  YES iff any query answers YES.
    """
    n_a = len(inst.a_points)
    if not 1 <= ell <= n_a:
        raise ParameterError(f"batch size must be in [1, {n_a}], got {ell}")
    found = False
    for start in range(0, n_a, ell):
        structure = factory(inst.a_points[start : start + ell])
        for q in inst.b_points:
            if structure.query(q, inst.r, inst.gamma) is Label.YES:
                found = True
    return Label.YES if found else Label.NO


# -- batch-size selection -----------------------------------------------

@dataclass(frozen=True)
class CostExpr:
    """The exact expression coefficient * base ** exponent."""

    coefficient: int
    base: int
    exponent: Fraction

    def __str__(self) -> str:
        return f"{self.coefficient} * {self.base}^({self.exponent})"


@dataclass(frozen=True)
class BatchSelection:
    ell: int
    lower_exponent: Fraction
    upper_exponent: Fraction
    preprocessing: CostExpr
    query: CostExpr


def _int_root(value: int, degree: int) -> int:
    """floor(value ** (1/degree)) by bisection on integers."""
    if value < 0 or degree < 1:
        raise ParameterError("root arguments out of range")
    if value in (0, 1) or degree == 1:
        return value
    hi = 1 << (value.bit_length() // degree + 1)
    lo = 0
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**degree <= value:
            lo = mid
        else:
            hi = mid
    return lo


def _floor_pow(base: int, exponent: Fraction) -> int:
    return _int_root(base**exponent.numerator, exponent.denominator)


def _strictly_below_pow(x: int, base: int, exponent: Fraction) -> bool:
    return x**exponent.denominator < base**exponent.numerator


def select_batch_size(
    n_points: int, c: Fraction, delta: Fraction, delta_prime: Fraction
) -> BatchSelection:
    """Smallest batch size strictly inside the useful open interval
    (N^(delta'/delta), N^((1-delta')/(c-1))).

    Structures with preprocessing N * ell^(c-1) and query ell^(-delta)
    beat the quadratic scan only for batch sizes in that interval; it
    contains an integer only when delta'/(1-delta') < delta/(c-1) and N is
    large enough.  All comparisons are exact integer power tests.
    """
    c, delta, delta_prime = Fraction(c), Fraction(delta), Fraction(delta_prime)
    if n_points < 2:
        raise ParameterError("the point count must be at least 2")
    if c <= 1:
        raise ParameterError("the preprocessing exponent c must exceed 1")
    if not 0 < delta < 1:
        raise ParameterError("delta must lie strictly between 0 and 1")
    if not 0 < delta_prime < 1:
        raise ParameterError("delta' must lie strictly between 0 and 1")
    if delta_prime / (1 - delta_prime) >= delta / (c - 1):
        raise InfeasibleParameters(
            "no useful batch size: delta'/(1-delta') must stay below delta/(c-1)"
        )
    lower = delta_prime / delta
    upper = (1 - delta_prime) / (c - 1)
    ell = _floor_pow(n_points, lower) + 1
    if not _strictly_below_pow(ell, n_points, upper):
        raise InfeasibleParameters(
            f"the open interval (N^{lower}, N^{upper}) contains no integer for N={n_points}"
        )
    return BatchSelection(
        ell=ell,
        lower_exponent=lower,
        upper_exponent=upper,
        preprocessing=CostExpr(n_points, ell, c - 1),
        query=CostExpr(n_points * n_points, ell, -delta),
    )


def implied_gap(width: int) -> Fraction:
    """Separation factor 1 + 2/(k-1) that a width-k clause split can
    tolerate; wider clauses leave less slack."""
    if width < 2:
        raise ParameterError("the clause width must be at least 2")
    return 1 + Fraction(2, width - 1)
