"""Fast deciders for the promise problems, with exact operation counters.

Solvers answer YES when they find a pair at distance at most r and NO
otherwise; on instances that respect the promise this matches the oracle,
and on promise-violating instances they still terminate and never turn a
certified YES into a NO.  Every distance evaluation, structure build, and
structure query is counted, because the scaling claims in this package are
stated over these counters rather than wall time.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from operator import add

from .errors import DimensionMismatch, ParameterError
from .instances import BcpInstance, CnfInstance, Lattice01Instance
from .metric import ExactPoint, Label, Norm, ScaledMagnitude, within_num
from .reductions import (
    embed_subsetquery_to_bcp,
    recover_lattice_witness,
    recover_sat_witness,
    reduce_ksat_to_bisq,
    reduce_lattice01_to_bcp,
)


@dataclass
class CostCounters:
    """Monotone operation counters; reset only between runs."""

    distance_evals: int = 0
    structure_builds: int = 0
    structure_queries: int = 0
    candidates_materialized: int = 0

    def merge(self, other: "CostCounters") -> None:
        self.distance_evals += other.distance_evals
        self.structure_builds += other.structure_builds
        self.structure_queries += other.structure_queries
        self.candidates_materialized += other.candidates_materialized

    def reset(self) -> None:
        self.distance_evals = 0
        self.structure_builds = 0
        self.structure_queries = 0
        self.candidates_materialized = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "distance_evals": self.distance_evals,
            "structure_builds": self.structure_builds,
            "structure_queries": self.structure_queries,
            "candidates_materialized": self.candidates_materialized,
        }


@dataclass
class SolveResult:
    label: Label
    witness: tuple | None
    counters: CostCounters


class AnnKind(Enum):
    LINEAR = "linear"
    GRID = "grid"

    @classmethod
    def from_token(cls, token: str) -> "AnnKind":
        for kind in cls:
            if kind.value == token:
                return kind
        raise ParameterError(f"unknown structure kind {token!r}")


class BcpStrategy(Enum):
    BRUTE = "brute"
    PRUNED = "pruned"

    @classmethod
    def from_token(cls, token: str) -> "BcpStrategy":
        for kind in cls:
            if kind.value == token:
                return kind
        raise ParameterError(f"unknown strategy {token!r}")


@dataclass
class AnnStructure:
    """A built near-neighbor structure answering exact <= r membership.

    LINEAR scans its points.  GRID (max norm only) buckets points into
    axis-aligned cells whose side equals the build radius, so any point
    within r of a query sits in one of the 3^d cells around the query's
    cell; candidates get an exact distance check, which makes both promise
    sides exact.  Counters, when attached, record every build, query, and
    point-level distance evaluation.
    """

    kind: AnnKind
    p: Norm
    points: tuple[ExactPoint, ...]
    dim: int
    cell_side: int | None = None
    buckets: dict | None = None
    counters: CostCounters | None = None

    def query(self, q: ExactPoint, r: ScaledMagnitude, gamma: Fraction) -> Label:
        return ann_query(self, q, r, gamma)


def ann_build(
    points: tuple[ExactPoint, ...],
    p: Norm,
    kind: AnnKind = AnnKind.LINEAR,
    cell_side: int | None = None,
    counters: CostCounters | None = None,
) -> AnnStructure:
    points = tuple(points)
    if not points:
        raise ParameterError("cannot build a structure over zero points")
    dim = points[0].dim
    if any(pt.dim != dim for pt in points):
        raise DimensionMismatch("structure points disagree on dimension")
    buckets = None
    if kind is AnnKind.GRID:
        if p is not Norm.LINF:
            raise ParameterError("the grid structure supports only the max norm")
        if cell_side is None or cell_side < 1:
            raise ParameterError("the grid needs a positive cell side (the radius)")
        buckets = {}
        for idx, pt in enumerate(points):
            cell = tuple(c // cell_side for c in pt.coords)
            buckets.setdefault(cell, []).append(idx)
    elif cell_side is not None:
        raise ParameterError("cell_side only applies to the grid structure")
    if counters is not None:
        counters.structure_builds += 1
    return AnnStructure(kind, p, points, dim, cell_side, buckets, counters)


def ann_query(
    s: AnnStructure, q: ExactPoint, r: ScaledMagnitude, gamma: Fraction
) -> Label:
    """YES iff some stored point is within r of q (an exact decision, so
    it is correct on both promise sides).  gamma is part of the query
    contract but the exact decision never needs the slack."""
    if q.dim != s.dim:
        raise DimensionMismatch("query dimension differs from the structure")
    counters = s.counters
    if counters is not None:
        counters.structure_queries += 1
    r_num = r.value
    if s.kind is AnnKind.LINEAR:
        evals = 0
        hit = False
        for pt in s.points:
            evals += 1
            if within_num(q.coords, pt.coords, s.p, r_num):
                hit = True
                break
        if counters is not None:
            counters.distance_evals += evals
        return Label.YES if hit else Label.NO
    if r_num != s.cell_side:
        raise ParameterError("query radius must equal the build-time cell side")
    side = s.cell_side
    center = tuple(c // side for c in q.coords)
    evals = 0
    hit = False
    for offset in product((-1, 0, 1), repeat=s.dim):
        bucket = s.buckets.get(tuple(map(add, center, offset)))
        if not bucket:
            continue
        for idx in bucket:
            evals += 1
            if within_num(q.coords, s.points[idx].coords, s.p, r_num):
                hit = True
                break
        if hit:
            break
    if counters is not None:
        counters.distance_evals += evals
    return Label.YES if hit else Label.NO


def bcp_solve(
    inst: BcpInstance,
    strategy: BcpStrategy = BcpStrategy.BRUTE,
    counters: CostCounters | None = None,
) -> SolveResult:
    """Decide a closest-pair promise instance.

    BRUTE scans all pairs with an early exit once a pair at distance <= r
    turns up, so on NO instances it performs exactly |A| * |B| distance
    evaluations.  PRUNED (max norm only) sorts both sides by the first
    coordinate and, for each a point, checks only b points whose first
    coordinate lies within gamma * r; any pair at distance <= r has first-
    coordinate gap <= r, so the verdict matches BRUTE on promise
    instances.  Witnesses are (a_index, b_index) in the original order.
    """
    counters = counters if counters is not None else CostCounters()
    p = inst.p
    r_num = inst.r.value
    acs = [pt.coords for pt in inst.a_points]
    bcs = [pt.coords for pt in inst.b_points]
    if strategy is BcpStrategy.BRUTE:
        evals = 0
        for i, a in enumerate(acs):
            for j, b in enumerate(bcs):
                evals += 1
                if within_num(a, b, p, r_num):
                    counters.distance_evals += evals
                    return SolveResult(Label.YES, (i, j), counters)
        counters.distance_evals += evals
        return SolveResult(Label.NO, None, counters)
    if p is not Norm.LINF:
        raise ParameterError("the pruned strategy supports only the max norm")
    order_b = sorted(range(len(bcs)), key=lambda j: (bcs[j][0], j))
    keys = [bcs[j][0] for j in order_b]
    window = Fraction(inst.gamma) * Fraction(r_num)
    evals = 0
    for i, a in enumerate(acs):
        lo = bisect_left(keys, a[0] - window)
        hi = bisect_right(keys, a[0] + window)
        for pos in range(lo, hi):
            j = order_b[pos]
            evals += 1
            if within_num(a, bcs[j], p, r_num):
                counters.distance_evals += evals
                return SolveResult(Label.YES, (i, j), counters)
    counters.distance_evals += evals
    return SolveResult(Label.NO, None, counters)


def svp01_mitm(
    inst: Lattice01Instance,
    strategy: BcpStrategy = BcpStrategy.BRUTE,
    counters: CostCounters | None = None,
    budget: int | None = None,
) -> SolveResult:
    """Decide a binary-coefficient lattice instance by the split
    reduction: materialize both halves' combination lists, solve each
    emitted closest-pair instance, and OR the answers.

    candidates_materialized counts every point placed on either side of
    every emitted instance; for ranks >= 2 without a target that is
    2^(ceil(n/2)+1) + 2^(floor(n/2)+1) - 2.  The witness is the recovered
    full coefficient vector.
    """
    counters = counters if counters is not None else CostCounters()
    output = reduce_lattice01_to_bcp(inst, budget=budget)
    counters.candidates_materialized += sum(
        len(sub.a_points) + len(sub.b_points) for sub in output.instances
    )
    for idx, sub in enumerate(output.instances):
        result = bcp_solve(sub, strategy, counters)
        if result.label is Label.YES:
            alpha = recover_lattice_witness(output, idx, result.witness)
            return SolveResult(Label.YES, alpha, counters)
    return SolveResult(Label.NO, None, counters)


def solve_cnf_via_bcp(
    inst: CnfInstance,
    strategy: BcpStrategy = BcpStrategy.BRUTE,
    counters: CostCounters | None = None,
    budget: int | None = None,
) -> SolveResult:
    """Decide satisfiability through the whole pipeline: split-and-list to
    a containment family, embed the family into the scaled cube, and run a
    closest-pair solver.  The witness is a full satisfying assignment."""
    counters = counters if counters is not None else CostCounters()
    output = reduce_ksat_to_bisq(inst, budget=budget)
    family = output.instances[0]
    counters.candidates_materialized += len(family.supersets) + len(family.subsets)
    bcp = embed_subsetquery_to_bcp(family)
    result = bcp_solve(bcp, strategy, counters)
    if result.label is Label.YES:
        a_idx, b_idx = result.witness
        assignment = recover_sat_witness(output, a_idx, b_idx)
        return SolveResult(Label.YES, assignment, counters)
    return SolveResult(Label.NO, None, counters)
