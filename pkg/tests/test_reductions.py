"""Instance transformations: the split reduction, the cube embedding,
split-and-list, family complementation, batching, and batch sizing."""

from fractions import Fraction
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapkit.errors import BudgetExceeded, InfeasibleParameters, ParameterError
from gapkit.generators import generate_bcp, generate_cnf, generate_lattice01
from gapkit.instances import CnfInstance, Lattice01Instance, SetFamilyInstance
from gapkit.metric import ExactPoint, Label, Norm, ScaledMagnitude, dist_num
from gapkit.oracles import oracle_lattice01, oracle_sat
from gapkit.reductions import (
    Recombination,
    convert_ov_bsq,
    embed_subsetquery_to_bcp,
    implied_gap,
    recover_lattice_witness,
    recover_sat_witness,
    reduce_ksat_to_bisq,
    reduce_lattice01_to_bcp,
    select_batch_size,
    solve_bcp_via_ann,
)
from gapkit.solvers import CostCounters, ann_build


def P(*coords):
    return ExactPoint(coords)


def mag(v, scale=1, power=1):
    return ScaledMagnitude(v, scale, power)


def combos(basis, mask):
    n = len(basis)
    d = basis[0].dim
    out = [0] * d
    for j in range(n):
        if (mask >> j) & 1:
            for i in range(d):
                out[i] += basis[j].coords[i]
    return tuple(out)


# -- lattice split ------------------------------------------------------

def test_split_rank_two_by_hand():
    b1, b2 = P(1, 0), P(0, 1)
    inst = Lattice01Instance((b1, b2), mag(1), Fraction(2), Norm.LINF)
    out = reduce_lattice01_to_bcp(inst)
    assert out.recombination is Recombination.OR
    assert len(out.instances) == 2
    first, second = out.instances
    # A0 = {0, b1}; negated-sum side = {0, -b2}
    assert [pt.coords for pt in first.a_points] == [(0, 0), (1, 0)]
    assert [pt.coords for pt in first.b_points] == [(0, -1)]
    assert [pt.coords for pt in second.a_points] == [(1, 0)]
    assert [pt.coords for pt in second.b_points] == [(0, 0), (0, -1)]
    diffs = set()
    for sub in out.instances:
        for a in sub.a_points:
            for b in sub.b_points:
                diffs.add(tuple(x - y for x, y in zip(a.coords, b.coords)))
    assert diffs == {(1, 0), (0, 1), (1, 1)}


def test_split_rank_three_unit_vectors():
    basis = (P(1, 0, 0), P(0, 1, 0), P(0, 0, 1))
    inst = Lattice01Instance(basis, mag(1), Fraction(2), Norm.LINF)
    out = reduce_lattice01_to_bcp(inst)
    diffs = set()
    for sub in out.instances:
        for a in sub.a_points:
            for b in sub.b_points:
                diffs.add(tuple(x - y for x, y in zip(a.coords, b.coords)))
    assert diffs == {combos(basis, m) for m in range(1, 8)}


def test_split_rank_one_emits_single_instance():
    inst = Lattice01Instance((P(5, 0),), mag(5), Fraction(2), Norm.LINF)
    out = reduce_lattice01_to_bcp(inst)
    assert out.recombination is Recombination.SINGLE
    assert len(out.instances) == 1
    sub = out.instances[0]
    assert [pt.coords for pt in sub.a_points] == [(5, 0)]
    assert [pt.coords for pt in sub.b_points] == [(0, 0)]


def test_split_cvp_single_instance_with_zero():
    basis = (P(4, 0), P(0, 4))
    inst = Lattice01Instance(
        basis, mag(1), Fraction(3), Norm.LINF, target=P(1, 1)
    )
    out = reduce_lattice01_to_bcp(inst)
    assert out.recombination is Recombination.SINGLE
    sub = out.instances[0]
    assert len(sub.a_points) == 2 and len(sub.b_points) == 2
    best = min(
        dist_num(a.coords, b.coords, Norm.LINF)
        for a in sub.a_points
        for b in sub.b_points
    )
    assert best == 1  # alpha = 0 reaches the target within 1


def test_split_budget_refusal():
    basis = tuple(
        P(*(1 if i == j else 0 for j in range(6))) for i in range(6)
    )
    inst = Lattice01Instance(basis, mag(1), Fraction(2), Norm.LINF)
    with pytest.raises(BudgetExceeded):
        reduce_lattice01_to_bcp(inst, budget=5)


@settings(max_examples=60)
@given(st.integers(0, 2**40), st.integers(2, 9), st.booleans())
def test_split_difference_sets_cover_combinations(seed, n, with_target):
    """The claim identity: differences over the emitted pair grids equal
    the nonzero coefficient combinations (all of them, shifted, for the
    target variant)."""
    inst = generate_lattice01(seed, n=n, with_target=with_target, certify=False)
    out = reduce_lattice01_to_bcp(inst)
    diffs = set()
    for sub in out.instances:
        for a in sub.a_points:
            for b in sub.b_points:
                diffs.add(tuple(x - y for x, y in zip(a.coords, b.coords)))
    if with_target:
        t = inst.target.coords
        want = {
            tuple(c - tc for c, tc in zip(combos(inst.basis, m), t))
            for m in range(1 << n)
        }
    else:
        want = {combos(inst.basis, m) for m in range(1, 1 << n)}
    assert diffs == want


@settings(max_examples=40)
@given(st.integers(0, 2**40), st.integers(2, 8))
def test_split_min_matches_oracle(seed, n):
    """The reduction preserves the exact minimum distance."""
    inst = generate_lattice01(seed, n=n, certify=False)
    out = reduce_lattice01_to_bcp(inst)
    reduced_min = min(
        dist_num(a.coords, b.coords, inst.p)
        for sub in out.instances
        for a in sub.a_points
        for b in sub.b_points
    )
    assert reduced_min == oracle_lattice01(inst).exact_min.value


@settings(max_examples=30)
@given(st.integers(0, 2**40), st.integers(2, 7), st.booleans())
def test_split_provenance_recovers_witnesses(seed, n, with_target):
    inst = generate_lattice01(seed, n=n, with_target=with_target, certify=False)
    out = reduce_lattice01_to_bcp(inst)
    for idx, sub in enumerate(out.instances):
        for i, a in enumerate(sub.a_points):
            for j, b in enumerate(sub.b_points):
                alpha = recover_lattice_witness(out, idx, (i, j))
                mask = sum(bit << pos for pos, bit in enumerate(alpha))
                vec = combos(inst.basis, mask)
                if with_target:
                    vec = tuple(v - t for v, t in zip(vec, inst.target.coords))
                diff = tuple(x - y for x, y in zip(a.coords, b.coords))
                assert diff == vec


def test_split_side_sizes():
    for n in range(2, 11):
        inst = generate_lattice01(n, n=n, certify=False)
        out = reduce_lattice01_to_bcp(inst)
        k = (n + 1) // 2
        first, second = out.instances
        assert len(first.a_points) == 1 << k
        assert len(first.b_points) == (1 << (n - k)) - 1
        assert len(second.a_points) == (1 << k) - 1
        assert len(second.b_points) == 1 << (n - k)


# -- cube embedding -----------------------------------------------------

def test_embedding_tables_by_hand():
    # d=3: superset {1,3} -> (2,0,2); subset {1} -> (3,1,1); subset {2} -> (1,3,1)
    fam = SetFamilyInstance(3, (0b101,), (0b001, 0b010))
    bcp = embed_subsetquery_to_bcp(fam)
    assert bcp.scale == 3 and bcp.p is Norm.LINF
    assert bcp.r.value == 1 and bcp.gamma == 3
    assert bcp.a_points[0].coords == (2, 0, 2)
    assert bcp.b_points[0].coords == (3, 1, 1)
    assert bcp.b_points[1].coords == (1, 3, 1)
    assert dist_num(bcp.a_points[0].coords, bcp.b_points[0].coords, Norm.LINF) == 1
    assert dist_num(bcp.a_points[0].coords, bcp.b_points[1].coords, Norm.LINF) == 3


def test_embedding_exhaustive_d4_counts():
    masks = tuple(range(16))
    fam = SetFamilyInstance(4, masks, masks)
    bcp = embed_subsetquery_to_bcp(fam)
    close_pairs = 0
    for j, a in enumerate(bcp.a_points):
        for i, b in enumerate(bcp.b_points):
            val = dist_num(a.coords, b.coords, Norm.LINF)
            assert val in (1, 3)
            if val == 1:
                assert masks[i] & ~masks[j] == 0
                close_pairs += 1
            else:
                assert masks[i] & ~masks[j] != 0
    assert close_pairs == 81  # 3^4 containment pairs


def test_embedding_transposed_detects_reverse_containment():
    fam = SetFamilyInstance(2, (0b01,), (0b11,))
    normal = embed_subsetquery_to_bcp(fam)
    flipped = embed_subsetquery_to_bcp(fam, transposed=True)
    # subset {1,2} is not inside superset {1}, but {1} is inside {1,2}
    assert dist_num(normal.a_points[0].coords, normal.b_points[0].coords, Norm.LINF) == 3
    assert dist_num(flipped.a_points[0].coords, flipped.b_points[0].coords, Norm.LINF) == 1


@given(st.integers(1, 10), st.integers(0, 2**40))
def test_embedding_two_valued(d, seed):
    from gapkit.rng import SplitMix64

    rng = SplitMix64(seed)
    sup = tuple(rng.mask(d) for _ in range(6))
    sub = tuple(rng.mask(d) for _ in range(6))
    bcp = embed_subsetquery_to_bcp(SetFamilyInstance(d, sup, sub))
    for j in range(6):
        for i in range(6):
            val = dist_num(bcp.a_points[j].coords, bcp.b_points[i].coords, Norm.LINF)
            assert val == (1 if sub[i] & ~sup[j] == 0 else 3)


# -- split and list -----------------------------------------------------

def test_split_and_list_by_hand():
    # (x1 or x2) and (not x1 or not x2), split {x1} | {x2}
    inst = CnfInstance(2, 2, ((1, 2), (-1, -2)))
    out = reduce_ksat_to_bisq(inst)
    fam = out.instances[0]
    assert len(fam.supersets) == 2 and len(fam.subsets) == 2
    # x1=1 leaves clause 2 unsatisfied: S = {1}; x2=0 leaves clause 1: T = {1}
    got = oracle_sat(inst)
    assert got.label is Label.YES
    from gapkit.oracles import oracle_subset_query

    assert oracle_subset_query(fam).label is Label.YES


def test_split_and_list_contradiction():
    inst = CnfInstance(1, 1, ((1,), (-1,)))
    fam = reduce_ksat_to_bisq(inst).instances[0]
    from gapkit.oracles import oracle_subset_query

    assert oracle_subset_query(fam).label is Label.NO


def test_split_and_list_empty_formula():
    inst = CnfInstance(2, 1, ())
    fam = reduce_ksat_to_bisq(inst).instances[0]
    assert fam.d == 1
    assert all(s == 1 for s in fam.supersets)
    assert all(t == 0 for t in fam.subsets)
    from gapkit.oracles import oracle_subset_query

    assert oracle_subset_query(fam).label is Label.YES


def test_split_and_list_exhaustive_clause_subsets():
    """Every subset of a fixed clause universe agrees with the oracle."""
    universe = ((1, 2), (-1, 3), (-2, -3), (1, -3), (2, 3), (-1, -2))
    for mask in range(1 << len(universe)):
        clauses = tuple(
            universe[i] for i in range(len(universe)) if (mask >> i) & 1
        )
        inst = CnfInstance(3, 2, clauses)
        fam = reduce_ksat_to_bisq(inst).instances[0]
        from gapkit.oracles import oracle_subset_query

        assert (oracle_subset_query(fam).label is Label.YES) == (
            oracle_sat(inst).label is Label.YES
        )


@settings(max_examples=40)
@given(st.integers(0, 2**40), st.integers(2, 9), st.integers(0, 14))
def test_split_and_list_witness_recovery(seed, n, m):
    inst = generate_cnf(seed, n=n, m=m, k=min(3, n))
    out = reduce_ksat_to_bisq(inst)
    fam = out.instances[0]
    from gapkit.oracles import oracle_subset_query

    v = oracle_subset_query(fam)
    want = oracle_sat(inst)
    assert (v.label is Label.YES) == (want.label is Label.YES)
    if v.label is Label.YES:
        i, j = v.witness
        assignment = recover_sat_witness(out, j, i)
        assert len(assignment) == n
        for clause in inst.clauses:
            assert any(
                (assignment[l - 1] == 1) if l > 0 else (assignment[-l - 1] == 0)
                for l in clause
            )


def test_split_and_list_budget():
    inst = generate_cnf(0, n=10, m=5, k=3)
    with pytest.raises(BudgetExceeded):
        reduce_ksat_to_bisq(inst, budget=4)


# -- family complementation --------------------------------------------

def test_ov_involution_by_hand():
    # a=(1,0), b=(0,1) are orthogonal: complement(a)=(0,1) contains support(b)
    fam = SetFamilyInstance(2, (0b01,), (0b10,))
    conv = convert_ov_bsq("ov-to-bsq", fam)
    assert conv.supersets == (0b10,)
    from gapkit.oracles import oracle_subset_query

    assert oracle_subset_query(conv).label is Label.YES
    # a=(1,0), b=(1,0) are not orthogonal
    fam2 = SetFamilyInstance(2, (0b01,), (0b01,))
    assert oracle_subset_query(convert_ov_bsq("ov-to-bsq", fam2)).label is Label.NO


@given(
    st.integers(1, 10),
    st.lists(st.integers(0, 1023), min_size=1, max_size=8),
    st.lists(st.integers(0, 1023), min_size=1, max_size=8),
)
def test_ov_round_trip(d, sup, sub):
    full = (1 << d) - 1
    fam = SetFamilyInstance(d, tuple(s & full for s in sup), tuple(t & full for t in sub))
    there = convert_ov_bsq("ov-to-bsq", fam)
    back = convert_ov_bsq("bsq-to-ov", there)
    assert back == fam


@given(
    st.integers(1, 8),
    st.lists(st.integers(0, 255), min_size=1, max_size=6),
    st.lists(st.integers(0, 255), min_size=1, max_size=6),
)
def test_ov_orthogonality_equivalence(d, sup, sub):
    full = (1 << d) - 1
    a_side = tuple(s & full for s in sup)
    b_side = tuple(t & full for t in sub)
    fam = convert_ov_bsq("ov-to-bsq", SetFamilyInstance(d, a_side, b_side))
    from gapkit.oracles import oracle_subset_query

    orthogonal = any(a & b == 0 for a in a_side for b in b_side)
    assert (oracle_subset_query(fam).label is Label.YES) == orthogonal


def test_ov_direction_validated():
    fam = SetFamilyInstance(2, (1,), (2,))
    with pytest.raises(ParameterError):
        convert_ov_bsq("sideways", fam)


# -- batching -----------------------------------------------------------

def test_batching_counter_contract():
    inst = generate_bcp(1, n_a=16, n_b=16, d=3, label=Label.NO)
    counters = CostCounters()
    label = solve_bcp_via_ann(
        inst, lambda pts: ann_build(pts, inst.p, counters=counters), 4
    )
    assert label is Label.NO
    assert counters.structure_builds == 4
    assert counters.structure_queries == 64


def test_batching_verdict_independent_of_ell():
    for label in (Label.YES, Label.NO):
        inst = generate_bcp(7, n_a=12, n_b=9, d=2, label=label)
        for ell in range(1, 13):
            counters = CostCounters()
            got = solve_bcp_via_ann(
                inst, lambda pts: ann_build(pts, inst.p, counters=counters), ell
            )
            assert got is label
            assert counters.structure_builds == ceil(12 / ell)
            assert counters.structure_queries == 9 * ceil(12 / ell)


def test_batching_ell_bounds():
    inst = generate_bcp(1, n_a=4, n_b=4, d=2)
    with pytest.raises(ParameterError):
        solve_bcp_via_ann(inst, lambda pts: ann_build(pts, inst.p), 0)
    with pytest.raises(ParameterError):
        solve_bcp_via_ann(inst, lambda pts: ann_build(pts, inst.p), 5)


# -- batch-size selection ----------------------------------------------

def test_batch_size_worked_examples():
    sel = select_batch_size(2**20, Fraction(2), Fraction(1, 2), Fraction(1, 4))
    assert sel.ell == 1025
    assert sel.lower_exponent == Fraction(1, 2)
    assert sel.upper_exponent == Fraction(3, 4)
    small = select_batch_size(16, Fraction(2), Fraction(1, 2), Fraction(1, 4))
    assert small.ell == 5
    assert str(small.preprocessing) == "16 * 5^(1)"
    assert str(small.query) == "256 * 5^(-1/2)"


def test_batch_size_infeasible_ratio():
    with pytest.raises(InfeasibleParameters):
        select_batch_size(2**20, Fraction(2), Fraction(1, 2), Fraction(1, 2))


def test_batch_size_empty_interval():
    # feasible ratio but the open interval (2^{1/2}, 2^{3/4}) holds no integer
    with pytest.raises(InfeasibleParameters):
        select_batch_size(2, Fraction(2), Fraction(1, 2), Fraction(1, 4))


def test_batch_size_validation():
    with pytest.raises(ParameterError):
        select_batch_size(1, Fraction(2), Fraction(1, 2), Fraction(1, 4))
    with pytest.raises(ParameterError):
        select_batch_size(16, Fraction(1), Fraction(1, 2), Fraction(1, 4))
    with pytest.raises(ParameterError):
        select_batch_size(16, Fraction(2), Fraction(3, 2), Fraction(1, 4))
    with pytest.raises(ParameterError):
        select_batch_size(16, Fraction(2), Fraction(1, 2), Fraction(0))


@given(
    st.integers(2, 2**16),
    st.fractions(min_value=Fraction(11, 10), max_value=Fraction(4), max_denominator=10),
    st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10), max_denominator=10),
    st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10), max_denominator=10),
)
def test_batch_size_strictly_inside_interval(n, c, delta, delta_prime):
    try:
        sel = select_batch_size(n, c, delta, delta_prime)
    except InfeasibleParameters:
        return
    lo, hi = sel.lower_exponent, sel.upper_exponent
    ell = sel.ell
    assert ell**lo.denominator > n**lo.numerator
    assert ell**hi.denominator < n**hi.numerator
    if ell > 1:
        assert (ell - 1) ** lo.denominator <= n**lo.numerator


# -- width calculator ---------------------------------------------------

def test_implied_gap_values():
    assert implied_gap(2) == Fraction(3)
    assert implied_gap(3) == Fraction(2)
    assert implied_gap(5) == Fraction(3, 2)
    with pytest.raises(ParameterError):
        implied_gap(1)
