"""Planted instance generators.

Every generator draws from a SplitMix64 stream seeded by the caller, so
(kind, params, seed) fully determines the output bits.  A requested label
is certified against the matching brute-force oracle before the instance
is returned; when planting or rejection sampling cannot deliver the label,
generation fails loudly instead of mislabeling.

The sampling distributions (uniform coordinates, planted witnesses,
density-biased families for containment-free sampling) are tooling
choices; nothing downstream may depend on them beyond the certified label.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from . import budgets
from .errors import GenerationError, ParameterError
from .instances import (
    AnnInstance,
    BcpInstance,
    CnfInstance,
    Instance,
    Lattice01Instance,
    SetFamilyInstance,
    rational_rank,
)
from .metric import ExactPoint, Label, Norm, ScaledMagnitude, dist_num, within_num
from .oracles import oracle_closest_pair, oracle_lattice01, oracle_sat, oracle_subset_query
from .rng import SplitMix64

RETRY_LIMIT = 64
FAMILY_RETRY_LIMIT = 256
CERTIFY_RANK_LIMIT = 20


def coerce_label(value) -> Label:
    if isinstance(value, Label):
        return value
    token = str(value).upper()
    for label in (Label.YES, Label.NO):
        if token == label.value:
            return label
    raise ParameterError(f"label must be YES or NO, got {value!r}")


def coerce_norm(value) -> Norm:
    if isinstance(value, Norm):
        return value
    return Norm.from_token(str(value))


def coerce_fraction(value) -> Fraction:
    return Fraction(value)


def _draw_coords(rng: SplitMix64, d: int, bound: int) -> tuple[int, ...]:
    return tuple(rng.integer(-bound, bound) for _ in range(d))


def _radius_from_min(min_num: int, gamma: Fraction, power: int) -> int:
    # largest integer r with min >= gamma * r (gamma squared for power 2)
    num, den = gamma.numerator, gamma.denominator
    if power == 2:
        num, den = num * num, den * den
    return (min_num * den) // num


def _certification_failed(kind: str, wanted: Label, got: Label):
    return GenerationError(
        f"{kind} generation produced a {got.value} instance while "
        f"{wanted.value} was requested; refusing to mislabel"
    )


def generate_bcp(
    seed: int,
    *,
    n_a: int = 8,
    n_b: int = 8,
    d: int = 3,
    p: Norm = Norm.LINF,
    label: Label = Label.YES,
    gamma: Fraction = Fraction(2),
    scale: int = 1,
    coord_bound: int = 50,
    noise_bound: int = 2,
    certify: bool = True,
) -> BcpInstance:
    """Planted closest-pair promise instance.

    YES plants one b point within a small noise ball of an a point and sets
    the radius to that planted distance.  NO measures the true minimum and
    shrinks the radius until the whole instance sits on the far side of
    gamma * r; when the minimum is too small for that, the draw is
    rejected and retried.
    """
    p, label, gamma = coerce_norm(p), coerce_label(label), coerce_fraction(gamma)
    rng = SplitMix64(seed)
    for _ in range(RETRY_LIMIT):
        a_rows = [_draw_coords(rng, d, coord_bound) for _ in range(n_a)]
        b_rows = [_draw_coords(rng, d, coord_bound) for _ in range(n_b)]
        if label is Label.YES:
            i, j = rng.below(n_a), rng.below(n_b)
            noise = _draw_coords(rng, d, noise_bound)
            b_rows[j] = tuple(x + e for x, e in zip(a_rows[i], noise))
            r_num = max(dist_num(a_rows[i], b_rows[j], p), 1)
        else:
            best = min(dist_num(a, b, p) for a in a_rows for b in b_rows)
            r_num = _radius_from_min(best, gamma, p.power)
            if r_num < 1:
                continue
        inst = BcpInstance(
            tuple(ExactPoint(c) for c in a_rows),
            tuple(ExactPoint(c) for c in b_rows),
            ScaledMagnitude(r_num, scale, p.power),
            gamma,
            p,
            scale,
        )
        if certify:
            got = oracle_closest_pair(inst).label
            if got is not label:
                raise _certification_failed("bcp", label, got)
        return inst
    raise GenerationError(
        f"could not plant a {label.value} bcp instance after {RETRY_LIMIT} attempts; "
        "widen coord_bound or lower gamma"
    )


def generate_ann(
    seed: int,
    *,
    n_data: int = 8,
    n_queries: int = 4,
    d: int = 3,
    p: Norm = Norm.LINF,
    label: Label = Label.YES,
    gamma: Fraction = Fraction(2),
    scale: int = 1,
    coord_bound: int = 50,
    noise_bound: int = 2,
    certify: bool = True,
) -> AnnInstance:
    """Planted near-neighbor instance; the label applies to every query.

    YES plants each query near some data point; NO rejects draws until all
    queries are at least gamma * r from all data points.
    """
    p, label, gamma = coerce_norm(p), coerce_label(label), coerce_fraction(gamma)
    rng = SplitMix64(seed)
    for _ in range(RETRY_LIMIT):
        data = [_draw_coords(rng, d, coord_bound) for _ in range(n_data)]
        if label is Label.YES:
            queries = []
            r_num = 1
            for _ in range(n_queries):
                anchor = data[rng.below(n_data)]
                noise = _draw_coords(rng, d, noise_bound)
                q = tuple(x + e for x, e in zip(anchor, noise))
                queries.append(q)
                r_num = max(r_num, dist_num(anchor, q, p))
        else:
            queries = [_draw_coords(rng, d, coord_bound) for _ in range(n_queries)]
            best = min(dist_num(q, a, p) for q in queries for a in data)
            r_num = _radius_from_min(best, gamma, p.power)
            if r_num < 1:
                continue
        inst = AnnInstance(
            tuple(ExactPoint(c) for c in data),
            tuple(ExactPoint(c) for c in queries),
            ScaledMagnitude(r_num, scale, p.power),
            gamma,
            p,
            scale,
        )
        if certify and not _ann_label_holds(inst, label):
            raise _certification_failed("ann", label, _other(label))
        return inst
    raise GenerationError(
        f"could not plant a {label.value} ann instance after {RETRY_LIMIT} attempts"
    )


def _other(label: Label) -> Label:
    return Label.NO if label is Label.YES else Label.YES


def _ann_label_holds(inst: AnnInstance, label: Label) -> bool:
    data = [pt.coords for pt in inst.data]
    r_num = inst.r.value
    if label is Label.YES:
        return all(
            any(within_num(q.coords, a, inst.p, r_num) for a in data) for q in inst.queries
        )
    probe = BcpInstance(inst.data, inst.queries, inst.r, inst.gamma, inst.p, inst.scale)
    return oracle_closest_pair(probe).label is Label.NO


def generate_lattice01(
    seed: int,
    *,
    n: int,
    d: int | None = None,
    p: Norm = Norm.LINF,
    label: Label = Label.YES,
    gamma: Fraction = Fraction(2),
    scale: int = 1,
    coord_bound: int = 8,
    with_target: bool = False,
    certify: bool = True,
) -> Lattice01Instance:
    """Planted binary-coefficient lattice promise instance.

    YES embeds a random coefficient vector and sets the radius to its norm
    (for the target variant, to the norm of the planted offset).  NO runs
    the oracle on the drawn basis and shrinks the radius below the true
    minimum; that requires the rank to be within the certification limit.
    """
    p, label, gamma = coerce_norm(p), coerce_label(label), coerce_fraction(gamma)
    if d is None:
        d = n
    if d < n:
        raise ParameterError("rank cannot exceed the ambient dimension")
    if label is Label.NO and n > CERTIFY_RANK_LIMIT:
        raise GenerationError(
            f"NO instances need oracle certification, capped at rank {CERTIFY_RANK_LIMIT}"
        )
    rng = SplitMix64(seed)
    for _ in range(RETRY_LIMIT):
        rows = [_draw_coords(rng, d, coord_bound) for _ in range(n)]
        if rational_rank(rows) != n:
            continue
        basis = tuple(ExactPoint(r_) for r_ in rows)
        target = None
        if label is Label.YES:
            if with_target:
                alpha = rng.mask(n)
                noise = _draw_coords(rng, d, 1)
                anchor = _combine(rows, alpha, d)
                target = ExactPoint(tuple(x + e for x, e in zip(anchor, noise)))
                r_num = max(dist_num(anchor, target.coords, p), 1)
            else:
                alpha = 1 + rng.below((1 << n) - 1) if n > 1 else 1
                vec = _combine(rows, alpha, d)
                r_num = dist_num(vec, (0,) * d, p)
        else:
            if with_target:
                target = ExactPoint(_draw_coords(rng, d, coord_bound))
            probe = Lattice01Instance(
                basis, ScaledMagnitude(1, scale, p.power), gamma, p, scale, target
            )
            best = oracle_lattice01(probe).exact_min.value
            r_num = _radius_from_min(best, gamma, p.power)
            if r_num < 1:
                continue
        inst = Lattice01Instance(
            basis, ScaledMagnitude(r_num, scale, p.power), gamma, p, scale, target
        )
        if certify and n <= CERTIFY_RANK_LIMIT:
            got = oracle_lattice01(inst).label
            if got is not label:
                raise _certification_failed("lattice01", label, got)
        return inst
    raise GenerationError(
        f"could not plant a {label.value} lattice01 instance after {RETRY_LIMIT} attempts; "
        "widen coord_bound or lower gamma"
    )


def _combine(rows: list[tuple[int, ...]], alpha: int, d: int) -> tuple[int, ...]:
    acc = [0] * d
    for j, row in enumerate(rows):
        if (alpha >> j) & 1:
            acc = [x + y for x, y in zip(acc, row)]
    return tuple(acc)


def generate_setfamily(
    seed: int,
    *,
    n_supersets: int = 8,
    n_subsets: int = 8,
    d: int = 12,
    label: Label = Label.YES,
) -> SetFamilyInstance:
    """Planted containment instance over [d].

    YES overwrites one subset-side set with a random subset of a
    superset-side set.  NO rejection-samples families (denser on the
    subset side, which makes accidental containment rare) until the full
    scan finds no containment.
    """
    label = coerce_label(label)
    rng = SplitMix64(seed)
    if label is Label.YES:
        supersets = tuple(rng.mask(d) for _ in range(n_supersets))
        subsets = [rng.mask(d) for _ in range(n_subsets)]
        i, j = rng.below(n_subsets), rng.below(n_supersets)
        subsets[i] = supersets[j] & rng.mask(d)
        inst = SetFamilyInstance(d, supersets, tuple(subsets))
        got = oracle_subset_query(inst).label
        if got is not label:
            raise _certification_failed("setfamily", label, got)
        return inst
    for _ in range(FAMILY_RETRY_LIMIT):
        supersets = tuple(rng.mask(d) for _ in range(n_supersets))
        subsets = tuple(
            sum((1 << j) for j in range(d) if rng.chance(7, 10)) for _ in range(n_subsets)
        )
        inst = SetFamilyInstance(d, supersets, subsets)
        if oracle_subset_query(inst).label is Label.NO:
            return inst
    raise GenerationError(
        f"could not sample a containment-free family after {FAMILY_RETRY_LIMIT} attempts; "
        "increase d or shrink the families"
    )


def generate_cnf(
    seed: int,
    *,
    n: int,
    m: int,
    k: int = 3,
    label: Label | None = None,
    certify: bool = True,
) -> CnfInstance:
    """Random width-k CNF over n variables with m clauses.

    label None draws uniformly and certifies nothing.  YES plants a random
    assignment and patches each clause to contain a literal it satisfies.
    NO seeds the formula with all 2^k sign patterns over one k-tuple of
    variables (an unsatisfiable core) and pads with uniform clauses.
    """
    if label is not None:
        label = coerce_label(label)
    if k < 1 or k > n:
        raise ParameterError("clause width must be between 1 and n")
    rng = SplitMix64(seed)

    def random_clause() -> tuple[int, ...]:
        variables = rng.distinct(n, k)
        return tuple(
            (v + 1) if rng.chance(1, 2) else -(v + 1) for v in variables
        )

    if label is None:
        clauses = tuple(random_clause() for _ in range(m))
        return CnfInstance(n, k, clauses)

    if label is Label.YES:
        assignment = tuple(1 if rng.chance(1, 2) else 0 for _ in range(n))
        clauses = []
        for _ in range(m):
            clause = list(random_clause())
            if not any(_lit_true(lit, assignment) for lit in clause):
                fix = rng.below(k)
                var = abs(clause[fix])
                clause[fix] = var if assignment[var - 1] else -var
            clauses.append(tuple(clause))
        inst = CnfInstance(n, k, tuple(clauses))
    else:
        core_size = 1 << k
        if m < core_size:
            raise ParameterError(f"an unsatisfiable core needs at least {core_size} clauses")
        core_vars = [v + 1 for v in rng.distinct(n, k)]
        core = [
            tuple(v if (pattern >> idx) & 1 else -v for idx, v in enumerate(core_vars))
            for pattern in range(core_size)
        ]
        padding = [random_clause() for _ in range(m - core_size)]
        inst = CnfInstance(n, k, tuple(core + padding))
    if certify and n <= budgets.cap(budgets.SAT_ORACLE_VAR_CAP):
        got = oracle_sat(inst).label
        if got is not label:
            raise _certification_failed("cnf", label, got)
    return inst


def _lit_true(lit: int, assignment: tuple[int, ...]) -> bool:
    value = assignment[abs(lit) - 1]
    return bool(value) if lit > 0 else not value


_GENERATORS = {
    "ann": generate_ann,
    "bcp": generate_bcp,
    "lattice01": generate_lattice01,
    "setfamily": generate_setfamily,
    "cnf": generate_cnf,
}


def generate(kind: str, params: Mapping, seed: int) -> Instance:
    """Dispatch to the generator for `kind` with keyword params."""
    try:
        fn = _GENERATORS[kind]
    except KeyError:
        raise ParameterError(f"unknown instance kind {kind!r}") from None
    return fn(seed, **dict(params))
