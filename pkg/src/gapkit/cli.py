"""Command-line front end.

Subcommands: gen (planted instances), reduce (single reduction steps),
solve (solvers and oracles on instance files), verify (randomized
self-checks of the library's claims), bench (scaling fits), gadget
(distance-gadget search and the factor-3 bound), params (parameter-regime
helpers).

Exit codes: 0 success; 1 a semantic check failed (--expect mismatch, a
verify claim, the gadget bound, infeasible parameters); 2 bad usage or
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import ceil

from . import barrier as _barrier
from .bench import CSV_HEADER, PROBLEM_SOLVERS, bench_scaling, write_csv
from .errors import GapkitError, InfeasibleParameters
from .generators import generate, generate_bcp, generate_cnf, generate_lattice01
from .instances import (
    AnnInstance,
    BcpInstance,
    CnfInstance,
    Instance,
    KINDS,
    Lattice01Instance,
    SetFamilyInstance,
    load_instance,
    serialize_instance,
    store_instance,
)
from .metric import ExactPoint, Label, Norm, dist_num
from .oracles import (
    OracleVerdict,
    oracle_closest_pair,
    oracle_lattice01,
    oracle_sat,
    oracle_subset_query,
)
from .reductions import (
    convert_ov_bsq,
    embed_subsetquery_to_bcp,
    implied_gap,
    reduce_ksat_to_bisq,
    reduce_lattice01_to_bcp,
    select_batch_size,
    solve_bcp_via_ann,
)
from .rng import SplitMix64
from .solvers import (
    AnnKind,
    BcpStrategy,
    CostCounters,
    ann_build,
    bcp_solve,
    solve_cnf_via_bcp,
    svp01_mitm,
)


class CheckFailed(Exception):
    """A verify claim or expectation did not hold."""


# -- small shared helpers -----------------------------------------------

def _parse_value(text: str):
    """Literal for a --set value: int, fraction, bool, or plain string."""
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text, 10)
    except ValueError:
        pass
    if "/" in text:
        try:
            return Fraction(text)
        except ValueError:
            pass
    return text


def _parse_sets(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise GapkitError(f"--set expects key=value, got {pair!r}")
        params[key.replace("-", "_")] = _parse_value(value)
    return params


def _int_list(text: str) -> list[int]:
    try:
        return [int(part, 10) for part in text.split(",") if part != ""]
    except ValueError:
        raise GapkitError(f"expected a comma-separated integer list, got {text!r}")


def _emit_instance(inst: Instance, path: str | None) -> None:
    if path is None:
        sys.stdout.write(serialize_instance(inst).decode("utf-8"))
    else:
        store_instance(inst, path)


def _witness_doc(witness):
    if witness is None:
        return None
    return [str(v) for v in witness]


def _counters_doc(counters: CostCounters) -> dict:
    return {key: str(val) for key, val in counters.as_dict().items()}


def _result_doc(label: Label, witness, counters: CostCounters | None) -> dict:
    doc = {"label": label.value, "witness": _witness_doc(witness)}
    if counters is not None:
        doc["counters"] = _counters_doc(counters)
    return doc


def _oracle_doc(verdict: OracleVerdict) -> dict:
    doc = {
        "label": verdict.label.value,
        "witness": _witness_doc(verdict.witness),
        "enumerated": str(verdict.enumerated),
    }
    if verdict.exact_min is not None:
        doc["exact_min"] = {
            "value": str(verdict.exact_min.value),
            "scale": str(verdict.exact_min.scale),
            "power": str(verdict.exact_min.power),
        }
    return doc


def _print_doc(doc) -> None:
    sys.stdout.write(json.dumps(doc, separators=(",", ":")) + "\n")


def _magnitude_str(mag) -> str:
    return str(mag.as_fraction())


# -- gen ----------------------------------------------------------------

def cmd_gen(args) -> int:
    params = _parse_sets(args.set)
    inst = generate(args.kind, params, args.seed)
    _emit_instance(inst, args.out)
    return 0


# -- reduce -------------------------------------------------------------

_REDUCE_STEPS = ("lattice-to-pair", "sat-to-family", "family-to-pair", "ov-to-bsq", "bsq-to-ov")


def _expect_kind(inst: Instance, want, step: str) -> None:
    if not isinstance(inst, want):
        raise GapkitError(
            f"step {step} needs a {want.__name__} input, got {type(inst).__name__}"
        )


def cmd_reduce(args) -> int:
    inst = load_instance(args.input)
    step = args.step
    if step == "lattice-to-pair":
        _expect_kind(inst, Lattice01Instance, step)
        output = reduce_lattice01_to_bcp(inst)
        produced = list(output.instances)
        note = f"{len(produced)} instance(s), recombination {output.recombination.value}"
    elif step == "sat-to-family":
        _expect_kind(inst, CnfInstance, step)
        output = reduce_ksat_to_bisq(inst)
        produced = list(output.instances)
        note = f"1 instance, recombination {output.recombination.value}"
    elif step == "family-to-pair":
        _expect_kind(inst, SetFamilyInstance, step)
        produced = [embed_subsetquery_to_bcp(inst, transposed=args.transposed)]
        note = "1 instance"
    else:
        _expect_kind(inst, SetFamilyInstance, step)
        produced = [convert_ov_bsq(step, inst)]
        note = "1 instance"
    if args.out is None:
        for sub in produced:
            sys.stdout.write(serialize_instance(sub).decode("utf-8"))
    else:
        for idx, sub in enumerate(produced):
            store_instance(sub, f"{args.out}-{idx}.json")
    print(note, file=sys.stderr)
    return 0


# -- solve --------------------------------------------------------------

_AUTO_SOLVER = {
    BcpInstance: "brute",
    Lattice01Instance: "mitm",
    CnfInstance: "pipeline",
    SetFamilyInstance: "oracle",
    AnnInstance: "linear",
}


def _solve_instance(inst: Instance, solver: str, ell: int | None):
    """Run one solver; returns (doc, labels) where labels drive --expect."""
    counters = CostCounters()
    if isinstance(inst, BcpInstance):
        if solver == "oracle":
            verdict = oracle_closest_pair(inst)
            return _oracle_doc(verdict), [verdict.label]
        if solver in ("brute", "pruned"):
            result = bcp_solve(inst, BcpStrategy.from_token(solver), counters)
            return _result_doc(result.label, result.witness, counters), [result.label]
        if solver in ("batched-linear", "batched-grid"):
            kind = AnnKind.LINEAR if solver == "batched-linear" else AnnKind.GRID
            side = inst.r.value if kind is AnnKind.GRID else None
            factory = lambda pts: ann_build(pts, inst.p, kind, side, counters)
            batch = ell if ell is not None else len(inst.a_points)
            label = solve_bcp_via_ann(inst, factory, batch)
            return _result_doc(label, None, counters), [label]
    elif isinstance(inst, Lattice01Instance):
        if solver == "oracle":
            verdict = oracle_lattice01(inst)
            return _oracle_doc(verdict), [verdict.label]
        if solver == "mitm":
            result = svp01_mitm(inst, counters=counters)
            return _result_doc(result.label, result.witness, counters), [result.label]
    elif isinstance(inst, CnfInstance):
        if solver == "oracle":
            verdict = oracle_sat(inst)
            return _oracle_doc(verdict), [verdict.label]
        if solver == "pipeline":
            result = solve_cnf_via_bcp(inst, counters=counters)
            return _result_doc(result.label, result.witness, counters), [result.label]
    elif isinstance(inst, SetFamilyInstance):
        if solver == "oracle":
            verdict = oracle_subset_query(inst)
            return _oracle_doc(verdict), [verdict.label]
    elif isinstance(inst, AnnInstance):
        if solver in ("linear", "grid"):
            kind = AnnKind.LINEAR if solver == "linear" else AnnKind.GRID
            side = inst.r.value if kind is AnnKind.GRID else None
            structure = ann_build(inst.data, inst.p, kind, side, counters)
            labels = [structure.query(q, inst.r, inst.gamma) for q in inst.queries]
            doc = {
                "labels": [lab.value for lab in labels],
                "counters": _counters_doc(counters),
            }
            return doc, labels
    raise GapkitError(
        f"solver {solver!r} does not apply to a {type(inst).__name__} input"
    )


def cmd_solve(args) -> int:
    inst = load_instance(args.input)
    solver = args.solver
    if solver == "auto":
        solver = _AUTO_SOLVER[type(inst)]
    doc, labels = _solve_instance(inst, solver, args.ell)
    _print_doc(doc)
    if args.expect is not None:
        want = Label(args.expect)
        bad = [lab for lab in labels if lab is not want]
        if bad:
            print(
                f"expected {want.value}, got {bad[0].value}", file=sys.stderr
            )
            return 1
    return 0


# -- verify -------------------------------------------------------------

def _combine(basis: tuple[ExactPoint, ...], mask: int) -> tuple[int, ...]:
    d = basis[0].dim
    out = [0] * d
    for j in range(len(basis)):
        if (mask >> j) & 1:
            row = basis[j].coords
            for i in range(d):
                out[i] += row[i]
    return tuple(out)


def _clause_satisfied(clause, assignment) -> bool:
    return any(
        (assignment[lit - 1] == 1) if lit > 0 else (assignment[-lit - 1] == 0)
        for lit in clause
    )


def check_set_identity(trials: int, seed: int, max_rank: int) -> int:
    """The emitted pair grids' difference sets equal the non-zero (or,
    with a target, shifted full) coefficient combinations."""
    rng = SplitMix64(seed)
    checks = 0
    for trial in range(trials):
        n = rng.integer(2, max_rank)
        with_target = rng.chance(1, 3)
        inst = generate_lattice01(
            rng.next_u64() >> 1, n=n, with_target=with_target, certify=False
        )
        output = reduce_lattice01_to_bcp(inst)
        basis = inst.basis
        diffs = set()
        for idx, sub in enumerate(output.instances):
            prov = output.provenance[idx]
            for i, a in enumerate(sub.a_points):
                for j, b in enumerate(sub.b_points):
                    diff = tuple(x - y for x, y in zip(a.coords, b.coords))
                    alpha = prov.a_sources[i] + prov.b_sources[j]
                    mask = sum(bit << pos for pos, bit in enumerate(alpha))
                    want = _combine(basis, mask)
                    if with_target:
                        want = tuple(w - t for w, t in zip(want, inst.target.coords))
                    if diff != want:
                        raise CheckFailed(
                            f"trial {trial}: pair ({i},{j}) of instance {idx} "
                            f"recovers {alpha} but the difference is {diff}"
                        )
                    diffs.add(diff)
                    checks += 1
        if with_target:
            wanted = {
                tuple(
                    c - t
                    for c, t in zip(_combine(basis, mask), inst.target.coords)
                )
                for mask in range(1 << n)
            }
        else:
            wanted = {_combine(basis, mask) for mask in range(1, 1 << n)}
        if diffs != wanted:
            raise CheckFailed(
                f"trial {trial}: difference set has {len(diffs)} tuples, "
                f"expected {len(wanted)}"
            )
    return checks


def check_mitm(trials: int, seed: int, max_rank: int) -> int:
    """The split solver agrees with full enumeration and its witnesses
    are genuine."""
    rng = SplitMix64(seed)
    checks = 0
    for trial in range(trials):
        n = rng.integer(2, max_rank)
        label = Label.YES if rng.chance(1, 2) else Label.NO
        with_target = rng.chance(1, 3)
        p = (Norm.L1, Norm.L2, Norm.LINF)[rng.below(3)]
        inst = generate_lattice01(
            rng.next_u64() >> 1, n=n, p=p, label=label, with_target=with_target
        )
        got = svp01_mitm(inst)
        want = oracle_lattice01(inst)
        if got.label is not want.label:
            raise CheckFailed(
                f"trial {trial}: split solver says {got.label.value}, "
                f"enumeration says {want.label.value}"
            )
        if got.label is Label.YES:
            alpha = got.witness
            mask = sum(bit << pos for pos, bit in enumerate(alpha))
            vec = _combine(inst.basis, mask)
            if inst.target is not None:
                vec = tuple(v - t for v, t in zip(vec, inst.target.coords))
            elif mask == 0:
                raise CheckFailed(f"trial {trial}: zero witness on the no-target kind")
            norm = dist_num(vec, (0,) * len(vec), p)
            if norm > inst.r.value:
                raise CheckFailed(
                    f"trial {trial}: witness norm {norm} exceeds the radius"
                )
        checks += 1
    return checks


def check_embedding(max_dim: int) -> int:
    """Exhaustively: embedded distance is small exactly on contained
    pairs, and the two coordinate tables realize only two distances."""
    checks = 0
    for d in range(1, max_dim + 1):
        masks = tuple(range(1 << d))
        fam = SetFamilyInstance(d, masks, masks)
        for transposed in (False, True):
            bcp = embed_subsetquery_to_bcp(fam, transposed=transposed)
            for j, a in enumerate(bcp.a_points):
                for i, b in enumerate(bcp.b_points):
                    val = dist_num(a.coords, b.coords, Norm.LINF)
                    if transposed:
                        contained = masks[j] & ~masks[i] == 0
                    else:
                        contained = masks[i] & ~masks[j] == 0
                    want = 1 if contained else 3
                    if val != want:
                        raise CheckFailed(
                            f"d={d} transposed={transposed}: supersets[{j}], "
                            f"subsets[{i}] sit at {val}/3, expected {want}/3"
                        )
                    checks += 1
    return checks


def check_pipeline(trials: int, seed: int) -> int:
    """The full chain agrees with direct assignment enumeration."""
    rng = SplitMix64(seed)
    checks = 0
    for trial in range(trials):
        n = rng.integer(3, 10)
        m = rng.integer(1, 16)
        k = rng.integer(1, min(3, n))
        inst = generate_cnf(rng.next_u64() >> 1, n=n, m=m, k=k)
        got = solve_cnf_via_bcp(inst)
        want = oracle_sat(inst)
        if got.label is not want.label:
            raise CheckFailed(
                f"trial {trial}: pipeline says {got.label.value}, "
                f"enumeration says {want.label.value}"
            )
        if got.label is Label.YES:
            if not all(_clause_satisfied(cl, got.witness) for cl in inst.clauses):
                raise CheckFailed(f"trial {trial}: pipeline witness falsifies a clause")
        checks += 1
    return checks


def check_batching(trials: int, seed: int) -> int:
    """Batched structures answer like the oracle and issue exactly the
    contracted numbers of builds and queries."""
    rng = SplitMix64(seed)
    checks = 0
    for trial in range(trials):
        n_a = rng.integer(1, 24)
        n_b = rng.integer(1, 12)
        label = Label.YES if rng.chance(1, 2) else Label.NO
        # low dimension + many pairs makes NO unplantable in a tight range
        inst = generate_bcp(
            rng.next_u64() >> 1,
            n_a=n_a,
            n_b=n_b,
            d=rng.integer(1, 4),
            label=label,
            coord_bound=max(50, 4 * n_a * n_b),
        )
        ell = rng.integer(1, n_a)
        use_grid = rng.chance(1, 2)
        counters = CostCounters()
        kind = AnnKind.GRID if use_grid else AnnKind.LINEAR
        side = inst.r.value if use_grid else None
        got = solve_bcp_via_ann(
            inst, lambda pts: ann_build(pts, inst.p, kind, side, counters), ell
        )
        if got is not label:
            raise CheckFailed(
                f"trial {trial}: batched solver ({kind.value}) says {got.value}, "
                f"planted {label.value}"
            )
        builds = ceil(n_a / ell)
        if counters.structure_builds != builds:
            raise CheckFailed(
                f"trial {trial}: {counters.structure_builds} builds, expected {builds}"
            )
        if counters.structure_queries != n_b * builds:
            raise CheckFailed(
                f"trial {trial}: {counters.structure_queries} queries, "
                f"expected {n_b * builds}"
            )
        checks += 1
    return checks


def check_batch_size(trials: int, seed: int) -> int:
    """Selected batch sizes sit strictly inside the open interval, are
    minimal, and infeasibility is declared exactly when warranted."""
    rng = SplitMix64(seed)
    checks = 0
    for trial in range(trials):
        n_points = 1 << rng.integer(1, 20)
        if rng.chance(1, 3):
            n_points += rng.below(n_points)
        c = Fraction(rng.integer(3, 8), 2)
        delta = Fraction(rng.integer(1, 9), 10)
        delta_prime = Fraction(rng.integer(1, 9), 10)
        ratio_ok = delta_prime / (1 - delta_prime) < delta / (c - 1)
        try:
            sel = select_batch_size(n_points, c, delta, delta_prime)
        except InfeasibleParameters:
            if ratio_ok:
                lower = delta_prime / delta
                upper = (1 - delta_prime) / (c - 1)
                for ell in range(2, n_points + 1):
                    below = ell**lower.denominator > n_points**lower.numerator
                    above = ell**upper.denominator < n_points**upper.numerator
                    if below and above:
                        raise CheckFailed(
                            f"trial {trial}: declared infeasible but ell={ell} fits"
                        )
                    if not above:
                        break
            checks += 1
            continue
        ell = sel.ell
        lower, upper = sel.lower_exponent, sel.upper_exponent
        if not ell**lower.denominator > n_points**lower.numerator:
            raise CheckFailed(f"trial {trial}: ell={ell} is not above the lower bound")
        if not ell**upper.denominator < n_points**upper.numerator:
            raise CheckFailed(f"trial {trial}: ell={ell} is not below the upper bound")
        if ell > 1 and (ell - 1) ** lower.denominator > n_points**lower.numerator:
            raise CheckFailed(f"trial {trial}: ell={ell} is not minimal")
        checks += 1
    return checks


def check_barrier(trials: int, seed: int, max_dim: int) -> int:
    """Random gadgets over max-norm points never separate by more than 3,
    and non-metric tables are rejected."""
    rng = SplitMix64(seed)
    checks = 0
    for trial in range(trials):
        d = rng.integer(1, max_dim)
        ambient = rng.integer(1, 2)
        n_points = rng.integer(2, 6)
        points = tuple(
            tuple(rng.below(8) for _ in range(ambient)) for _ in range(n_points)
        )
        space = _barrier.PointSpace(tuple(ExactPoint(pt) for pt in points))
        tables = _barrier.GadgetTables(
            d,
            tuple(rng.below(n_points) for _ in range(1 << d)),
            tuple(rng.below(n_points) for _ in range(1 << d)),
            space,
        )
        cert = _barrier.verify_barrier(tables)
        if not cert.holds:
            raise CheckFailed(
                f"trial {trial}: a max-norm gadget broke the factor-3 bound "
                f"(gap {cert.report.gap})"
            )
        table = tuple(
            tuple(space.dist(i, j) for j in range(n_points)) for i in range(n_points)
        )
        explicit = _barrier.ExplicitSpace(table)
        if _barrier.check_triangle(explicit) is not None:
            raise CheckFailed(f"trial {trial}: a norm-induced table failed the triangle")
        if n_points >= 2 and table[0][1] > 0:
            bad = [list(row) for row in table]
            bad[0][1] = bad[0][1] + 1
            try:
                _barrier.check_triangle(_barrier.ExplicitSpace(tuple(map(tuple, bad))))
            except GapkitError:
                pass
            else:
                raise CheckFailed(f"trial {trial}: an asymmetric table was accepted")
        checks += 1
    return checks


def check_counters(max_rank: int) -> int:
    """The split solver materializes exactly the closed-form number of
    candidates."""
    checks = 0
    for n in range(2, max_rank + 1):
        inst = generate_lattice01(1000 + n, n=n, certify=False)
        counters = CostCounters()
        svp01_mitm(inst, counters=counters)
        want = 2 ** ((n + 1) // 2 + 1) + 2 ** (n // 2 + 1) - 2
        if counters.candidates_materialized != want:
            raise CheckFailed(
                f"rank {n}: materialized {counters.candidates_materialized}, "
                f"closed form says {want}"
            )
        cvp = generate_lattice01(2000 + n, n=n, with_target=True, certify=False)
        counters = CostCounters()
        svp01_mitm(cvp, counters=counters)
        want = 2 ** ((n + 1) // 2) + 2 ** (n // 2)
        if counters.candidates_materialized != want:
            raise CheckFailed(
                f"rank {n} with target: materialized "
                f"{counters.candidates_materialized}, closed form says {want}"
            )
        checks += 1
    return checks


_CLAIMS = (
    "set-identity",
    "mitm",
    "embedding",
    "pipeline",
    "batching",
    "batch-size",
    "barrier",
    "counters",
)


def _run_claim(claim: str, args) -> int:
    trials, seed = args.trials, args.seed
    if claim == "set-identity":
        return check_set_identity(trials, seed, min(args.max_rank, 10))
    if claim == "mitm":
        return check_mitm(trials, seed, args.max_rank)
    if claim == "embedding":
        return check_embedding(args.dim)
    if claim == "pipeline":
        return check_pipeline(trials, seed)
    if claim == "batching":
        return check_batching(trials, seed)
    if claim == "batch-size":
        return check_batch_size(trials, seed)
    if claim == "barrier":
        return check_barrier(trials, seed, args.dim)
    return check_counters(args.max_rank)


def cmd_verify(args) -> int:
    claims = _CLAIMS if args.claim == "all" else (args.claim,)
    failed = False
    for claim in claims:
        try:
            count = _run_claim(claim, args)
        except CheckFailed as exc:
            print(f"claim {claim}: FAIL  {exc}")
            failed = True
        else:
            print(f"claim {claim}: ok ({count} checks)")
    return 1 if failed else 0


# -- bench --------------------------------------------------------------

def cmd_bench(args) -> int:
    sizes = _int_list(args.sizes)
    seeds = _int_list(args.seeds)
    rows, fit = bench_scaling(args.problem, args.solver, sizes, seeds, args.counter)
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            write_csv(rows, handle)
    print(
        f"{args.problem}/{args.solver} {args.counter}: slope={fit.slope:.4f} "
        f"intercept={fit.intercept:.4f} rms={fit.rms_residual:.4f} "
        f"rows={len(rows)}"
    )
    return 0


# -- gadget -------------------------------------------------------------

def _print_report(report) -> None:
    gap = "inf" if report.kind is _barrier.GapKind.INFINITE else str(report.gap)
    print(
        f"kind={report.kind.value} gap={gap} "
        f"yes_max={_magnitude_str(report.yes_max)} "
        f"no_min={_magnitude_str(report.no_min)}"
    )


def cmd_gadget(args) -> int:
    if args.action == "search":
        result = _barrier.search_best_gadget(
            args.dim, tuple(_int_list(args.grid)), args.ambient, args.scale
        )
        if result.best is None:
            print(f"no separating gadget among {result.enumerated} assignments")
            return 1
        _print_report(result.best)
        print(f"assignments={result.enumerated}")
        if args.out is not None:
            with open(args.out, "wb") as handle:
                handle.write(_barrier.serialize_gadget(result.gadget))
        return 0
    with open(args.input, "rb") as handle:
        gadget = _barrier.parse_gadget(handle.read())
    if args.action == "eval":
        _print_report(_barrier.gadget_gap(gadget))
        return 0
    cert = _barrier.verify_barrier(gadget)
    _print_report(cert.report)
    if cert.holds:
        print("bound holds")
        return 0
    chain = cert.counterexample
    print(
        f"bound violated: element {chain.element} with masks "
        f"S={chain.s_mask:b} T={chain.t_mask:b}; distance {chain.big} "
        f"exceeds legs {chain.legs}"
    )
    return 1


# -- params -------------------------------------------------------------

def cmd_params(args) -> int:
    if args.topic == "gap":
        print(str(implied_gap(args.width)))
        return 0
    try:
        sel = select_batch_size(
            args.points, Fraction(args.approx), Fraction(args.delta),
            Fraction(args.delta_prime),
        )
    except InfeasibleParameters as exc:
        print(f"infeasible: {exc}")
        return 1
    print(
        f"ell={sel.ell} interval=(N^{sel.lower_exponent}, N^{sel.upper_exponent}) "
        f"preprocessing={sel.preprocessing} query={sel.query}"
    )
    return 0


# -- parser -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapkit",
        description="planted instances, reductions, and exact solvers "
        "for gapped proximity problems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a planted instance")
    gen.add_argument("kind", choices=KINDS)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", default=None, help="file path (default stdout)")
    gen.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="generator parameter, repeatable",
    )
    gen.set_defaults(func=cmd_gen)

    red = sub.add_parser("reduce", help="apply one reduction step")
    red.add_argument("step", choices=_REDUCE_STEPS)
    red.add_argument("--in", dest="input", required=True)
    red.add_argument(
        "--out", default=None, help="output path prefix (default stdout)"
    )
    red.add_argument("--transposed", action="store_true")
    red.set_defaults(func=cmd_reduce)

    solve = sub.add_parser("solve", help="run a solver or oracle on an instance")
    solve.add_argument("--in", dest="input", required=True)
    solve.add_argument(
        "--solver",
        default="auto",
        choices=(
            "auto", "brute", "pruned", "batched-linear", "batched-grid",
            "mitm", "pipeline", "oracle", "linear", "grid",
        ),
    )
    solve.add_argument("--ell", type=int, default=None, help="batch size")
    solve.add_argument("--expect", choices=[lab.value for lab in Label])
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="randomized self-checks")
    verify.add_argument("claim", choices=_CLAIMS + ("all",))
    verify.add_argument("--trials", type=int, default=25)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--max-rank", type=int, default=10)
    verify.add_argument("--dim", type=int, default=3)
    verify.set_defaults(func=cmd_verify)

    bench = sub.add_parser("bench", help="scaling fit over planted instances")
    bench.add_argument("--problem", choices=tuple(PROBLEM_SOLVERS), required=True)
    bench.add_argument("--solver", required=True)
    bench.add_argument("--sizes", required=True, help="comma-separated sizes")
    bench.add_argument("--seeds", default="0", help="comma-separated seeds")
    bench.add_argument(
        "--counter",
        default="distance_evals",
        help="counter column to fit (default distance_evals)",
    )
    bench.add_argument("--csv", default=None, help=f"write rows ({CSV_HEADER})")
    bench.set_defaults(func=cmd_bench)

    gadget = sub.add_parser("gadget", help="distance gadgets and the factor-3 bound")
    gsub = gadget.add_subparsers(dest="action", required=True)
    search = gsub.add_parser("search", help="exhaust tiny gadget spaces")
    search.add_argument("--dim", type=int, default=1)
    search.add_argument("--grid", default="0,1,2,3", help="coordinate values")
    search.add_argument("--ambient", type=int, default=1)
    search.add_argument("--scale", type=int, default=1)
    search.add_argument("--out", default=None)
    geval = gsub.add_parser("eval", help="report a gadget's distance extremes")
    geval.add_argument("--in", dest="input", required=True)
    gcheck = gsub.add_parser("check", help="verify the factor-3 bound")
    gcheck.add_argument("--in", dest="input", required=True)
    gadget.set_defaults(func=cmd_gadget)

    params = sub.add_parser("params", help="parameter-regime helpers")
    psub = params.add_subparsers(dest="topic", required=True)
    batch = psub.add_parser("batch", help="smallest useful batch size")
    batch.add_argument("--points", type=int, required=True)
    batch.add_argument("--approx", required=True, help="preprocessing exponent c")
    batch.add_argument("--delta", required=True)
    batch.add_argument("--delta-prime", dest="delta_prime", required=True)
    gap = psub.add_parser("gap", help="separation implied by a clause width")
    gap.add_argument("--width", type=int, required=True)
    params.set_defaults(func=cmd_params)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GapkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
