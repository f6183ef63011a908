"""Scaling benchmarks over planted instances.

Runs a solver across a ladder of instance sizes, records the operation
counters per run, and fits a straight line to log2(counter) against the
size exponent.  The slope is the empirical growth exponent: quadratic
pair scans fit near 2 in log2(N), full coefficient enumeration near 1 in
the rank, and the split solver near 1/2 in the rank.  Counters rather
than wall time carry the signal; wall time is recorded per row for
context only.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import ParameterError
from .generators import generate_bcp, generate_lattice01
from .metric import Label, Norm
from .oracles import oracle_closest_pair, oracle_lattice01
from .solvers import BcpStrategy, CostCounters, bcp_solve, svp01_mitm

CSV_HEADER = (
    "problem,solver,N,n,d,seed,verdict,distance_evals,structure_builds,"
    "structure_queries,candidates_materialized,wall_time_ns"
)

PROBLEM_SOLVERS = {
    "bcp": ("brute", "pruned", "oracle"),
    "svp01": ("oracle", "mitm"),
}

COUNTER_NAMES = (
    "distance_evals",
    "structure_builds",
    "structure_queries",
    "candidates_materialized",
)


@dataclass(frozen=True)
class BenchRow:
    """One solver run; size fields that do not apply stay None."""

    problem: str
    solver: str
    n_points: int | None
    rank: int | None
    dim: int
    seed: int
    verdict: Label
    counters: CostCounters
    wall_time_ns: int

    def to_fields(self) -> list[str]:
        blank = lambda v: "" if v is None else str(v)
        c = self.counters
        return [
            self.problem,
            self.solver,
            blank(self.n_points),
            blank(self.rank),
            str(self.dim),
            str(self.seed),
            self.verdict.value,
            str(c.distance_evals),
            str(c.structure_builds),
            str(c.structure_queries),
            str(c.candidates_materialized),
            str(self.wall_time_ns),
        ]


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares line through (size exponent, log2 counter) samples."""

    slope: float
    intercept: float
    rms_residual: float
    samples: tuple[tuple[float, float], ...]


def fit_line(samples: Sequence[tuple[float, float]]) -> ExponentFit:
    count = len(samples)
    if count < 2 or len({x for x, _ in samples}) < 2:
        raise ParameterError("a line fit needs at least two distinct x values")
    sx = sum(x for x, _ in samples)
    sy = sum(y for _, y in samples)
    sxx = sum(x * x for x, _ in samples)
    sxy = sum(x * y for x, y in samples)
    slope = (count * sxy - sx * sy) / (count * sxx - sx * sx)
    intercept = (sy - slope * sx) / count
    sq = sum((y - slope * x - intercept) ** 2 for x, y in samples)
    return ExponentFit(slope, intercept, math.sqrt(sq / count), tuple(samples))


def _run_bcp(solver: str, size: int, seed: int) -> BenchRow:
    # NO instances keep the pair scan honest: no early exit on a hit.
    inst = generate_bcp(
        seed,
        n_a=size,
        n_b=size,
        d=3,
        p=Norm.LINF,
        label=Label.NO,
        coord_bound=max(50, 4 * size),
    )
    counters = CostCounters()
    start = time.perf_counter_ns()
    if solver == "oracle":
        verdict = oracle_closest_pair(inst)
        label = verdict.label
        counters.distance_evals = verdict.enumerated
    else:
        result = bcp_solve(inst, BcpStrategy.from_token(solver), counters)
        label = result.label
    elapsed = time.perf_counter_ns() - start
    return BenchRow("bcp", solver, size, None, inst.dim, seed, label, counters, elapsed)


def _run_svp01(solver: str, size: int, seed: int) -> BenchRow:
    inst = generate_lattice01(seed, n=size, p=Norm.LINF, label=Label.YES)
    counters = CostCounters()
    start = time.perf_counter_ns()
    if solver == "oracle":
        verdict = oracle_lattice01(inst)
        label = verdict.label
        counters.distance_evals = verdict.enumerated
    else:
        result = svp01_mitm(inst, BcpStrategy.BRUTE, counters)
        label = result.label
    elapsed = time.perf_counter_ns() - start
    return BenchRow(
        "svp01", solver, None, size, inst.dim, seed, label, counters, elapsed
    )


def bench_scaling(
    problem: str,
    solver: str,
    sizes: Sequence[int],
    seeds: Sequence[int] = (0,),
    counter: str = "distance_evals",
) -> tuple[list[BenchRow], ExponentFit]:
    """Run `solver` on planted instances at each size x seed and fit the
    growth exponent of `counter`.

    For the pair problem the size is the number of points per side and
    the fit abscissa is log2(N); for the lattice problem the size is the
    rank and the abscissa is the rank itself.  Oracle runs report their
    enumeration count in the distance_evals column.
    """
    if problem not in PROBLEM_SOLVERS:
        raise ParameterError(f"unknown benchmark problem {problem!r}")
    if solver not in PROBLEM_SOLVERS[problem]:
        raise ParameterError(
            f"solver {solver!r} is not one of {PROBLEM_SOLVERS[problem]} for {problem}"
        )
    if counter not in COUNTER_NAMES:
        raise ParameterError(f"unknown counter {counter!r}")
    if len(set(sizes)) < 4:
        raise ParameterError("a scaling fit needs at least four distinct sizes")
    if any(size < 2 for size in sizes):
        raise ParameterError("sizes must be at least 2")
    if not seeds:
        raise ParameterError("at least one seed is required")
    runner = _run_bcp if problem == "bcp" else _run_svp01
    rows: list[BenchRow] = []
    samples: list[tuple[float, float]] = []
    for size in sizes:
        x = math.log2(size) if problem == "bcp" else float(size)
        for seed in seeds:
            row = runner(solver, size, seed)
            rows.append(row)
            value = getattr(row.counters, counter)
            if value <= 0:
                raise ParameterError(
                    f"counter {counter} is {value} at size {size}; cannot take log2"
                )
            samples.append((x, math.log2(value)))
    return rows, fit_line(samples)


def write_csv(rows: Iterable[BenchRow], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow(row.to_fields())
