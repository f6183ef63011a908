"""Verifier and exhaustive explorer for the separation achievable by
disjointness gadgets.

A gadget is a pair of maps F, G from d-bit strings (subsets of a ground
set) into one metric space.  Its quality is the ratio between the smallest
distance over intersecting pairs and the largest distance over disjoint
pairs: a large ratio would let a single distance comparison decide
disjointness with slack.  The triangle inequality caps that ratio at 3 in
every metric space: fix a shared element, drop it from each side in turn,
and the three resulting pairs are disjoint, so the intersecting distance
is at most three disjoint distances.  verify_barrier asserts the bound on
concrete tables and, if it ever failed, would return the four points of
that chain as an inspectable counterexample (meaning the table was not a
metric).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product

from . import budgets
from .errors import BudgetExceeded, MalformedMetric, ParameterError, ParseError
from .metric import ExactPoint, ScaledMagnitude, dist_num, Norm


@dataclass(frozen=True)
class ExplicitSpace:
    """A finite metric given by an integer distance table over one scale."""

    distances: tuple[tuple[int, ...], ...]
    scale: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "distances", tuple(tuple(row) for row in self.distances)
        )
        if self.scale < 1:
            raise ParameterError("scale must be a positive integer")
        size = len(self.distances)
        if size < 1:
            raise ParameterError("the space needs at least one point")
        if any(len(row) != size for row in self.distances):
            raise MalformedMetric("distance table must be square")

    @property
    def size(self) -> int:
        return len(self.distances)

    def dist(self, i: int, j: int) -> int:
        return self.distances[i][j]


@dataclass(frozen=True)
class PointSpace:
    """Points under the max norm; a metric by construction."""

    points: tuple[ExactPoint, ...]
    scale: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        if self.scale < 1:
            raise ParameterError("scale must be a positive integer")
        if not self.points:
            raise ParameterError("the space needs at least one point")
        dim = self.points[0].dim
        if any(pt.dim != dim for pt in self.points):
            raise MalformedMetric("space points disagree on dimension")

    @property
    def size(self) -> int:
        return len(self.points)

    def dist(self, i: int, j: int) -> int:
        return dist_num(self.points[i].coords, self.points[j].coords, Norm.LINF)


Space = ExplicitSpace | PointSpace


def check_triangle(space: Space) -> tuple[int, int, int] | None:
    """None when the space is a metric; otherwise the first triple
    (i, j, k) with d(i, k) > d(i, j) + d(j, k).

    Explicit tables are first checked for shape: asymmetry, a non-zero
    diagonal, or a negative entry raise rather than return a triple.
    Point spaces are metrics by construction.
    """
    if isinstance(space, PointSpace):
        return None
    table = space.distances
    size = space.size
    for i in range(size):
        if table[i][i] != 0:
            raise MalformedMetric(f"non-zero self-distance at point {i}")
        for j in range(size):
            if table[i][j] < 0:
                raise MalformedMetric(f"negative distance at ({i}, {j})")
            if table[i][j] != table[j][i]:
                raise MalformedMetric(f"asymmetric distances at ({i}, {j})")
    for i in range(size):
        for j in range(size):
            for k in range(size):
                if table[i][k] > table[i][j] + table[j][k]:
                    return (i, j, k)
    return None


@dataclass(frozen=True)
class GadgetTables:
    """F and G as point-id tables indexed by subset mask."""

    d: int
    f_ids: tuple[int, ...]
    g_ids: tuple[int, ...]
    space: Space

    def __post_init__(self) -> None:
        object.__setattr__(self, "f_ids", tuple(self.f_ids))
        object.__setattr__(self, "g_ids", tuple(self.g_ids))
        if self.d < 1:
            raise ParameterError("gadget dimension must be positive")
        want = 1 << self.d
        if len(self.f_ids) != want or len(self.g_ids) != want:
            raise ParameterError(f"both tables must assign all {want} masks")
        size = self.space.size
        for pid in self.f_ids + self.g_ids:
            if not 0 <= pid < size:
                raise ParameterError("table entry is not a point of the space")


class GapKind(Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    NO_GAP = "no_gap"


@dataclass(frozen=True)
class GapReport:
    """Extremes of the gadget's distances split by disjointness.

    yes_max is the largest distance over disjoint (S, T); no_min the
    smallest over intersecting pairs.  gap is no_min / yes_max when that
    ratio exists; a gadget whose disjoint distances are all zero has
    either no separation at all (NO_GAP) or an unbounded one (INFINITE,
    impossible in a true metric).
    """

    yes_max: ScaledMagnitude
    no_min: ScaledMagnitude
    kind: GapKind
    gap: Fraction | None
    yes_witness: tuple[int, int]
    no_witness: tuple[int, int]


def gadget_gap(gadget: GadgetTables, budget: int | None = None) -> GapReport:
    """Enumerate all 4^d (S, T) pairs and report the distance extremes."""
    d = gadget.d
    limit = budgets.cap(budgets.GADGET_DIM_CAP, budget)
    if d > limit:
        raise BudgetExceeded(
            f"gadget dimension {d} exceeds the cap {limit}; "
            f"raise GAPKIT_BUDGET to enumerate 4^{d} pairs"
        )
    space = gadget.space
    yes_max = no_min = None
    yes_wit = no_wit = (0, 0)
    for s_mask in range(1 << d):
        fid = gadget.f_ids[s_mask]
        for t_mask in range(1 << d):
            val = space.dist(fid, gadget.g_ids[t_mask])
            if s_mask & t_mask:
                if no_min is None or val < no_min:
                    no_min, no_wit = val, (s_mask, t_mask)
            else:
                if yes_max is None or val > yes_max:
                    yes_max, yes_wit = val, (s_mask, t_mask)
    if yes_max > 0:
        kind, gap = GapKind.FINITE, Fraction(no_min, yes_max)
    elif no_min > 0:
        kind, gap = GapKind.INFINITE, None
    else:
        kind, gap = GapKind.NO_GAP, None
    scale = space.scale
    return GapReport(
        ScaledMagnitude(yes_max, scale, 1),
        ScaledMagnitude(no_min, scale, 1),
        kind,
        gap,
        yes_wit,
        no_wit,
    )


@dataclass(frozen=True)
class RestrictionChain:
    """Four points refuting the triangle inequality.

    The pair (S, T) shares exactly the element c; dropping c from either
    side gives disjoint pairs, so big = D(F(S), G(T)) should be at most
    the sum of the three legs D(F(S), G(T*)), D(F(S*), G(T*)),
    D(F(S*), G(T)) where S* and T* drop c.  A chain with big exceeding
    the legs certifies the table was not a metric.
    """

    element: int
    s_mask: int
    t_mask: int
    f_one: int
    f_zero: int
    g_one: int
    g_zero: int
    big: int
    legs: tuple[int, int, int]


@dataclass(frozen=True)
class BarrierCertificate:
    holds: bool
    report: GapReport
    counterexample: RestrictionChain | None


def verify_barrier(gadget: GadgetTables, budget: int | None = None) -> BarrierCertificate:
    """Check the factor-3 bound on a concrete gadget.

    The space is validated first (raising on a non-metric); then the gap
    report is computed and the bound asserted.  On the impossible branch
    where the gap exceeded 3, the certificate carries the four-point
    restriction chain that the triangle inequality would have needed.
    """
    violation = check_triangle(gadget.space)
    if violation is not None:
        raise MalformedMetric(f"triangle inequality fails at triple {violation}")
    report = gadget_gap(gadget, budget=budget)
    bound_holds = not (
        report.kind is GapKind.INFINITE
        or (report.kind is GapKind.FINITE and report.gap > 3)
    )
    if bound_holds:
        return BarrierCertificate(True, report, None)
    return BarrierCertificate(False, report, _restriction_chain(gadget, report))


def _restriction_chain(gadget: GadgetTables, report: GapReport) -> RestrictionChain:
    space = gadget.space
    yes_max = report.yes_max.value
    for c in range(gadget.d):
        bit = 1 << c
        for s_mask in range(1 << gadget.d):
            if not s_mask & bit:
                continue
            for t_mask in range(1 << gadget.d):
                if s_mask & t_mask != bit:
                    continue
                f_one = gadget.f_ids[s_mask]
                g_one = gadget.g_ids[t_mask]
                big = space.dist(f_one, g_one)
                if big <= 3 * yes_max:
                    continue
                f_zero = gadget.f_ids[s_mask ^ bit]
                g_zero = gadget.g_ids[t_mask ^ bit]
                legs = (
                    space.dist(f_one, g_zero),
                    space.dist(f_zero, g_zero),
                    space.dist(f_zero, g_one),
                )
                return RestrictionChain(
                    c, s_mask, t_mask, f_one, f_zero, g_one, g_zero, big, legs
                )
    raise MalformedMetric("gap exceeded 3 with no singleton-intersection witness")


@dataclass(frozen=True)
class GadgetSearchResult:
    """Best finite-gap gadget found, or none when every assignment is
    degenerate (no positive disjoint distance)."""

    best: GapReport | None
    gadget: GadgetTables | None
    enumerated: int


def search_best_gadget(
    d: int,
    grid: tuple[int, ...],
    ambient_dim: int = 1,
    scale: int = 1,
    budget: int | None = None,
) -> GadgetSearchResult:
    """Exhaust all assignments of both tables into grid^ambient_dim points
    under the max norm and return the largest finite gap.

    The work is (|grid|^ambient_dim)^(2^(d+1)) assignments times 4^d pair
    evaluations; the call refuses when that exceeds the work cap.  Ties
    keep the first assignment in enumeration order, so results are
    deterministic.  This settles achievability only for the tiny spaces it
    can exhaust.
    """
    values = tuple(sorted(set(grid)))
    if not values:
        raise ParameterError("the coordinate grid must be non-empty")
    if ambient_dim < 1:
        raise ParameterError("ambient dimension must be positive")
    points = tuple(ExactPoint(t) for t in product(values, repeat=ambient_dim))
    space = PointSpace(points, scale)
    n_points = len(points)
    table_count = n_points ** (1 << d)
    total_work = table_count * table_count * (4**d)
    limit = budget if budget is not None else budgets.GADGET_SEARCH_WORK_CAP
    if total_work > limit:
        raise BudgetExceeded(
            f"exhaustive search needs {total_work} pair evaluations, over the cap {limit}"
        )
    dist = [
        [space.dist(i, j) for j in range(n_points)] for i in range(n_points)
    ]
    masks = range(1 << d)
    disjoint = [[not (s & t) for t in masks] for s in masks]
    best_gap: Fraction | None = None
    best_tables: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    for f_ids in product(range(n_points), repeat=1 << d):
        f_rows = [dist[fid] for fid in f_ids]
        for g_ids in product(range(n_points), repeat=1 << d):
            yes_max = no_min = None
            for s_mask in masks:
                row = f_rows[s_mask]
                dis = disjoint[s_mask]
                for t_mask in masks:
                    val = row[g_ids[t_mask]]
                    if dis[t_mask]:
                        if yes_max is None or val > yes_max:
                            yes_max = val
                    elif no_min is None or val < no_min:
                        no_min = val
            if not yes_max:
                continue
            gap = Fraction(no_min, yes_max)
            if best_gap is None or gap > best_gap:
                best_gap = gap
                best_tables = (f_ids, g_ids)
    if best_tables is None:
        return GadgetSearchResult(None, None, table_count * table_count)
    gadget = GadgetTables(d, best_tables[0], best_tables[1], space)
    return GadgetSearchResult(
        gadget_gap(gadget), gadget, table_count * table_count
    )


# -- gadget files -------------------------------------------------------

def serialize_gadget(gadget: GadgetTables) -> bytes:
    """Gadget tables in the canonical JSON conventions."""
    space = gadget.space
    if isinstance(space, PointSpace):
        space_doc = {
            "type": "linf",
            "scale": str(space.scale),
            "points": [[str(c) for c in pt.coords] for pt in space.points],
        }
    else:
        space_doc = {
            "type": "explicit",
            "scale": str(space.scale),
            "distances": [[str(v) for v in row] for row in space.distances],
        }
    doc = {
        "kind": "gadget",
        "d": str(gadget.d),
        "space": space_doc,
        "f": [str(pid) for pid in gadget.f_ids],
        "g": [str(pid) for pid in gadget.g_ids],
    }
    return (json.dumps(doc, separators=(",", ":")) + "\n").encode("utf-8")


def parse_gadget(raw: bytes | str) -> GadgetTables:
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("kind") != "gadget":
        raise ParseError("expected a gadget document")
    try:
        d = int(doc["d"])
        space_doc = doc["space"]
        scale = int(space_doc["scale"])
        if space_doc["type"] == "linf":
            points = tuple(
                ExactPoint(tuple(int(c) for c in row)) for row in space_doc["points"]
            )
            space: Space = PointSpace(points, scale)
        elif space_doc["type"] == "explicit":
            table = tuple(
                tuple(int(v) for v in row) for row in space_doc["distances"]
            )
            space = ExplicitSpace(table, scale)
        else:
            raise ParseError(f"unknown space type {space_doc['type']!r}")
        f_ids = tuple(int(v) for v in doc["f"])
        g_ids = tuple(int(v) for v in doc["g"])
        return GadgetTables(d, f_ids, g_ids, space)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed gadget document: {exc}") from exc
