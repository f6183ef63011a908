"""Problem-instance data model and the canonical on-disk format.

Five instance kinds share one file format: UTF-8 JSON, one instance per
file, fields in a fixed order, and every integer rendered as a decimal
string so coordinates survive parsers with 64-bit limits.  Geometric kinds
(ann, bcp, lattice01) carry the promise parameters (p, scale, r, gamma);
set families and CNF formulas carry only their combinatorial payload.
parse_instance(serialize_instance(x)) == x for every valid instance.

Set families store each set as a bit-string over a ground set of d
elements: character j (0-based) of the serialized string is '1' iff
element j+1 is in the set.  In memory the same convention uses bit j of an
integer mask.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, ParameterError, ParseError
from .metric import ExactPoint, Norm, ScaledMagnitude

KINDS = ("ann", "bcp", "lattice01", "setfamily", "cnf")


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix over the rationals."""
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return 0
    cols = len(mat[0])
    rank = 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        lead = mat[rank][col]
        for i in range(rank + 1, len(mat)):
            factor = mat[i][col] / lead
            if factor:
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def _common_dim(points: Sequence[ExactPoint], what: str) -> int:
    if not points:
        raise ParameterError(f"{what} must contain at least one point")
    dim = points[0].dim
    for pt in points:
        if pt.dim != dim:
            raise DimensionMismatch(f"dimension mismatch inside {what}")
    return dim


def _check_promise(r: ScaledMagnitude, gamma: Fraction, p: Norm, scale: int) -> None:
    if scale < 1:
        raise ParameterError("scale must be a positive integer")
    if r.scale != scale:
        raise ParameterError("radius scale must equal the instance scale")
    if r.power != p.power:
        raise ParameterError("radius power must match the norm")
    if r.value < 1:
        raise ParameterError("radius must be positive")
    if gamma <= 1:
        raise ParameterError("gamma must exceed 1")


@dataclass(frozen=True)
class AnnInstance:
    """Data points plus query points under one promise (r, gamma, p)."""

    data: tuple[ExactPoint, ...]
    queries: tuple[ExactPoint, ...]
    r: ScaledMagnitude
    gamma: Fraction
    p: Norm
    scale: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", tuple(self.data))
        object.__setattr__(self, "queries", tuple(self.queries))
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        d1 = _common_dim(self.data, "data")
        d2 = _common_dim(self.queries, "queries")
        if d1 != d2:
            raise DimensionMismatch("queries and data disagree on dimension")
        _check_promise(self.r, self.gamma, self.p, self.scale)

    @property
    def dim(self) -> int:
        return self.data[0].dim


@dataclass(frozen=True)
class BcpInstance:
    """Two point sets; the question is whether some cross pair is close."""

    a_points: tuple[ExactPoint, ...]
    b_points: tuple[ExactPoint, ...]
    r: ScaledMagnitude
    gamma: Fraction
    p: Norm
    scale: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "a_points", tuple(self.a_points))
        object.__setattr__(self, "b_points", tuple(self.b_points))
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        d1 = _common_dim(self.a_points, "a_points")
        d2 = _common_dim(self.b_points, "b_points")
        if d1 != d2:
            raise DimensionMismatch("a and b sides disagree on dimension")
        _check_promise(self.r, self.gamma, self.p, self.scale)

    @property
    def dim(self) -> int:
        return self.a_points[0].dim


@dataclass(frozen=True)
class Lattice01Instance:
    """A basis whose {0,1}-coefficient combinations are the candidates.

    Without a target the zero combination is excluded and candidates are
    compared against the origin; with a target every combination counts
    and distances are measured to the target.
    """

    basis: tuple[ExactPoint, ...]
    r: ScaledMagnitude
    gamma: Fraction
    p: Norm
    scale: int = 1
    target: ExactPoint | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        dim = _common_dim(self.basis, "basis")
        if self.target is not None and self.target.dim != dim:
            raise DimensionMismatch("target dimension differs from the basis")
        _check_promise(self.r, self.gamma, self.p, self.scale)
        rows = [b.coords for b in self.basis]
        if rational_rank(rows) != len(rows):
            raise ParameterError("dependent basis: vectors are not linearly independent")

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return self.basis[0].dim


@dataclass(frozen=True)
class SetFamilyInstance:
    """Two families over [d]: does some subset-side set lie inside some
    superset-side set?  Sets are integer bitmasks (bit j = element j+1)."""

    d: int
    supersets: tuple[int, ...]
    subsets: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "supersets", tuple(self.supersets))
        object.__setattr__(self, "subsets", tuple(self.subsets))
        if self.d < 1:
            raise ParameterError("ground set must have at least one element")
        if not self.supersets or not self.subsets:
            raise ParameterError("both families must be non-empty")
        full = (1 << self.d) - 1
        for mask in self.supersets + self.subsets:
            if not 0 <= mask <= full:
                raise ParameterError("set mask out of range for ground set")


@dataclass(frozen=True)
class CnfInstance:
    """A CNF formula with at most `width` literals per clause.

    Clauses are tuples of signed 1-based variable indices.
    """

    num_vars: int
    width: int
    clauses: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 1:
            raise ParameterError("formula must range over at least one variable")
        if self.width < 1:
            raise ParameterError("clause width must be positive")
        for clause in self.clauses:
            if len(clause) > self.width:
                raise ParameterError("clause exceeds the declared width")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ParameterError("literal references a variable out of range")


Instance = AnnInstance | BcpInstance | Lattice01Instance | SetFamilyInstance | CnfInstance


# -- bit-string helpers -------------------------------------------------

def mask_to_bits(mask: int, d: int) -> str:
    return "".join("1" if (mask >> j) & 1 else "0" for j in range(d))


def bits_to_mask(bits: str, d: int) -> int:
    if len(bits) != d:
        raise ParseError(f"bit-string length {len(bits)} does not match d={d}")
    mask = 0
    for j, ch in enumerate(bits):
        if ch == "1":
            mask |= 1 << j
        elif ch != "0":
            raise ParseError(f"bit-string may only contain 0 and 1, got {ch!r}")
    return mask


# -- canonical JSON -----------------------------------------------------

def _int_str(v: int) -> str:
    return str(int(v))


def _point_json(pt: ExactPoint) -> list[str]:
    return [_int_str(c) for c in pt.coords]


def _geometry_fields(inst) -> dict:
    return {
        "p": inst.p.value,
        "scale": _int_str(inst.scale),
        "r_num": _int_str(inst.r.value),
        "gamma_num": _int_str(inst.gamma.numerator),
        "gamma_den": _int_str(inst.gamma.denominator),
    }


def serialize_instance(inst: Instance) -> bytes:
    """Render an instance in the canonical format (UTF-8, one per file)."""
    if isinstance(inst, AnnInstance):
        doc = {"kind": "ann", **_geometry_fields(inst)}
        doc["payload"] = {
            "dim": _int_str(inst.dim),
            "data": [_point_json(pt) for pt in inst.data],
            "queries": [_point_json(pt) for pt in inst.queries],
        }
    elif isinstance(inst, BcpInstance):
        doc = {"kind": "bcp", **_geometry_fields(inst)}
        doc["payload"] = {
            "dim": _int_str(inst.dim),
            "a": [_point_json(pt) for pt in inst.a_points],
            "b": [_point_json(pt) for pt in inst.b_points],
        }
    elif isinstance(inst, Lattice01Instance):
        doc = {"kind": "lattice01", **_geometry_fields(inst)}
        payload = {
            "dim": _int_str(inst.dim),
            "basis": [_point_json(pt) for pt in inst.basis],
        }
        if inst.target is not None:
            payload["target"] = _point_json(inst.target)
        doc["payload"] = payload
    elif isinstance(inst, SetFamilyInstance):
        doc = {
            "kind": "setfamily",
            "payload": {
                "d": _int_str(inst.d),
                "supersets": [mask_to_bits(m, inst.d) for m in inst.supersets],
                "subsets": [mask_to_bits(m, inst.d) for m in inst.subsets],
            },
        }
    elif isinstance(inst, CnfInstance):
        doc = {
            "kind": "cnf",
            "payload": {
                "num_vars": _int_str(inst.num_vars),
                "width": _int_str(inst.width),
                "clauses": [[_int_str(lit) for lit in cl] for cl in inst.clauses],
            },
        }
    else:
        raise ParameterError(f"cannot serialize object of type {type(inst).__name__}")
    return (json.dumps(doc, separators=(",", ":")) + "\n").encode("utf-8")


def _want_int(raw, what: str) -> int:
    # integers travel as decimal strings only
    if not isinstance(raw, str):
        raise ParseError(f"{what} must be a decimal string, got {type(raw).__name__}")
    body = raw[1:] if raw[:1] == "-" else raw
    if not body.isdigit():
        raise ParseError(f"{what} is not a decimal integer: {raw!r}")
    return int(raw)


def _want_list(raw, what: str) -> list:
    if not isinstance(raw, list):
        raise ParseError(f"{what} must be a JSON array")
    return raw


def _want_point(raw, what: str) -> ExactPoint:
    coords = tuple(_want_int(c, f"{what} coordinate") for c in _want_list(raw, what))
    if not coords:
        raise ParseError(f"{what} must have at least one coordinate")
    return ExactPoint(coords)


def _want_keys(doc: dict, allowed: tuple[str, ...], where: str) -> None:
    extra = set(doc) - set(allowed)
    if extra:
        raise ParseError(f"unexpected field(s) in {where}: {sorted(extra)}")
    missing = set(allowed) - set(doc)
    if missing:
        raise ParseError(f"missing field(s) in {where}: {sorted(missing)}")


def _parse_geometry(doc: dict) -> tuple[Norm, int, ScaledMagnitude, Fraction]:
    p = Norm.from_token(doc["p"]) if isinstance(doc["p"], str) else None
    if p is None:
        raise ParseError("field p must be a string")
    scale = _want_int(doc["scale"], "scale")
    if scale < 1:
        raise ParseError("scale must be a positive integer")
    r = ScaledMagnitude(_want_int(doc["r_num"], "r_num"), scale, p.power)
    den = _want_int(doc["gamma_den"], "gamma_den")
    if den < 1:
        raise ParseError("gamma_den must be positive")
    gamma = Fraction(_want_int(doc["gamma_num"], "gamma_num"), den)
    return p, scale, r, gamma


def parse_instance(raw: bytes | str) -> Instance:
    """Parse the canonical format, rejecting any invariant violation with a
    diagnostic that names the violated invariant."""
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("instance file must hold a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown instance kind {kind!r}")
    try:
        return _parse_body(kind, doc)
    except ParseError:
        raise
    except (ParameterError, DimensionMismatch, ValueError) as exc:
        raise ParseError(str(exc)) from exc


_GEOM_KEYS = ("kind", "p", "scale", "r_num", "gamma_num", "gamma_den", "payload")


def _parse_body(kind: str, doc: dict) -> Instance:
    if kind in ("ann", "bcp", "lattice01"):
        _want_keys(doc, _GEOM_KEYS, "instance")
        p, scale, r, gamma = _parse_geometry(doc)
        payload = doc["payload"]
        if not isinstance(payload, dict):
            raise ParseError("payload must be a JSON object")
        if kind == "ann":
            _want_keys(payload, ("dim", "data", "queries"), "ann payload")
            dim = _want_int(payload["dim"], "dim")
            data = tuple(_want_point(p_, "data point") for p_ in _want_list(payload["data"], "data"))
            queries = tuple(_want_point(p_, "query point") for p_ in _want_list(payload["queries"], "queries"))
            inst: Instance = AnnInstance(data, queries, r, gamma, p, scale)
        elif kind == "bcp":
            _want_keys(payload, ("dim", "a", "b"), "bcp payload")
            dim = _want_int(payload["dim"], "dim")
            a = tuple(_want_point(p_, "a point") for p_ in _want_list(payload["a"], "a"))
            b = tuple(_want_point(p_, "b point") for p_ in _want_list(payload["b"], "b"))
            inst = BcpInstance(a, b, r, gamma, p, scale)
        else:
            keys = ("dim", "basis", "target") if "target" in payload else ("dim", "basis")
            _want_keys(payload, keys, "lattice01 payload")
            dim = _want_int(payload["dim"], "dim")
            basis = tuple(_want_point(p_, "basis vector") for p_ in _want_list(payload["basis"], "basis"))
            target = _want_point(payload["target"], "target") if "target" in payload else None
            inst = Lattice01Instance(basis, r, gamma, p, scale, target)
        if inst.dim != dim:
            raise ParseError("declared dim disagrees with the points")
        return inst
    if kind == "setfamily":
        _want_keys(doc, ("kind", "payload"), "instance")
        payload = doc["payload"]
        if not isinstance(payload, dict):
            raise ParseError("payload must be a JSON object")
        _want_keys(payload, ("d", "supersets", "subsets"), "setfamily payload")
        d = _want_int(payload["d"], "d")
        if d < 1:
            raise ParseError("ground set must have at least one element")
        supersets = tuple(
            bits_to_mask(s, d) if isinstance(s, str) else _bad_bits()
            for s in _want_list(payload["supersets"], "supersets")
        )
        subsets = tuple(
            bits_to_mask(s, d) if isinstance(s, str) else _bad_bits()
            for s in _want_list(payload["subsets"], "subsets")
        )
        return SetFamilyInstance(d, supersets, subsets)
    # cnf
    _want_keys(doc, ("kind", "payload"), "instance")
    payload = doc["payload"]
    if not isinstance(payload, dict):
        raise ParseError("payload must be a JSON object")
    _want_keys(payload, ("num_vars", "width", "clauses"), "cnf payload")
    clauses = tuple(
        tuple(_want_int(lit, "literal") for lit in _want_list(cl, "clause"))
        for cl in _want_list(payload["clauses"], "clauses")
    )
    return CnfInstance(_want_int(payload["num_vars"], "num_vars"), _want_int(payload["width"], "width"), clauses)


def _bad_bits():
    raise ParseError("sets must be encoded as bit-strings")


def load_instance(path) -> Instance:
    with open(path, "rb") as fh:
        return parse_instance(fh.read())


def store_instance(inst: Instance, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_instance(inst))
