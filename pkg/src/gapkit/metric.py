"""Exact finite geometry: integer points, l1/l2/linf distances, and
promise-gap classification.

Coordinates are arbitrary-precision integer numerators over a shared
positive denominator (the instance scale); nothing in this module ever
rounds.  A magnitude (value, scale, power) denotes the rational
value / scale**power.  l1 and linf distances carry power 1; l2 distances
are carried squared end to end with power 2, so comparisons against a
radius stay in integers (the radius of a squared-norm instance is stored
squared as well, and the approximation factor is squared at the comparison
site).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from operator import mul, sub
from typing import Sequence

from .errors import DimensionMismatch, ParameterError


class Norm(Enum):
    """Which l_p norm distances are measured in.  l2 is carried squared."""

    L1 = "1"
    L2 = "2"
    LINF = "inf"

    @property
    def power(self) -> int:
        return 2 if self is Norm.L2 else 1

    @classmethod
    def from_token(cls, token: str) -> "Norm":
        for norm in cls:
            if norm.value == token:
                return norm
        raise ParameterError(f"unknown norm {token!r}; expected 1, 2, or inf")


class Label(Enum):
    YES = "YES"
    NO = "NO"
    PROMISE_VIOLATION = "PROMISE_VIOLATION"


@dataclass(frozen=True)
class ExactPoint:
    """A point given by integer coordinate numerators."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(self.coords)
        if not coords:
            raise DimensionMismatch("a point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)


@dataclass(frozen=True, eq=False)
class ScaledMagnitude:
    """A non-negative rational value / scale**power, kept in integers.

    Magnitudes of equal power compare exactly by cross-multiplying scales;
    comparing across powers (a plain distance against a squared one) is a
    category error and raises.
    """

    value: int
    scale: int = 1
    power: int = 1

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ParameterError("magnitude value must be non-negative")
        if self.scale < 1:
            raise ParameterError("scale must be a positive integer")
        if self.power not in (1, 2):
            raise ParameterError("power must be 1 or 2")

    def as_fraction(self) -> Fraction:
        return Fraction(self.value, self.scale**self.power)

    def _cmp(self, other: "ScaledMagnitude") -> int:
        if self.power != other.power:
            raise ParameterError("cannot compare magnitudes of different powers")
        if self.scale == other.scale:
            a, b = self.value, other.value
        else:
            a = self.value * other.scale**self.power
            b = other.value * self.scale**self.power
        return (a > b) - (a < b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScaledMagnitude):
            return NotImplemented
        return self.power == other.power and self._cmp(other) == 0

    def __lt__(self, other: "ScaledMagnitude") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "ScaledMagnitude") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "ScaledMagnitude") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "ScaledMagnitude") -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash((self.power, self.as_fraction()))


def dist_num(a: Sequence[int], b: Sequence[int], p: Norm) -> int:
    """Exact distance numerator between coordinate tuples.

    Returns max|a-b| for linf, sum|a-b| for l1, and the squared sum for l2.
    """
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension mismatch: {len(a)} vs {len(b)}")
    if p is Norm.LINF:
        return max(map(abs, map(sub, a, b)))
    if p is Norm.L1:
        return sum(map(abs, map(sub, a, b)))
    diff = list(map(sub, a, b))
    return sum(map(mul, diff, diff))


def within_num(a: Sequence[int], b: Sequence[int], p: Norm, bound: int) -> bool:
    """Exact test dist_num(a, b, p) <= bound.

    Equivalent to computing the full distance, but the coordinate scan
    stops as soon as the bound is provably exceeded, which matters for
    high-dimensional scans.
    """
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension mismatch: {len(a)} vs {len(b)}")
    if p is Norm.LINF:
        if len(a) <= 8:
            return max(map(abs, map(sub, a, b))) <= bound
        for x, y in zip(a, b):
            delta = x - y
            if delta > bound or -delta > bound:
                return False
        return True
    total = 0
    if p is Norm.L1:
        for x, y in zip(a, b):
            delta = x - y
            total += delta if delta >= 0 else -delta
            if total > bound:
                return False
        return True
    for x, y in zip(a, b):
        delta = x - y
        total += delta * delta
        if total > bound:
            return False
    return True


def dist_below(a: Sequence[int], b: Sequence[int], p: Norm, cap: int) -> int | None:
    """Exact distance numerator if it is strictly below cap, else None.

    Used by minimum-tracking scans: once the running partial value reaches
    the incumbent cap the pair cannot improve the minimum.
    """
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension mismatch: {len(a)} vs {len(b)}")
    if p is Norm.LINF:
        best = 0
        for x, y in zip(a, b):
            delta = x - y
            if delta < 0:
                delta = -delta
            if delta >= cap:
                return None
            if delta > best:
                best = delta
        return best
    total = 0
    if p is Norm.L1:
        for x, y in zip(a, b):
            delta = x - y
            total += delta if delta >= 0 else -delta
            if total >= cap:
                return None
        return total
    for x, y in zip(a, b):
        delta = x - y
        total += delta * delta
        if total >= cap:
            return None
    return total


def distance(a: ExactPoint, b: ExactPoint, p: Norm, scale: int = 1) -> ScaledMagnitude:
    """Exact distance between two points sharing the given scale."""
    return ScaledMagnitude(dist_num(a.coords, b.coords, p), scale, p.power)


def classify_gap(dist: ScaledMagnitude, r: ScaledMagnitude, gamma: Fraction) -> Label:
    """Place a distance on the YES side (<= r), the NO side (>= gamma*r),
    or in the forbidden middle of a promise instance.

    Thresholds are non-strict on both sides.  dist and r must share scale
    and power; for squared magnitudes the NO test compares against
    gamma**2 * r.
    """
    gamma = Fraction(gamma)
    if gamma <= 1:
        raise ParameterError("gamma must exceed 1")
    if dist.power != r.power or dist.scale != r.scale:
        raise ParameterError("distance and radius must share scale and power")
    if dist.value <= r.value:
        return Label.YES
    num, den = gamma.numerator, gamma.denominator
    if dist.power == 2:
        num, den = num * num, den * den
    if dist.value * den >= num * r.value:
        return Label.NO
    return Label.PROMISE_VIOLATION
