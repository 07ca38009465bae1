"""Piecewise-constant functions on a rational interval, with exact set algebra.

Cells follow the half-open convention ``[x, y)``: single points are null
sets, so every almost-everywhere statement about a step function becomes an
exact statement about finite unions of half-open intervals.  All endpoints,
values, measures, integrals and averages are exact rationals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

from .numerics import DomainError, parse_rational, rational_str


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open interval [a, b) with rational endpoints, a < b."""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.a, Fraction):
            object.__setattr__(self, "a", Fraction(self.a))
        if not isinstance(self.b, Fraction):
            object.__setattr__(self, "b", Fraction(self.b))
        if self.a >= self.b:
            raise ValueError(f"degenerate interval [{self.a}, {self.b})")

    @property
    def length(self) -> Fraction:
        return self.b - self.a

    def contains_point(self, x: Fraction) -> bool:
        return self.a <= x < self.b

    def contains_interval(self, other: "Interval") -> bool:
        return self.a <= other.a and other.b <= self.b

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo = max(self.a, other.a)
        hi = min(self.b, other.b)
        if lo < hi:
            return Interval(lo, hi)
        return None

    def __str__(self) -> str:
        return f"[{self.a}, {self.b})"


RegionLike = Union[Interval, "IntervalUnion"]


@dataclass(frozen=True)
class IntervalUnion:
    """Normalized finite disjoint union of half-open intervals.

    Parts are sorted, pairwise disjoint and non-adjacent; touching parts are
    merged on construction, so the representation is canonical.
    """

    parts: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        for prev, cur in zip(self.parts, self.parts[1:]):
            if prev.b >= cur.a:
                raise ValueError("parts not normalized; use from_intervals")

    @staticmethod
    def from_intervals(intervals: Iterable[Interval]) -> "IntervalUnion":
        items = sorted(intervals, key=lambda iv: (iv.a, iv.b))
        merged: list[Interval] = []
        for iv in items:
            if merged and iv.a <= merged[-1].b:
                last = merged[-1]
                if iv.b > last.b:
                    merged[-1] = Interval(last.a, iv.b)
            else:
                merged.append(iv)
        return IntervalUnion(tuple(merged))

    @staticmethod
    def empty() -> "IntervalUnion":
        return IntervalUnion(())

    @property
    def measure(self) -> Fraction:
        return sum((p.length for p in self.parts), Fraction(0))

    def is_empty(self) -> bool:
        return not self.parts

    def contains_point(self, x: Fraction) -> bool:
        return any(p.contains_point(x) for p in self.parts)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion.from_intervals(self.parts + other.parts)

    def intersection(self, other: "IntervalUnion") -> "IntervalUnion":
        out: list[Interval] = []
        i = j = 0
        while i < len(self.parts) and j < len(other.parts):
            cut = self.parts[i].intersect(other.parts[j])
            if cut is not None:
                out.append(cut)
            if self.parts[i].b <= other.parts[j].b:
                i += 1
            else:
                j += 1
        return IntervalUnion(tuple(out))

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        out: list[Interval] = []
        for part in self.parts:
            lo = part.a
            for cut in other.parts:
                if cut.b <= lo:
                    continue
                if cut.a >= part.b:
                    break
                if cut.a > lo:
                    out.append(Interval(lo, min(cut.a, part.b)))
                lo = max(lo, cut.b)
                if lo >= part.b:
                    break
            if lo < part.b:
                out.append(Interval(lo, part.b))
        return IntervalUnion(tuple(out))

    def complement_within(self, frame: Interval) -> "IntervalUnion":
        return IntervalUnion((frame,)).difference(self)

    def is_subset_of(self, other: "IntervalUnion") -> bool:
        return self.difference(other).is_empty()

    def intersects(self, other: "IntervalUnion") -> bool:
        return not self.intersection(other).is_empty()

    def to_pairs(self) -> list[list[str]]:
        return [[rational_str(p.a), rational_str(p.b)] for p in self.parts]

    @staticmethod
    def from_pairs(pairs: Sequence[Sequence[str]]) -> "IntervalUnion":
        return IntervalUnion.from_intervals(
            Interval(parse_rational(a), parse_rational(b)) for a, b in pairs
        )


def as_union(region: RegionLike) -> IntervalUnion:
    if isinstance(region, Interval):
        return IntervalUnion((region,))
    return region


@dataclass(frozen=True)
class StepFunction:
    """Step function on ``domain`` with interior breakpoints and cell values.

    Cell ``i`` is ``[x_i, x_{i+1})`` under the induced partition; adjacent
    cells with equal values are merged on construction, which makes the
    representation canonical and equality structural.
    """

    domain: Interval
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        bps = tuple(Fraction(x) for x in self.breakpoints)
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != len(bps) + 1:
            raise ValueError("need exactly one more value than breakpoints")
        prev = self.domain.a
        for x in bps:
            if not (prev < x < self.domain.b):
                raise ValueError(f"breakpoint {x} not interior and increasing")
            prev = x
        merged_b: list[Fraction] = []
        merged_v: list[Fraction] = [vals[0]]
        for x, v in zip(bps, vals[1:]):
            if v == merged_v[-1]:
                continue
            merged_b.append(x)
            merged_v.append(v)
        object.__setattr__(self, "breakpoints", tuple(merged_b))
        object.__setattr__(self, "values", tuple(merged_v))

    @staticmethod
    def constant(domain: Interval, value: Fraction) -> "StepFunction":
        return StepFunction(domain, (), (Fraction(value),))

    @property
    def grid(self) -> tuple[Fraction, ...]:
        return (self.domain.a,) + self.breakpoints + (self.domain.b,)

    def cells(self) -> Iterator[tuple[Fraction, Fraction, Fraction]]:
        g = self.grid
        for i, v in enumerate(self.values):
            yield g[i], g[i + 1], v

    def cell_count(self) -> int:
        return len(self.values)

    def value_at(self, x: Fraction) -> Fraction:
        if not self.domain.contains_point(x):
            raise DomainError(f"{x} outside domain {self.domain}")
        # rightmost breakpoint <= x selects the cell
        lo, hi = 0, len(self.breakpoints)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.breakpoints[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        return self.values[lo]

    def value_bounds(self) -> tuple[Fraction, Fraction]:
        return min(self.values), max(self.values)

    def _check_subinterval(self, interval: Interval) -> None:
        if not self.domain.contains_interval(interval):
            raise DomainError(f"{interval} not inside domain {self.domain}")

    def integral(self, interval: Optional[Interval] = None) -> Fraction:
        """Exact integral of f over a subinterval (default: whole domain)."""
        if interval is None:
            interval = self.domain
        self._check_subinterval(interval)
        total = Fraction(0)
        for lo, hi, v in self.cells():
            cut_lo = max(lo, interval.a)
            cut_hi = min(hi, interval.b)
            if cut_lo < cut_hi:
                total += v * (cut_hi - cut_lo)
        return total

    def average(self, interval: Optional[Interval] = None) -> Fraction:
        if interval is None:
            interval = self.domain
        return self.integral(interval) / interval.length

    def integral_over(self, region: RegionLike) -> Fraction:
        return sum(
            (self.integral(part) for part in as_union(region).parts), Fraction(0)
        )

    def super_level(
        self, interval: Interval, threshold: Fraction, mode: str = "strict-above"
    ) -> IntervalUnion:
        """Level region within ``interval``: {f > t} or {f <= t}.

        The two modes partition the interval exactly; together with the
        half-open convention that makes set identities like
        E(I) ∪ F(I) = I hold with no exceptional points.
        """
        if mode not in ("strict-above", "at-or-below"):
            raise ValueError(f"unknown mode {mode!r}")
        self._check_subinterval(interval)
        keep: list[Interval] = []
        for lo, hi, v in self.cells():
            cut_lo = max(lo, interval.a)
            cut_hi = min(hi, interval.b)
            if cut_lo >= cut_hi:
                continue
            hit = v > threshold if mode == "strict-above" else v <= threshold
            if hit:
                keep.append(Interval(cut_lo, cut_hi))
        return IntervalUnion.from_intervals(keep)

    def distribution(self, center: Fraction, alpha: Fraction) -> Fraction:
        """Exact measure of {x in domain : |f(x) - center| > alpha}."""
        if alpha < 0:
            raise DomainError("alpha must be nonnegative")
        total = Fraction(0)
        for lo, hi, v in self.cells():
            if abs(v - center) > alpha:
                total += hi - lo
        return total

    def restrict(self, interval: Interval) -> "StepFunction":
        self._check_subinterval(interval)
        bps = [x for x in self.breakpoints if interval.a < x < interval.b]
        vals = [self.value_at(interval.a)]
        for x in bps:
            vals.append(self.value_at(x))
        return StepFunction(interval, tuple(bps), tuple(vals))

    def max_on(self, region: RegionLike) -> Fraction:
        vals = self._values_on(region)
        return max(vals)

    def min_on(self, region: RegionLike) -> Fraction:
        vals = self._values_on(region)
        return min(vals)

    def _values_on(self, region: RegionLike) -> list[Fraction]:
        union = as_union(region)
        out = []
        for lo, hi, v in self.cells():
            cell = IntervalUnion((Interval(lo, hi),))
            if cell.intersects(union):
                out.append(v)
        if not out:
            raise DomainError("region has empty intersection with domain")
        return out

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.domain, self.breakpoints, tuple(-v for v in self.values))

    def shift(self, c: Fraction) -> "StepFunction":
        return StepFunction(
            self.domain, self.breakpoints, tuple(v + c for v in self.values)
        )

    def scale(self, c: Fraction) -> "StepFunction":
        return StepFunction(
            self.domain, self.breakpoints, tuple(v * c for v in self.values)
        )

    def to_json_dict(self) -> dict:
        return {
            "domain": {
                "a": rational_str(self.domain.a),
                "b": rational_str(self.domain.b),
            },
            "breakpoints": [rational_str(x) for x in self.breakpoints],
            "values": [rational_str(v) for v in self.values],
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @staticmethod
    def from_json_dict(data: dict) -> "StepFunction":
        try:
            domain = Interval(
                parse_rational(data["domain"]["a"]),
                parse_rational(data["domain"]["b"]),
            )
            bps = tuple(parse_rational(x) for x in data["breakpoints"])
            vals = tuple(parse_rational(v) for v in data["values"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed step function object: {exc}") from exc
        return StepFunction(domain, bps, vals)

    @staticmethod
    def from_json_str(text: str) -> "StepFunction":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON: {exc}") from exc
        return StepFunction.from_json_dict(data)


def common_refinement_nodes(*functions: StepFunction) -> list[Fraction]:
    """Sorted node set refining all the given functions' partitions.

    All functions must share the same domain.
    """
    domain = functions[0].domain
    for f in functions[1:]:
        if f.domain != domain:
            raise DomainError("functions must share a domain")
    nodes = set()
    for f in functions:
        nodes.update(f.grid)
    return sorted(nodes)
