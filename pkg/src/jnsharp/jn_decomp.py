"""Iterative two-sided stopping-interval decomposition of a step function.

Starting from the whole domain, the rising-sun lemma is applied to
f - base at level alpha_bar on the side where f exceeds its local average
(and to base - f on the other side).  Each selected interval has average
exactly base + alpha_bar (resp. base - alpha_bar), the recursion descends
with the shifted base, and the level sets

    E_k = union over depth-k intervals of {x : f(x) > base_k}
    F_k = union over depth-k intervals of {x : f(x) <= base_k}

are nested, disjoint across sides, and satisfy |G_k| <= min(2 gamma^k, 1)|I0|
for G_k = E_k ∪ F_k, provided each sunrise family obeys the operational
measure test  sum |I_j| <= gamma |parent|.  That test is checked exactly at
every node and failure aborts with the offending interval named.

The majorant psi = 1 + sum_k chi_{G_k} then dominates |f - f_I0| / alpha_bar
pointwise; ``verify_pointwise`` checks that bound cell by cell, exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numerics import DomainError, parse_rational, rational_str
from .oscillation import bmo_norm
from .stepfn import Interval, IntervalUnion, StepFunction, common_refinement_nodes
from .sunrise import sunrise_decompose

_ZERO = Fraction(0)
_ONE = Fraction(1)


class StoppingMeasureError(RuntimeError):
    """Raised when a sunrise family at some node exceeds gamma * |parent|."""

    def __init__(self, interval: Interval, total: Fraction, allowed: Fraction):
        self.interval = interval
        super().__init__(
            f"stopping intervals in {interval} have measure {total} "
            f"> gamma * |parent| = {allowed}; level too small for this gamma"
        )


@dataclass(frozen=True)
class DecompositionParams:
    """gamma in (0,1), the level alpha_bar > 0, and the recursion depth cap."""

    gamma: Fraction
    alpha_bar: Fraction
    max_depth: int = 64

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        object.__setattr__(self, "alpha_bar", Fraction(self.alpha_bar))
        if not (0 < self.gamma < 1):
            raise DomainError("gamma must lie strictly between 0 and 1")
        if self.alpha_bar <= 0:
            raise DomainError("alpha_bar must be positive")
        if self.max_depth < 1:
            raise DomainError("max_depth must be at least 1")


@dataclass(frozen=True)
class NodeRecord:
    """One sunrise application: parent interval and the selected children."""

    side: str
    depth: int
    parent: Interval
    children: tuple[Interval, ...]


@dataclass(frozen=True)
class LayerSets:
    depth: int
    stopping_E: IntervalUnion
    stopping_F: IntervalUnion
    E: IntervalUnion
    F: IntervalUnion
    G: IntervalUnion


@dataclass(frozen=True)
class DecompositionLayers:
    params: DecompositionParams
    domain: Interval
    base_average: Fraction
    layers: tuple[LayerSets, ...]
    nodes: tuple[NodeRecord, ...]
    complete: bool

    @property
    def depth(self) -> int:
        return len(self.layers)

    def g_set(self, k: int) -> IntervalUnion:
        if k == 0:
            return IntervalUnion((self.domain,))
        if k <= self.depth:
            return self.layers[k - 1].G
        return IntervalUnion.empty()

    def to_json_dict(self) -> dict:
        return {
            "params": {
                "gamma": rational_str(self.params.gamma),
                "alpha_bar": rational_str(self.params.alpha_bar),
                "max_depth": self.params.max_depth,
            },
            "domain": {
                "a": rational_str(self.domain.a),
                "b": rational_str(self.domain.b),
            },
            "base_average": rational_str(self.base_average),
            "complete": self.complete,
            "layers": [
                {
                    "depth": layer.depth,
                    "stopping_E": layer.stopping_E.to_pairs(),
                    "stopping_F": layer.stopping_F.to_pairs(),
                    "E": layer.E.to_pairs(),
                    "F": layer.F.to_pairs(),
                    "G": layer.G.to_pairs(),
                }
                for layer in self.layers
            ],
        }


def decompose(f: StepFunction, params: DecompositionParams) -> DecompositionLayers:
    """Run the two-sided stopping recursion; exact at every step."""
    base0 = f.average()
    alpha = params.alpha_bar
    complete = True
    nodes: list[NodeRecord] = []
    stop_parts: dict[str, dict[int, list[Interval]]] = {"E": {}, "F": {}}
    level_parts: dict[str, dict[int, list[Interval]]] = {"E": {}, "F": {}}

    for side in ("E", "F"):
        queue = deque([(f.domain, base0, 0)])
        while queue:
            interval, base, depth = queue.popleft()
            piece = f.restrict(interval)
            if side == "E":
                if max(piece.values) <= base + alpha:
                    continue
                work = piece.shift(-base)
            else:
                if min(piece.values) >= base - alpha:
                    continue
                work = (-piece).shift(base)
            if depth == params.max_depth:
                complete = False
                continue
            family = sunrise_decompose(work, alpha)
            if family.is_empty():
                continue
            allowed = params.gamma * interval.length
            if family.measure > allowed:
                raise StoppingMeasureError(interval, family.measure, allowed)
            child_base = base + alpha if side == "E" else base - alpha
            nodes.append(NodeRecord(side, depth + 1, interval, family.parts))
            for part in family.parts:
                stop_parts[side].setdefault(depth + 1, []).append(part)
                if side == "E":
                    hit = f.super_level(part, child_base, "strict-above")
                else:
                    hit = f.super_level(part, child_base, "at-or-below")
                level_parts[side].setdefault(depth + 1, []).extend(hit.parts)
                queue.append((part, child_base, depth + 1))

    max_k = max(
        [0]
        + list(stop_parts["E"].keys())
        + list(stop_parts["F"].keys())
    )
    layers = []
    for k in range(1, max_k + 1):
        e_set = IntervalUnion.from_intervals(level_parts["E"].get(k, []))
        f_set = IntervalUnion.from_intervals(level_parts["F"].get(k, []))
        layers.append(
            LayerSets(
                depth=k,
                stopping_E=IntervalUnion.from_intervals(stop_parts["E"].get(k, [])),
                stopping_F=IntervalUnion.from_intervals(stop_parts["F"].get(k, [])),
                E=e_set,
                F=f_set,
                G=e_set.union(f_set),
            )
        )
    return DecompositionLayers(
        params=params,
        domain=f.domain,
        base_average=base0,
        layers=tuple(layers),
        nodes=tuple(nodes),
        complete=complete,
    )


def psi(layers: DecompositionLayers) -> StepFunction:
    """The majorant 1 + sum_{k>=1} chi_{G_k} as an integer-valued step function."""
    if not layers.complete:
        raise DomainError("psi requires a complete decomposition")
    nodes = {layers.domain.a, layers.domain.b}
    unions = [layer.G for layer in layers.layers]
    for union in unions:
        for part in union.parts:
            nodes.add(part.a)
            nodes.add(part.b)
    ordered = sorted(nodes)
    values = []
    for lo, hi in zip(ordered, ordered[1:]):
        mid = (lo + hi) / 2
        count = sum(1 for union in unions if union.contains_point(mid))
        values.append(_ONE + count)
    return StepFunction(layers.domain, tuple(ordered[1:-1]), tuple(values))


@dataclass(frozen=True)
class PointwiseReport:
    passed: bool
    min_slack: Fraction
    worst_cell: Interval


def verify_pointwise(f: StepFunction, layers: DecompositionLayers) -> PointwiseReport:
    """Exact cellwise check of |f - f_I0| <= alpha_bar * psi."""
    if not layers.complete:
        raise DomainError("verification requires a complete decomposition")
    majorant = psi(layers)
    base = layers.base_average
    alpha = layers.params.alpha_bar
    nodes = common_refinement_nodes(f, majorant)
    min_slack: Optional[Fraction] = None
    worst: Optional[Interval] = None
    for lo, hi in zip(nodes, nodes[1:]):
        mid = (lo + hi) / 2
        slack = alpha * majorant.value_at(mid) - abs(f.value_at(mid) - base)
        if min_slack is None or slack < min_slack:
            min_slack = slack
            worst = Interval(lo, hi)
    return PointwiseReport(min_slack >= 0, min_slack, worst)


def psi_distribution_ok(layers: DecompositionLayers) -> bool:
    """|{psi > k}| = |G_k| <= min(1, 2 gamma^k)|I0| for every recorded depth."""
    if not layers.complete:
        raise DomainError("distribution check requires a complete decomposition")
    majorant = psi(layers)
    gamma = layers.params.gamma
    size = layers.domain.length
    bound_factor = _ONE
    for k in range(0, layers.depth + 2):
        measured = majorant.distribution(_ZERO, Fraction(k))
        if measured != layers.g_set(k).measure:
            return False
        if measured > min(_ONE, 2 * bound_factor) * size:
            return False
        bound_factor *= gamma
    return True


def default_level(f: StepFunction, gamma: Fraction, tolerance: Fraction) -> Fraction:
    """Certified upper rational for ||f||_* / (2 gamma), the canonical level."""
    norm_hi = bmo_norm(f, tolerance).bounds.hi
    return norm_hi / (2 * Fraction(gamma))
