"""Riesz rising-sun decomposition for step functions, in exact arithmetic.

Given integrable step g on I0 with average(g) <= alpha, produce the maximal
pairwise disjoint subintervals on which g averages exactly alpha, with
g <= alpha on every positive-measure piece of the complement.

Construction: G(x) = integral from the left endpoint of (g - alpha) is
piecewise linear with rational nodes; with M(x) the running maximum of G
from the right, the shadow set {M > G} is a finite union of intervals whose
component endpoints share the same G value, which is exactly the
average-equality statement.  A component anchored at the left domain
endpoint only satisfies G(end) >= G(start); it is repaired by extending to
the rightmost zero of G, which restores the exact average and absorbs any
components in between.
"""

from __future__ import annotations

from fractions import Fraction

from .numerics import DomainError
from .stepfn import Interval, IntervalUnion, StepFunction

_ZERO = Fraction(0)


def sunrise_decompose(g: StepFunction, alpha: Fraction) -> IntervalUnion:
    """Maximal subintervals with average exactly alpha; may be empty."""
    alpha = Fraction(alpha)
    if g.average() > alpha:
        raise DomainError(
            f"sunrise precondition violated: average {g.average()} > {alpha}"
        )

    nodes = g.grid
    n = len(g.values)
    g_vals = [_ZERO]
    for c in range(n):
        g_vals.append(g_vals[-1] + (g.values[c] - alpha) * (nodes[c + 1] - nodes[c]))

    run_max = [None] * (n + 1)
    run_max[n] = g_vals[n]
    for c in range(n - 1, -1, -1):
        run_max[c] = max(g_vals[c], run_max[c + 1])

    pieces: list[Interval] = []
    for c in range(n):
        slope = g.values[c] - alpha
        m_next = run_max[c + 1]
        lo, hi = nodes[c], nodes[c + 1]
        if slope > 0:
            # G rises toward a value still dominated by the running max
            pieces.append(Interval(lo, hi))
        elif slope == 0:
            if g_vals[c] < m_next:
                pieces.append(Interval(lo, hi))
        else:
            if g_vals[c] < m_next:
                pieces.append(Interval(lo, hi))
            else:
                crossing = lo + (m_next - g_vals[c]) / slope
                if crossing < hi:
                    pieces.append(Interval(crossing, hi))

    shadow = IntervalUnion.from_intervals(pieces)
    parts = list(shadow.parts)

    if parts and parts[0].a == g.domain.a and _g_at(g, nodes, g_vals, parts[0].b) != 0:
        repair_end = _rightmost_zero(nodes, g_vals, g.values, alpha)
        kept = []
        for part in parts[1:]:
            if part.b <= repair_end:
                continue
            if part.a < repair_end:
                raise AssertionError("component straddles the repaired endpoint")
            kept.append(part)
        parts = [Interval(g.domain.a, repair_end)] + kept

    result = IntervalUnion(tuple(parts))
    for part in result.parts:
        assert g.average(part) == alpha, "sunrise average postcondition"
    outside = result.complement_within(g.domain)
    if not outside.is_empty():
        assert g.max_on(outside) <= alpha, "sunrise complement postcondition"
    return result


def _g_at(g: StepFunction, nodes, g_vals, x: Fraction) -> Fraction:
    """Antiderivative value G(x) by linear interpolation on its segment."""
    if x == nodes[-1]:
        return g_vals[-1]
    lo, hi = 0, len(nodes) - 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if nodes[mid] <= x:
            lo = mid
        else:
            hi = mid - 1
    slope = (g_vals[lo + 1] - g_vals[lo]) / (nodes[lo + 1] - nodes[lo])
    return g_vals[lo] + slope * (x - nodes[lo])


def _rightmost_zero(nodes, g_vals, values, alpha: Fraction) -> Fraction:
    for c in range(len(values) - 1, -1, -1):
        if g_vals[c + 1] == 0:
            return nodes[c + 1]
        if (g_vals[c] > 0) != (g_vals[c + 1] > 0):
            slope = values[c] - alpha
            return nodes[c] + (0 - g_vals[c]) / slope
    return nodes[0]
