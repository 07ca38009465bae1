"""Mean oscillation and the exact BMO norm of a step function.

The norm sup_{I} Omega(f; I) is computed exactly.  Intervals are grouped by
the pair of cells containing their endpoints.  Within one cell pair, for a
fixed sign vector sigma over the spanned cells,

    Phi_sigma(I) = (1/|I|) * sum_c sigma_c (v_c - f_I) |cell_c ∩ I|

is a rational function of the stub length A at the left endpoint and the
total length T; it satisfies Phi_sigma <= Omega pointwise, with equality
when sigma matches the actual signs of v_c - f_I.  Hence

    sup_box Omega = max over threshold sign vectors of sup_box Phi_sigma,

and each inner sup is a quadratic-over-quadratic maximised in closed form
over the (A, T) parallelogram.  The winning point is a genuine maximiser of
Omega, so the supremum is attained at a rational interval and the returned
enclosure is exact up to an optional tolerance-based pruning of cell pairs
whose cheap upper bound (half the spanned value range) cannot beat the
current best.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numerics import DEFAULT_BITS, DomainError, Enclosure
from .stepfn import Interval, StepFunction

_ZERO = Fraction(0)


def mean_osc(f: StepFunction, interval: Interval) -> Fraction:
    """Exact mean oscillation: average over I of |f - f_I|."""
    avg = f.average(interval)
    total = _ZERO
    for lo, hi, v in f.cells():
        cut_lo = max(lo, interval.a)
        cut_hi = min(hi, interval.b)
        if cut_lo < cut_hi:
            total += abs(v - avg) * (cut_hi - cut_lo)
    return total / interval.length


def positive_part_osc(f: StepFunction, interval: Interval) -> Fraction:
    """(2/|I|) * integral over {f > f_I} of (f - f_I); equals mean_osc."""
    avg = f.average(interval)
    above = f.super_level(interval, avg, "strict-above")
    mass = f.integral_over(above) - avg * above.measure
    return 2 * mass / interval.length


@dataclass(frozen=True)
class BmoEnclosure:
    """Certified BMO norm: bounds.lo is attained at witness, exactly."""

    bounds: Enclosure
    witness: Interval
    tolerance: Fraction


def _affine_clip(c0: Fraction, c1: Fraction, lo: Fraction, hi: Fraction):
    """Sub-interval of [lo, hi] where c0 + c1*T >= 0, or None."""
    if c1 == 0:
        return (lo, hi) if c0 >= 0 else None
    root = -c0 / c1
    if c1 > 0:
        lo = max(lo, root)
    else:
        hi = min(hi, root)
    return (lo, hi) if lo <= hi else None


def _cheap_box_bound(grid, values, prefix, i, j, v_min, v_max):
    """Upper bound for Omega over the (i, j) cell-pair box.

    Combines half the spanned value range with the harmonic bound
    2ab/(a+b), a = v_max - min f_I, b = max f_I - v_min, using the exact
    f_I corner range; either factor zero forces Omega = 0 on the box.
    """
    spread = (v_max - v_min) / 2
    if spread == 0:
        return _ZERO
    vi, vj = values[i], values[j]
    wi = grid[i + 1] - grid[i]
    wj = grid[j + 1] - grid[j]
    width = grid[j] - grid[i + 1]
    mass = prefix[j] - prefix[i + 1]
    corners = []
    for a_stub in (_ZERO, wi):
        for b_stub in (_ZERO, wj):
            corners.append(
                (vi * a_stub + mass + vj * b_stub) / (a_stub + width + b_stub)
            )
    a = v_max - min(corners)
    b = max(corners) - v_min
    if a <= 0 or b <= 0:
        return _ZERO
    return min(spread, 2 * a * b / (a + b))


class _BoxOptimizer:
    """Exact supremum of Omega over intervals with endpoints in cells (i, j)."""

    def __init__(self, f: StepFunction, grid, values, prefix, i: int, j: int):
        self.grid = grid
        self.values = values
        self.i = i
        self.j = j
        self.left = grid[i + 1]
        self.right = grid[j]
        self.wi = grid[i + 1] - grid[i]
        self.wj = grid[j + 1] - grid[j]
        self.W = self.right - self.left
        self.M = prefix[j] - prefix[i + 1]
        inner_vw = _ZERO
        inner_w = _ZERO
        pairs = []
        for c in range(i + 1, j):
            w = grid[c + 1] - grid[c]
            inner_vw += values[c] * w
            inner_w += w
            pairs.append((values[c], w))
        pairs.sort()
        self.sorted_vals = [p[0] for p in pairs]
        self.pref_vw = [_ZERO]
        self.pref_w = [_ZERO]
        for v, w in pairs:
            self.pref_vw.append(self.pref_vw[-1] + v * w)
            self.pref_w.append(self.pref_w[-1] + w)
        self.total_vw = inner_vw
        self.total_w = inner_w

    def _inner_sums(self, threshold: Optional[Fraction]):
        """(sum sigma*v*w, sum sigma*w) with sigma = +1 iff v > threshold."""
        if threshold is None:
            return self.total_vw, self.total_w
        k = bisect_right(self.sorted_vals, threshold)
        below_vw, below_w = self.pref_vw[k], self.pref_w[k]
        return self.total_vw - 2 * below_vw, self.total_w - 2 * below_w

    def average_range(self) -> tuple[Fraction, Fraction]:
        """Exact range of f_I over the box.

        f_I is a monotone linear-fractional function of each stub length, so
        its extremes over the (A, B) rectangle sit at the four corners.
        """
        vi, vj = self.values[self.i], self.values[self.j]
        corners = []
        for a_stub in (_ZERO, self.wi):
            for b_stub in (_ZERO, self.wj):
                mass = vi * a_stub + self.M + vj * b_stub
                length = a_stub + self.W + b_stub
                corners.append(mass / length)
        return min(corners), max(corners)

    def patterns(self):
        """Sign-pattern thresholds realized somewhere in the box.

        The true sign vector at a point corresponds to the largest cell
        value <= f_I, so only thresholds whose slot meets [f_min, f_max]
        can ever be the pointwise-equality pattern.
        """
        f_min, f_max = self.average_range()
        distinct = sorted(
            {self.values[c] for c in range(self.i, self.j + 1)}
        )
        out = []
        for k, d in enumerate(distinct):
            if d > f_max:
                break
            nxt_ok = k + 1 == len(distinct) or distinct[k + 1] >= f_min
            if nxt_ok:
                out.append(d)
        return out

    def supremum(self):
        """Return (value, interval) attaining the exact box supremum."""
        best_val = None
        best_ab = None
        vi, vj = self.values[self.i], self.values[self.j]
        t_min = self.W
        t_max = self.W + self.wi + self.wj
        kinks = sorted({t_min, t_max, self.W + self.wi, self.W + self.wj})

        for threshold in self.patterns():
            u_bar, v_bar = self._inner_sums(threshold)
            if threshold is None:
                si = sj = 1
            else:
                si = 1 if vi > threshold else -1
                sj = 1 if vj > threshold else -1
            u_a = si * vi - sj * vj
            u_t = sj * vj
            u_0 = u_bar - sj * vj * self.W
            s_a = si - sj
            s_t = sj
            s_0 = v_bar - sj * self.W
            m_a = vi - vj
            m_t = vj
            m_0 = self.M - vj * self.W

            alpha = -m_a * s_a
            beta1 = u_a - m_a * s_t - s_a * m_t
            beta0 = -(m_a * s_0 + s_a * m_0)
            g2 = u_t - m_t * s_t
            g1 = u_0 - m_t * s_0 - m_0 * s_t
            g0 = -m_0 * s_0

            for ta, tb in zip(kinks, kinks[1:]):
                # affine stub window on this T-piece
                lo_line = (_ZERO, _ZERO) if tb <= self.W + self.wj else (
                    -(self.W + self.wj), Fraction(1))
                hi_line = (-self.W, Fraction(1)) if tb <= self.W + self.wi else (
                    self.wi, _ZERO)
                cands = [lo_line, hi_line]
                if alpha < 0:
                    cands.append((-beta0 / (2 * alpha), -beta1 / (2 * alpha)))
                for idx, (p, q) in enumerate(cands):
                    span = (ta, tb)
                    if idx == 2:
                        # vertex valid only where A_lo <= A_v <= A_hi
                        span = _affine_clip(p - lo_line[0], q - lo_line[1], *span)
                        if span is None:
                            continue
                        span = _affine_clip(hi_line[0] - p, hi_line[1] - q, *span)
                        if span is None:
                            continue
                    n2 = alpha * q * q + beta1 * q + g2
                    n1 = 2 * alpha * p * q + beta1 * p + beta0 * q + g1
                    n0 = alpha * p * p + beta0 * p + g0
                    for t_at in self._quadratic_argmax(n0, n1, n2, span):
                        val = n2 + (n1 + n0 / t_at) / t_at
                        if best_val is None or val > best_val:
                            a_stub = p + q * t_at
                            best_val = val
                            best_ab = (self.left - a_stub,
                                       self.left - a_stub + t_at)
        return best_val, Interval(best_ab[0], best_ab[1])

    @staticmethod
    def _quadratic_argmax(n0, n1, n2, span):
        """T-points maximising n2 + n1/T + n0/T^2 on span (via w = 1/T)."""
        ta, tb = span
        points = [ta, tb] if ta != tb else [ta]
        if n0 < 0 and n1 != 0:
            w_v = -n1 / (2 * n0)
            if 1 / tb <= w_v <= 1 / ta:
                points.append(1 / w_v)
        return points


def bmo_norm(
    f: StepFunction,
    tolerance: Fraction,
    bits: int = DEFAULT_BITS,
) -> BmoEnclosure:
    """Certified enclosure of sup_{I ⊆ domain} Omega(f; I).

    The supremum over step functions is attained and rational; the returned
    lower bound is that attained value (witnessed), and the upper bound
    exceeds it only when a cell pair was pruned by the tolerance test.
    """
    tolerance = Fraction(tolerance)
    if tolerance <= 0:
        raise DomainError("tolerance must be positive")

    grid = f.grid
    values = f.values
    n = len(values)
    if n == 1:
        return BmoEnclosure(
            Enclosure.exact(0, bits), f.domain, tolerance
        )

    prefix = [_ZERO]
    for c in range(n):
        prefix.append(prefix[-1] + values[c] * (grid[c + 1] - grid[c]))

    best = _ZERO
    witness = f.domain

    # two-cell straddles: sup is |jump|/2, attained at equal stubs
    for c in range(n - 1):
        jump = abs(values[c + 1] - values[c])
        if jump == 0:
            continue
        half = min(grid[c + 1] - grid[c], grid[c + 2] - grid[c + 1])
        val = jump / 2
        if val > best:
            best = val
            witness = Interval(grid[c + 1] - half, grid[c + 1] + half)

    # remaining cell pairs, best cheap bound first so pruning bites early
    boxes = []
    for i in range(n):
        v_min = v_max = values[i]
        for j in range(i + 2, n):
            v_min = min(v_min, values[j - 1], values[j])
            v_max = max(v_max, values[j - 1], values[j])
            bound = _cheap_box_bound(
                grid, values, prefix, i, j, v_min, v_max
            )
            if bound > 0:
                boxes.append((bound, i, j))
    boxes.sort(key=lambda item: item[0], reverse=True)

    pruned_bound = None
    for bound, i, j in boxes:
        if bound <= best + tolerance:
            pruned_bound = bound
            break
        val, interval = _BoxOptimizer(f, grid, values, prefix, i, j).supremum()
        if val > best:
            best = val
            witness = interval

    hi = best if pruned_bound is None else max(best, pruned_bound)
    return BmoEnclosure(Enclosure(best, hi, bits), witness, tolerance)
