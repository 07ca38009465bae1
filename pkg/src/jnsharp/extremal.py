"""The two-bump extremal function and its sharpness certificates.

f = chi_[0,1/4) - chi_[3/4,1) on [0,1) has mean zero and BMO norm exactly
1/2, yet |f - f_I0| equals 2||f||_* on a set of measure 1/2.  The measured
tail therefore stays at 1/2 while the exponential bound at alpha =
2(1 - eps)||f||_* shrinks to 1/2 as eps -> 0, which pins the leading
constant of the bound from below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import tail_bound
from .numerics import DEFAULT_BITS, DomainError, Enclosure
from .stepfn import Interval, StepFunction

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


def make_extremal() -> StepFunction:
    """chi_[0,1/4) - chi_[3/4,1) on [0, 1)."""
    return StepFunction(
        Interval(_ZERO, Fraction(1)),
        (_QUARTER, Fraction(3, 4)),
        (Fraction(1), _ZERO, Fraction(-1)),
    )


def case1_osc(a_off: Fraction, b_off: Fraction) -> Fraction:
    """Oscillation on (1/4 - a_off, 1/4 + b_off): 2ab/(a+b)^2, at most 1/2."""
    a = Fraction(a_off)
    b = Fraction(b_off)
    if not (0 < a <= _QUARTER and 0 < b <= _QUARTER):
        raise DomainError("case 1 needs offsets in (0, 1/4]")
    return 2 * a * b / (a + b) ** 2


def case2_osc(a_off: Fraction, b_off: Fraction) -> Fraction:
    """Oscillation on (1/4 - a_off, 3/4 + b_off): 4a(4b+1)/(2a+2b+1)^2."""
    a = Fraction(a_off)
    b = Fraction(b_off)
    if not (0 < a <= _QUARTER and 0 <= b <= _QUARTER):
        raise DomainError("case 2 needs a in (0, 1/4] and b in [0, 1/4]")
    return 4 * a * (4 * b + 1) / (2 * a + 2 * b + 1) ** 2


@dataclass(frozen=True)
class SharpnessReport:
    epsilon: Fraction
    threshold: Fraction
    measured: Fraction
    bound: Enclosure
    ratio: Enclosure


def sharpness_check(epsilon: Fraction, bits: int = DEFAULT_BITS) -> SharpnessReport:
    """Tail measure at alpha = 2(1-eps)||f||_* versus the exponential bound.

    The measured tail equals exactly 1/2 for every eps in (0, 1); the ratio
    measured/bound is exp(-(4/e) eps), so it climbs to 1 as eps -> 0.
    """
    eps = Fraction(epsilon)
    if not (0 < eps < 1):
        raise DomainError("epsilon must lie in (0, 1)")
    f = make_extremal()
    threshold = 2 * (1 - eps) * _HALF
    measured = f.distribution(_ZERO, threshold)
    if measured != _HALF:
        raise AssertionError("extremal tail must equal 1/2 below the norm gap")
    bound = tail_bound(threshold, _HALF, f.domain.length, bits)
    ratio = Enclosure.exact(measured) / bound
    return SharpnessReport(eps, threshold, measured, bound, ratio)
