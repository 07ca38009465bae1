"""Sharp-constant analytic layer for the exponential tail bound.

The distribution-side constant is phi(xi), the infimum over gamma in (0,1)
of the single active term min(2 gamma^k, 1) at k = floor(gamma e xi).  For
fixed k the term increases in gamma, so the infimum is approached at the
window left endpoints gamma = k/(e xi), which yields the closed form

    phi(xi) = min(1, min over integers 1 <= k < e xi of 2 (k/(e xi))^k),

validated here against a brute-force grid oracle over gamma.  The envelope
phi(xi) <= (1/2) e^{4/e - xi} produces the tail bound with the constants
C1 = (1/2) e^{4/e} and C2 = 2/e; the sequence c_m = 2 nu(m) dominating
phi(xi) e^xi on [m, m+1] decreases to 2, certified term by term through
enclosure comparisons, with the derivative bracket of nu available for the
calculus-based monotonicity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .numerics import (
    DEFAULT_BITS,
    DomainError,
    Enclosure,
    certified_floor,
    certified_sign,
    e_enclosure,
    exp_enclosure,
    inv_e_enclosure,
    log_enclosure,
    min_enclosure,
    pow_enclosure,
)

_HALF = Fraction(1, 2)
_ONE = Fraction(1)


@dataclass(frozen=True)
class TailBoundConstants:
    """C1 = exp(4/e)/2 and C2 = 2/e as certified enclosures."""

    C1: Enclosure
    C2: Enclosure
    C1_expression: str = "exp(4/e)/2"
    C2_expression: str = "2/e"


_CONSTANTS_CACHE: dict[int, TailBoundConstants] = {}


def constants(bits: int = DEFAULT_BITS) -> TailBoundConstants:
    if bits not in _CONSTANTS_CACHE:
        inv_e = inv_e_enclosure(bits + 16)
        c2 = (2 * inv_e).rounded(bits)
        c1 = (exp_enclosure(4 * inv_e, bits + 16) * _HALF).rounded(bits)
        _CONSTANTS_CACHE[bits] = TailBoundConstants(c1, c2)
    return _CONSTANTS_CACHE[bits]


def _phi_rational(x: Fraction, bits: int) -> Enclosure:
    if x <= 0:
        raise DomainError("phi requires xi > 0")
    best = Enclosure.exact(1, bits)
    e_x_bits = bits + 16
    k = 1
    while True:
        # feasibility k < e*xi (never an exact tie: e*xi is irrational)
        sign = certified_sign(
            lambda p: e_enclosure(p) * x - k, e_x_bits
        )
        if sign < 0:
            break
        ratio = Enclosure.exact(k) / (e_enclosure(e_x_bits) * x)
        candidate = 2 * pow_enclosure(ratio, k, bits)
        best = min_enclosure(best, candidate)
        k += 1
    return best.rounded(bits)


def phi(xi: Union[Fraction, int, Enclosure], bits: int = DEFAULT_BITS) -> Enclosure:
    """Enclosure of phi(xi); nonincreasing, so enclosure input uses endpoints."""
    if isinstance(xi, Enclosure):
        upper = _phi_rational(xi.lo, bits)
        lower = _phi_rational(xi.hi, bits)
        return Enclosure(lower.lo, upper.hi, bits)
    return _phi_rational(Fraction(xi), bits)


def phi_oracle(
    xi: Union[Fraction, int], grid_size: int, bits: int = DEFAULT_BITS
) -> Fraction:
    """Exact minimum of the defining sum over the uniform gamma grid i/G.

    Each sampled value is an exact rational upper bound for phi(xi); the
    minimum over the grid converges to phi(xi) as the grid refines.  Within
    the gamma window where the active index equals k the sampled value
    increases with gamma, so only the first grid point of each window can
    realize the minimum; that reduces the scan to one candidate per k.
    """
    x = Fraction(xi)
    if x <= 0:
        raise DomainError("phi_oracle requires xi > 0")
    size = int(grid_size)
    if size < 10:
        raise DomainError("grid size must be at least 10")
    k_max = certified_floor(lambda p: e_enclosure(p) * x, bits)
    best = _ONE
    for k in range(1, k_max + 1):
        i_min = (
            certified_floor(
                lambda p: Enclosure.exact(k * size) / (e_enclosure(p) * x), bits
            )
            + 1
        )
        if i_min >= size:
            continue
        gamma = Fraction(i_min, size)
        active = certified_floor(lambda p: e_enclosure(p) * x * gamma, bits)
        if active != k:
            continue
        best = min(best, min(2 * gamma**k, _ONE))
    return best


def _phi_oracle_naive(
    xi: Union[Fraction, int], grid_size: int, bits: int = DEFAULT_BITS
) -> Fraction:
    """Reference scan over every grid gamma; used to validate the fast path."""
    x = Fraction(xi)
    best = _ONE
    for i in range(1, int(grid_size)):
        gamma = Fraction(i, int(grid_size))
        k = certified_floor(lambda p: e_enclosure(p) * x * gamma, bits)
        best = min(best, min(2 * gamma**k, _ONE))
    return best


@dataclass(frozen=True)
class EnvelopeCertificate:
    lhs: Enclosure
    rhs: Enclosure
    margin: Enclosure
    status: str

    @property
    def holds(self) -> bool:
        return self.status in ("proved-strict", "equality-within-enclosure")


def check_envelope(
    xi: Union[Fraction, int, Enclosure], bits: int = DEFAULT_BITS
) -> EnvelopeCertificate:
    """Certify phi(xi) <= (1/2) e^{4/e - xi}, reporting the margin.

    At xi = 4/e the two sides agree at 1/2, which rational xi can never hit
    exactly; an enclosure argument straddling that point reports
    equality-within-enclosure instead of a strict inequality.
    """
    lhs = phi(xi, bits)
    shifted = 4 * inv_e_enclosure(bits + 16) - xi
    rhs = exp_enclosure(shifted, bits) * _HALF
    margin = rhs - lhs
    if margin.lo > 0:
        status = "proved-strict"
    elif margin.hi < 0:
        status = "violated"
    elif margin.width <= 2 * (lhs.width + rhs.width):
        status = "equality-within-enclosure"
    else:
        status = "undetermined"
    return EnvelopeCertificate(lhs, rhs, margin, status)


def piecewise_bound_27(
    xi: Union[Fraction, int], m: int, bits: int = DEFAULT_BITS
) -> Enclosure:
    """2 min((m/(e xi))^m, ((m+1)/(e xi))^{m+1}) for xi in [m, m+1]."""
    x = Fraction(xi)
    if m < 1:
        raise DomainError("m must be at least 1")
    if not (m <= x <= m + 1):
        raise DomainError(f"xi = {x} outside [{m}, {m + 1}]")
    e_x = e_enclosure(bits + 16) * x
    low = 2 * pow_enclosure(Enclosure.exact(m) / e_x, m, bits)
    high = 2 * pow_enclosure(Enclosure.exact(m + 1) / e_x, m + 1, bits)
    return min_enclosure(low, high).rounded(bits)


def xi_crossover(m: int, bits: int = DEFAULT_BITS) -> Enclosure:
    """(1/e) (m+1)^{m+1} / m^m, the crossover of the two bounds in [m, m+1]."""
    if m < 1:
        raise DomainError("m must be at least 1")
    if m <= 512:
        ratio = Enclosure.exact(Fraction((m + 1) ** (m + 1), m**m), bits + 16)
    else:
        ratio = (m + 1) * pow_enclosure(Fraction(m + 1, m), m, bits + 16)
    return (ratio * inv_e_enclosure(bits + 16)).rounded(bits)


def eta(x: Union[Fraction, int], bits: int = DEFAULT_BITS) -> Enclosure:
    """(1 + 1/x)^x for rational x >= 1; exact powering at integer x."""
    q = Fraction(x)
    if q < 1:
        raise DomainError("eta requires x >= 1")
    base = 1 + 1 / q
    if q.denominator == 1:
        return pow_enclosure(base, q.numerator, bits)
    return exp_enclosure(
        Enclosure.exact(q) * log_enclosure(base, bits + 16), bits
    )


def mu(x: Union[Fraction, int], bits: int = DEFAULT_BITS) -> Enclosure:
    """eta(x) / (e - eta(x)); exceeds x for every x >= 1."""
    h = eta(x, bits + 16)
    gap = e_enclosure(bits + 16) - h
    if gap.lo <= 0:
        raise DomainError("could not certify eta(x) < e at this precision")
    return (h / gap).rounded(bits)


def nu(x: Union[Fraction, int], bits: int = DEFAULT_BITS) -> Enclosure:
    """(e^{eta(x)/e} / eta(x))^{x+1}."""
    q = Fraction(x)
    h = eta(q, bits + 16)
    ratio = exp_enclosure(h * inv_e_enclosure(bits + 16), bits + 16) / h
    return pow_enclosure(ratio, q + 1, bits)


def nu_prime_bracket(x: Union[Fraction, int], bits: int = DEFAULT_BITS) -> Enclosure:
    """The factor log(e/eta) - (1 - eta/e) log (1+1/x)^{1+x} of nu'(x).

    nu(x) is positive, so this bracket carries the sign of nu'(x).
    """
    q = Fraction(x)
    h = eta(q, bits + 16)
    log_term = (q + 1) * log_enclosure(1 + 1 / q, bits + 16)
    first = 1 - log_enclosure(h, bits + 16)
    second = (1 - h * inv_e_enclosure(bits + 16)) * log_term
    return (first - second).rounded(bits)


def c_seq(m: int, bits: int = DEFAULT_BITS) -> Enclosure:
    """c_m = 2 nu(m): the bound for phi(xi) e^xi on [m, m+1]; decreasing."""
    if m < 1:
        raise DomainError("m must be at least 1")
    return (2 * nu(m, bits + 8)).rounded(bits)


def tail_bound(
    alpha: Fraction,
    norm_upper: Fraction,
    measure: Fraction,
    bits: int = DEFAULT_BITS,
) -> Enclosure:
    """C1 * measure * exp(-C2 * alpha / norm_upper).

    Nonincreasing in alpha and nondecreasing in norm_upper, so any certified
    upper bound for the true norm yields a valid distribution bound.
    """
    a = Fraction(alpha)
    norm = Fraction(norm_upper)
    size = Fraction(measure)
    if a < 0 or norm <= 0 or size <= 0:
        raise DomainError("need alpha >= 0, norm_upper > 0, measure > 0")
    cs = constants(bits + 8)
    decay = exp_enclosure(-(cs.C2 * (a / norm)), bits + 8)
    return (cs.C1 * size * decay).rounded(bits)


def phi_rows(
    x_min: Fraction,
    x_max: Fraction,
    step: Fraction,
    bits: int = DEFAULT_BITS,
) -> Iterator[tuple[Fraction, Enclosure, Enclosure]]:
    """(xi, phi enclosure, envelope enclosure) over an inclusive grid."""
    if step <= 0 or x_min <= 0 or x_max < x_min:
        raise DomainError("need 0 < min <= max and positive step")
    x = Fraction(x_min)
    while x <= x_max:
        cert = check_envelope(x, bits)
        yield (x, cert.lhs, cert.rhs)
        x += step


def cm_rows(
    max_m: int, bits: int = DEFAULT_BITS
) -> Iterator[tuple[int, Enclosure]]:
    if max_m < 1:
        raise DomainError("max_m must be at least 1")
    for m in range(1, max_m + 1):
        yield (m, c_seq(m, bits))
