"""Exact rational scalars and rigorously outward-rounded enclosures.

Every scalar in this package is either an exact rational
(:class:`fractions.Fraction`) or an :class:`Enclosure`: a closed interval
``[lo, hi]`` with dyadic rational endpoints guaranteed to contain the exact
mathematical value.  All enclosure operations round outward, so containment
survives arbitrary composition.  The transcendental kernels (exp, log) run
in integer fixed point with explicit truncation remainders; correctness
never depends on floating-point rounding behaviour.

Sign decisions start at ``DEFAULT_BITS`` and retry at doubled precision up
to ``MAX_BITS``; an undetermined sign past the cap raises
:class:`PrecisionExhausted` instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

Rational = Fraction
RationalLike = Union[Fraction, int]

DEFAULT_BITS = 128
MAX_BITS = 2048

# Arguments beyond this would need million-bit dyadics for e**x.
_EXP_ARG_LIMIT = Fraction(1 << 14)

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class PrecisionExhausted(ArithmeticError):
    """A sign or comparison stayed undetermined up to the precision cap."""


class EnclosureOverflow(OverflowError):
    """Result magnitude exceeds the supported exponent range."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (ASCII or U+2212 minus) into a Fraction."""
    cleaned = text.strip().replace("−", "-")
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational: {text!r}") from exc


def rational_str(q: Fraction) -> str:
    """Canonical ``"p/q"`` / ``"p"`` rendering (inverse of parse_rational)."""
    return str(q)


def _scaled_floor(n: int, d: int, e: int) -> int:
    # floor(n / (d * 2**e)), any sign of n
    if e >= 0:
        return n // (d << e)
    return (n << -e) // d


def round_down(x: Fraction, bits: int) -> Fraction:
    """Largest dyadic rational with a <= ``bits``-bit mantissa that is <= x."""
    if x == 0:
        return _ZERO
    n, d = x.numerator, x.denominator
    e = n.bit_length() - d.bit_length() - bits
    q = _scaled_floor(n, d, e)
    # the bit-length estimate is off by at most one; renormalize mantissa
    for _ in range(64):
        size = abs(q).bit_length()
        if size > bits + 1:
            e += size - bits
        elif size < bits:
            e -= bits - size
        else:
            break
        q = _scaled_floor(n, d, e)
    if e >= 0:
        return Fraction(q << e)
    return Fraction(q, 1 << -e)


def round_up(x: Fraction, bits: int) -> Fraction:
    """Smallest dyadic rational with a <= ``bits``-bit mantissa that is >= x."""
    return -round_down(-x, bits)


@dataclass(frozen=True)
class Enclosure:
    """Certified interval ``[lo, hi]`` containing an exact real value.

    ``lo`` and ``hi`` are exact rationals (dyadic after any rounding step);
    ``bits`` records the mantissa precision used when the value was rounded.
    Point enclosures (``lo == hi``) represent exactly known rationals.
    """

    lo: Fraction
    hi: Fraction
    bits: int = DEFAULT_BITS

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"inverted enclosure [{self.lo}, {self.hi}]")
        if self.bits < 1:
            raise ValueError("bits must be positive")

    @staticmethod
    def exact(value: RationalLike, bits: int = DEFAULT_BITS) -> "Enclosure":
        v = Fraction(value)
        return Enclosure(v, v, bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: RationalLike) -> bool:
        return self.lo <= value <= self.hi

    def contains_enclosure(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def sign(self) -> int:
        """-1 / +1 when certified; 0 when zero or undetermined (never wrong)."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo, self.bits)

    def __abs__(self) -> "Enclosure":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(_ZERO, max(-self.lo, self.hi), self.bits)

    def _coerce(self, other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.exact(Fraction(other), self.bits)

    def _out(self, lo: Fraction, hi: Fraction, bits: int) -> "Enclosure":
        return Enclosure(round_down(lo, bits), round_up(hi, bits), bits)

    def __add__(self, other) -> "Enclosure":
        o = self._coerce(other)
        bits = max(self.bits, o.bits)
        return self._out(self.lo + o.lo, self.hi + o.hi, bits)

    __radd__ = __add__

    def __sub__(self, other) -> "Enclosure":
        o = self._coerce(other)
        bits = max(self.bits, o.bits)
        return self._out(self.lo - o.hi, self.hi - o.lo, bits)

    def __rsub__(self, other) -> "Enclosure":
        return self._coerce(other).__sub__(self)

    def __mul__(self, other) -> "Enclosure":
        o = self._coerce(other)
        bits = max(self.bits, o.bits)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return self._out(min(products), max(products), bits)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Enclosure":
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise DomainError("division by an enclosure containing zero")
        bits = max(self.bits, o.bits)
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return self._out(min(quotients), max(quotients), bits)

    def __rtruediv__(self, other) -> "Enclosure":
        return self._coerce(other).__truediv__(self)

    def rounded(self, bits: int) -> "Enclosure":
        return Enclosure(round_down(self.lo, bits), round_up(self.hi, bits), bits)

    def certainly_lt(self, other) -> bool:
        o = self._coerce(other)
        return self.hi < o.lo

    def certainly_gt(self, other) -> bool:
        o = self._coerce(other)
        return self.lo > o.hi

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Enclosure({self.lo}, {self.hi}, bits={self.bits})"


def min_enclosure(*values: Enclosure) -> Enclosure:
    bits = max(v.bits for v in values)
    return Enclosure(min(v.lo for v in values), min(v.hi for v in values), bits)


def max_enclosure(*values: Enclosure) -> Enclosure:
    bits = max(v.bits for v in values)
    return Enclosure(max(v.lo for v in values), max(v.hi for v in values), bits)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _series_terms_needed(work_bits: int) -> int:
    # smallest N with 2 * 2**-N / N! <= 2**-(work_bits + 2)
    threshold = 1 << (work_bits + 3)
    acc = 1
    n = 0
    while (1 << n) * acc < threshold:
        n += 1
        acc *= n
    return n


def _exp_kernel(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Two-sided bound on e**x for exact rational x.

    Halving reduction keeps the series argument rational: e**x =
    (e**(x/2**k))**(2**k) with |x|/2**k <= 1/2, so the Taylor partial sum and
    its Lagrange remainder are exact integer fixed-point quantities.
    """
    if x == 0:
        return (_ONE, _ONE)
    if x < 0:
        lo, hi = _exp_kernel(-x, bits)
        return (1 / hi, 1 / lo)
    if x > _EXP_ARG_LIMIT:
        raise EnclosureOverflow(f"exp argument {x} beyond supported range")

    k = 0
    while x > _HALF * (1 << k):
        k += 1
    work = bits + 2 * k + 24
    one = 1 << work
    r = x / (1 << k)
    p, d = r.numerator, r.denominator
    n_terms = _series_terms_needed(work)

    t_lo = t_hi = one
    for j in range(n_terms, 0, -1):
        dj = d * j
        t_lo = (t_lo * p) // dj + one
        t_hi = _ceil_div(t_hi * p, dj) + one
    # positive-term tail: 0 <= R <= 2**-N / (N+1)!  (scaled by 2**work)
    rem = (one >> n_terms) // math.factorial(n_terms + 1) + 1
    t_hi += rem

    for _ in range(k):
        t_lo = (t_lo * t_lo) >> work
        t_hi = _ceil_div(t_hi * t_hi, one)
    return (Fraction(t_lo, one), Fraction(t_hi, one))


def exp_enclosure(x: Union[RationalLike, Enclosure], bits: int = DEFAULT_BITS) -> Enclosure:
    """Enclosure of e**x; monotone evaluation at enclosure endpoints."""
    if bits < 32:
        raise DomainError("precision must be at least 32 bits")
    if isinstance(x, Enclosure):
        lo = _exp_kernel(x.lo, bits)[0]
        hi = _exp_kernel(x.hi, bits)[1]
    else:
        lo, hi = _exp_kernel(Fraction(x), bits)
    return Enclosure(round_down(lo, bits), round_up(hi, bits), bits)


def _atanh_bounds(t: Fraction, work: int) -> tuple[int, int]:
    """Scaled bounds on atanh(t) for rational 0 < t <= 1/3 (positive series)."""
    p, d = t.numerator, t.denominator
    p2, d2 = p * p, d * d
    pw_lo = (p << work) // d
    pw_hi = _ceil_div(p << work, d)
    s_lo = 0
    s_hi = 0
    j = 0
    while True:
        k = 2 * j + 1
        s_lo += pw_lo // k
        s_hi += _ceil_div(pw_hi, k)
        pw_lo = (pw_lo * p2) // d2
        pw_hi = _ceil_div(pw_hi * p2, d2)
        j += 1
        # remaining tail <= t**(2j+1) / (1 - t**2) <= (9/8) * t**(2j+1)
        if pw_hi <= 4:
            s_hi += 2 * pw_hi + 1
            return (s_lo, s_hi)


_LN2_CACHE: dict[int, tuple[int, int]] = {}


def _ln2_bounds(work: int) -> tuple[int, int]:
    if work not in _LN2_CACHE:
        lo, hi = _atanh_bounds(Fraction(1, 3), work)
        _LN2_CACHE[work] = (2 * lo, 2 * hi)
    return _LN2_CACHE[work]


def _ln_kernel(c: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Two-sided bound on ln(c) for exact rational c > 0.

    Range-reduce c = 2**n * u with u in [3/4, 3/2), then
    ln u = 2 atanh((u-1)/(u+1)) with |(u-1)/(u+1)| <= 1/5.
    """
    if c <= 0:
        raise DomainError("log of a nonpositive value")
    work = bits + 24
    n = c.numerator.bit_length() - c.denominator.bit_length()
    u = c / (1 << n) if n >= 0 else c * (1 << -n)
    while u >= Fraction(3, 2):
        u /= 2
        n += 1
    while u < Fraction(3, 4):
        u *= 2
        n -= 1

    if u == 1:
        core_lo = core_hi = 0
    elif u > 1:
        lo, hi = _atanh_bounds((u - 1) / (u + 1), work)
        core_lo, core_hi = 2 * lo, 2 * hi
    else:
        v = 1 / u
        lo, hi = _atanh_bounds((v - 1) / (v + 1), work)
        core_lo, core_hi = -2 * hi, -2 * lo

    ln2_lo, ln2_hi = _ln2_bounds(work)
    if n >= 0:
        total_lo = n * ln2_lo + core_lo
        total_hi = n * ln2_hi + core_hi
    else:
        total_lo = n * ln2_hi + core_lo
        total_hi = n * ln2_lo + core_hi
    one = 1 << work
    return (Fraction(total_lo, one), Fraction(total_hi, one))


def log_enclosure(x: Union[RationalLike, Enclosure], bits: int = DEFAULT_BITS) -> Enclosure:
    """Enclosure of ln(x); requires x certifiably positive."""
    if isinstance(x, Enclosure):
        if x.lo <= 0:
            raise DomainError("log argument not certifiably positive")
        lo = _ln_kernel(x.lo, bits)[0]
        hi = _ln_kernel(x.hi, bits)[1]
    else:
        q = Fraction(x)
        if q <= 0:
            raise DomainError("log argument not certifiably positive")
        lo, hi = _ln_kernel(q, bits)
    return Enclosure(round_down(lo, bits), round_up(hi, bits), bits)


def _dyadic_pow(x: Fraction, n: int, bits: int, up: bool) -> Fraction:
    """Directed x**n for x > 0, n >= 1, rounding every partial product."""
    rnd = round_up if up else round_down
    result = None
    base = x
    m = n
    while m:
        if m & 1:
            result = base if result is None else rnd(result * base, bits)
        m >>= 1
        if m:
            base = rnd(base * base, bits)
    return result if result is not None else _ONE


def pow_enclosure(
    base: Union[RationalLike, Enclosure],
    exponent: Union[RationalLike, Enclosure],
    bits: int = DEFAULT_BITS,
) -> Enclosure:
    """Enclosure of base**exponent for certifiably positive base.

    Integer exponents use directed binary powering (exact apart from the
    outward rounding); general exponents go through exp(exponent * log base).
    """
    b = base if isinstance(base, Enclosure) else Enclosure.exact(Fraction(base), bits)
    if b.lo <= 0:
        raise DomainError("pow base not certifiably positive")
    if not isinstance(exponent, Enclosure):
        e = Fraction(exponent)
        if e.denominator == 1:
            n = e.numerator
            if n == 0:
                return Enclosure.exact(1, bits)
            work = bits + 8
            if n > 0:
                lo = _dyadic_pow(b.lo, n, work, up=False)
                hi = _dyadic_pow(b.hi, n, work, up=True)
            else:
                lo = 1 / _dyadic_pow(b.hi, -n, work, up=True)
                hi = 1 / _dyadic_pow(b.lo, -n, work, up=False)
            return Enclosure(round_down(lo, bits), round_up(hi, bits), bits)
        exponent = Enclosure.exact(e, bits)
    return exp_enclosure(exponent * log_enclosure(b, bits + 16), bits)


def certified_sign(
    make: Callable[[int], Enclosure],
    bits: int = DEFAULT_BITS,
    cap: int = MAX_BITS,
) -> int:
    """Sign of the exact value enclosed by ``make(bits)``.

    Retries at doubled precision while the sign is undetermined; a point
    enclosure at zero is a certified zero.  Raises PrecisionExhausted past
    the cap rather than returning a possibly wrong sign.
    """
    p = bits
    while True:
        e = make(p)
        s = e.sign()
        if s != 0:
            return s
        if e.lo == 0 == e.hi:
            return 0
        if p >= cap:
            raise PrecisionExhausted(
                f"sign undetermined within [{e.lo}, {e.hi}] at {p} bits"
            )
        p = min(cap, 2 * p)


def certified_floor(
    make: Callable[[int], Enclosure],
    bits: int = DEFAULT_BITS,
    cap: int = MAX_BITS,
) -> int:
    """floor of the enclosed value, certified by endpoint agreement."""
    p = bits
    while True:
        e = make(p)
        lo_floor = e.lo.numerator // e.lo.denominator
        hi_floor = e.hi.numerator // e.hi.denominator
        if lo_floor == hi_floor:
            return lo_floor
        if p >= cap:
            raise PrecisionExhausted(
                f"floor undetermined within [{e.lo}, {e.hi}] at {p} bits"
            )
        p = min(cap, 2 * p)


_E_CACHE: dict[int, Enclosure] = {}
_INV_E_CACHE: dict[int, Enclosure] = {}


def e_enclosure(bits: int = DEFAULT_BITS) -> Enclosure:
    if bits not in _E_CACHE:
        _E_CACHE[bits] = exp_enclosure(1, bits)
    return _E_CACHE[bits]


def inv_e_enclosure(bits: int = DEFAULT_BITS) -> Enclosure:
    if bits not in _INV_E_CACHE:
        _INV_E_CACHE[bits] = exp_enclosure(-1, bits)
    return _INV_E_CACHE[bits]


def decimal_str(x: Fraction, digits: int = 15, direction: str = "down") -> str:
    """Exact decimal rendering rounded down or up to ``digits`` places."""
    scale = 10 ** digits
    num = x.numerator * scale
    den = x.denominator
    q = num // den if direction == "down" else _ceil_div(num, den)
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, scale)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{str(frac).zfill(digits)}"


def enclosure_to_json(e: Enclosure, digits: int = 40) -> dict:
    """Serialize with outward decimal rendering so containment survives."""
    return {
        "lo": decimal_str(e.lo, digits, "down"),
        "hi": decimal_str(e.hi, digits, "up"),
        "bits": e.bits,
    }


def enclosure_from_json(data: dict) -> Enclosure:
    lo = parse_rational(data["lo"])
    hi = parse_rational(data["hi"])
    return Enclosure(lo, hi, int(data["bits"]))
