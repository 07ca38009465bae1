import random
from fractions import Fraction

import pytest

from jnsharp.numerics import (
    DEFAULT_BITS,
    DomainError,
    Enclosure,
    EnclosureOverflow,
    PrecisionExhausted,
    certified_floor,
    certified_sign,
    decimal_str,
    e_enclosure,
    enclosure_from_json,
    enclosure_to_json,
    exp_enclosure,
    inv_e_enclosure,
    log_enclosure,
    parse_rational,
    pow_enclosure,
    round_down,
    round_up,
)
from conftest import REF_E, REF_EXP3, REF_EXP_4_OVER_E, REF_INV_E, REF_LN2, REF_SQRT2


class TestRounding:
    def test_directed(self):
        rng = random.Random(1)
        for _ in range(2000):
            x = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**6))
            lo = round_down(x, 64)
            hi = round_up(x, 64)
            assert lo <= x <= hi
            assert hi - lo <= abs(x) * Fraction(1, 2**62) + Fraction(1, 2**200)

    def test_dyadic_fixed_point(self):
        # values already representable round to themselves
        for x in (Fraction(0), Fraction(1), Fraction(-3), Fraction(5, 8)):
            assert round_down(x, 64) == x == round_up(x, 64)


class TestExp:
    def test_exp_zero(self):
        e = exp_enclosure(0, 64)
        assert e.contains(1)
        assert e.width <= Fraction(1, 2**60)

    def test_exp_one_reference(self):
        e = exp_enclosure(1, 128)
        assert e.lo < REF_E < e.hi

    def test_exp_4_over_e(self):
        x = 4 * inv_e_enclosure(128)
        e = exp_enclosure(x, 128)
        assert e.lo < REF_EXP_4_OVER_E < e.hi
        half = e * Fraction(1, 2)
        # paper-stated decimal prefix of the sharp leading constant
        assert Fraction("2.17792") < half.lo and half.hi < Fraction("2.17793")

    def test_width_postcondition(self):
        for x in (0, 1, -1, 4, -4, 64, -64, Fraction(4, 7), Fraction(-63, 2)):
            for bits in (64, 128, 256):
                e = exp_enclosure(x, bits)
                limit = Fraction(2) ** (3 - bits) * max(Fraction(1), e.hi)
                assert e.width <= limit, (x, bits)

    def test_overflow_signal(self):
        with pytest.raises(EnclosureOverflow):
            exp_enclosure(1 << 20, 64)

    def test_min_precision(self):
        with pytest.raises(DomainError):
            exp_enclosure(1, 16)


class TestLog:
    def test_log_one(self):
        e = log_enclosure(1, 64)
        assert e.contains(0)
        assert e.width <= Fraction(1, 2**60)

    def test_log_two_reference(self):
        e = log_enclosure(2, 128)
        assert e.lo < REF_LN2 < e.hi

    def test_inverse_composition(self):
        e = log_enclosure(exp_enclosure(3, 128), 128)
        assert e.contains(3)
        inner = exp_enclosure(3, 128)
        assert inner.lo < REF_EXP3 < inner.hi

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            log_enclosure(0, 64)
        with pytest.raises(DomainError):
            log_enclosure(Fraction(-1, 2), 64)
        with pytest.raises(DomainError):
            log_enclosure(Enclosure(Fraction(-1), Fraction(2)), 64)


class TestPow:
    def test_integer_power_point(self):
        p = pow_enclosure(Enclosure.exact(2), 2, 64)
        assert p.lo == 4 == p.hi

    def test_rational_power_oracle(self):
        p = pow_enclosure(Fraction(3, 2), 2, 128)
        assert p.contains(Fraction(9, 4))

    def test_sqrt_two(self):
        p = pow_enclosure(Enclosure.exact(2), Fraction(1, 2), 128)
        assert p.lo < REF_SQRT2 < p.hi

    def test_negative_integer_exponent(self):
        p = pow_enclosure(Fraction(3, 2), -2, 128)
        assert p.contains(Fraction(4, 9))

    def test_nonpositive_base(self):
        with pytest.raises(DomainError):
            pow_enclosure(Fraction(0), 2, 64)
        with pytest.raises(DomainError):
            pow_enclosure(Enclosure(Fraction(-1), Fraction(1)), 2, 64)

    def test_enclosure_exponent(self):
        p = pow_enclosure(Enclosure.exact(2), Enclosure.exact(Fraction(1, 2)), 128)
        assert p.lo < REF_SQRT2 < p.hi


class TestContainment:
    def test_integer_powers_bulk(self):
        # exact rational evaluation lies inside the enclosure, 10^4 cases
        rng = random.Random(7)
        for _ in range(10**4):
            q = Fraction(rng.randint(1, 400), rng.randint(1, 400))
            k = rng.randint(0, 12)
            enc = pow_enclosure(q, k, 96)
            assert enc.contains(q**k)

    def test_exp_additivity_overlap(self):
        rng = random.Random(8)
        for _ in range(300):
            a = Fraction(rng.randint(-40, 40), rng.randint(1, 16))
            b = Fraction(rng.randint(-40, 40), rng.randint(1, 16))
            lhs = exp_enclosure(a + b, 128)
            rhs = exp_enclosure(a, 128) * exp_enclosure(b, 128)
            assert lhs.lo <= rhs.hi and rhs.lo <= lhs.hi

    def test_log_of_exp_contains_argument(self):
        rng = random.Random(9)
        for _ in range(200):
            q = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
            assert log_enclosure(exp_enclosure(q, 128), 128).contains(q)


class TestRefinement:
    def test_monotone_refinement(self):
        rng = random.Random(10)
        for _ in range(100):
            q = Fraction(rng.randint(1, 99), rng.randint(1, 99))
            for op in (
                lambda b: exp_enclosure(q, b),
                lambda b: log_enclosure(q, b),
                lambda b: pow_enclosure(q, Fraction(1, 3), b),
            ):
                coarse = op(96)
                fine = op(96 + 32)
                assert coarse.lo <= fine.lo and fine.hi <= coarse.hi
                assert fine.width <= coarse.width


class TestSign:
    def test_never_wrong(self):
        rng = random.Random(11)
        for _ in range(3000):
            q = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
            s = Enclosure.exact(q).sign()
            if q > 0:
                assert s == 1
            elif q < 0:
                assert s == -1
            else:
                assert s == 0

    def test_certified_sign_with_retry(self):
        # e*x - k with x = k/e cannot be resolved; nearby values can
        assert certified_sign(lambda p: e_enclosure(p) * Fraction(1, 2) - 1, 64) == 1
        assert certified_sign(lambda p: e_enclosure(p) * Fraction(1, 3) - 1, 64) == -1
        assert certified_sign(lambda p: Enclosure.exact(0), 64) == 0

    def test_certified_sign_exhaustion(self):
        with pytest.raises(PrecisionExhausted):
            certified_sign(lambda p: Enclosure(Fraction(-1), Fraction(1)), 64, cap=128)

    def test_certified_floor(self):
        assert certified_floor(lambda p: e_enclosure(p), 64) == 2
        assert certified_floor(lambda p: e_enclosure(p) * 10, 64) == 27


class TestSerialization:
    def test_rational_strings(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational("-2") == Fraction(-2)
        assert parse_rational("−1/2") == Fraction(-1, 2)
        with pytest.raises(DomainError):
            parse_rational("x")

    def test_decimal_str_directed(self):
        x = Fraction(1, 3)
        assert decimal_str(x, 5, "down") == "0.33333"
        assert decimal_str(x, 5, "up") == "0.33334"
        assert decimal_str(-x, 5, "down") == "-0.33334"
        assert decimal_str(-x, 5, "up") == "-0.33333"

    def test_enclosure_json_roundtrip_widens_outward(self):
        e = exp_enclosure(1, 128)
        back = enclosure_from_json(enclosure_to_json(e, digits=45))
        assert back.lo <= e.lo and e.hi <= back.hi
        assert back.lo < REF_E < back.hi
        assert inv_e_enclosure(128).lo < REF_INV_E < inv_e_enclosure(128).hi
