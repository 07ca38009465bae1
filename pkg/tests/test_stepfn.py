import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jnsharp.numerics import DomainError
from jnsharp.extremal import make_extremal
from jnsharp.stepfn import Interval, IntervalUnion, StepFunction

from conftest import make_random_step

HALF = Fraction(1, 2)


def halfstep():
    return StepFunction(Interval(Fraction(0), Fraction(1)), (HALF,), (Fraction(1), Fraction(0)))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=32)


class TestConstruction:
    def test_value_count(self):
        with pytest.raises(ValueError):
            StepFunction(Interval(Fraction(0), Fraction(1)), (HALF,), (Fraction(1),))

    def test_breakpoints_interior_increasing(self):
        dom = Interval(Fraction(0), Fraction(1))
        with pytest.raises(ValueError):
            StepFunction(dom, (Fraction(0),), (Fraction(1), Fraction(2)))
        with pytest.raises(ValueError):
            StepFunction(dom, (Fraction(3, 4), HALF), (Fraction(1), Fraction(2), Fraction(3)))

    def test_degenerate_interval(self):
        with pytest.raises(ValueError):
            Interval(Fraction(1), Fraction(1))

    def test_merge_equal_adjacent(self):
        f = StepFunction(
            Interval(Fraction(0), Fraction(1)),
            (Fraction(1, 4), HALF),
            (Fraction(1), Fraction(1), Fraction(2)),
        )
        assert f.breakpoints == (HALF,)
        assert f.values == (Fraction(1), Fraction(2))

    def test_normalization_idempotent(self):
        rng = random.Random(3)
        for _ in range(50):
            f = make_random_step(rng, rng.randint(2, 12))
            again = StepFunction(f.domain, f.breakpoints, f.values)
            assert again == f


class TestIntegral:
    def test_constant(self):
        f = StepFunction.constant(Interval(Fraction(0), Fraction(1)), Fraction(7, 3))
        assert f.integral() == Fraction(7, 3)
        assert f.average(Interval(Fraction(1, 8), Fraction(1, 2))) == Fraction(7, 3)

    def test_extremal_mean_zero(self):
        assert make_extremal().integral() == 0

    def test_half_window(self):
        f = halfstep()
        window = Interval(Fraction(1, 4), Fraction(3, 4))
        assert f.integral(window) == Fraction(1, 4)

    def test_half_window_riemann_oracle(self):
        # left-endpoint Riemann sum on a fine uniform grid
        f = halfstep()
        window = Interval(Fraction(1, 4), Fraction(3, 4))
        n = 100_000
        total = Fraction(0)
        width = window.length / n
        acc = 0
        for k in range(n):
            x = window.a + k * width
            acc += 1 if x < HALF else 0
        total = Fraction(acc) * width
        assert abs(total - f.integral(window)) <= Fraction(2, n)

    def test_split_additivity(self):
        rng = random.Random(4)
        for _ in range(100):
            f = make_random_step(rng, rng.randint(2, 10))
            cut = Fraction(rng.randint(1, 15), 16)
            whole = Interval(Fraction(0), Fraction(1))
            left = Interval(Fraction(0), cut)
            right = Interval(cut, Fraction(1))
            assert f.integral(left) + f.integral(right) == f.integral(whole)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            halfstep().integral(Interval(Fraction(-1), Fraction(1, 2)))


class TestAverage:
    def test_extremal_left_half(self):
        assert make_extremal().average(Interval(Fraction(0), HALF)) == HALF

    def test_case_one_instance(self):
        # straddle 1/4 with equal offsets 1/8: average alpha/(alpha+beta) = 1/2
        f = make_extremal()
        assert f.average(Interval(Fraction(1, 8), Fraction(3, 8))) == HALF


class TestSuperLevel:
    def test_extremal_sides(self):
        f = make_extremal()
        dom = Interval(Fraction(0), Fraction(1))
        above = f.super_level(dom, Fraction(0))
        below = f.super_level(dom, Fraction(0), "at-or-below")
        assert above.to_pairs() == [["0", "1/4"]]
        assert below.to_pairs() == [["1/4", "1"]]

    def test_partition_measures(self):
        rng = random.Random(5)
        dom = Interval(Fraction(0), Fraction(1))
        for _ in range(100):
            f = make_random_step(rng, rng.randint(2, 12))
            t = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
            above = f.super_level(dom, t)
            below = f.super_level(dom, t, "at-or-below")
            assert above.measure + below.measure == dom.length
            assert not above.intersects(below)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            halfstep().super_level(Interval(Fraction(0), Fraction(1)), Fraction(0), "x")


class TestDistribution:
    def test_extremal_values(self):
        f = make_extremal()
        assert f.distribution(Fraction(0), Fraction(9, 10)) == HALF
        assert f.distribution(Fraction(0), Fraction(1)) == 0

    def test_sampling_oracle(self):
        rng = random.Random(6)
        f = make_random_step(rng, 9)
        center = Fraction(1, 3)
        alpha = Fraction(3, 4)
        n = 100_000
        hits = sum(
            1
            for k in range(n)
            if abs(f.value_at(Fraction(2 * k + 1, 2 * n)) - center) > alpha
        )
        assert abs(Fraction(hits, n) - f.distribution(center, alpha)) <= Fraction(20, n)

    def test_monotone_with_jumps_at_gaps(self):
        rng = random.Random(7)
        for _ in range(50):
            f = make_random_step(rng, rng.randint(2, 8))
            c = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
            gaps = sorted({abs(v - c) for v in f.values})
            prev = f.domain.length
            for alpha in gaps:
                cur = f.distribution(c, alpha)
                assert cur <= prev
                prev = cur
            assert prev == 0 or max(abs(v - c) for v in f.values) > gaps[-1]


class TestRegions:
    def test_restrict_and_values(self):
        f = make_extremal()
        piece = f.restrict(Interval(Fraction(1, 8), Fraction(7, 8)))
        assert piece.values == (Fraction(1), Fraction(0), Fraction(-1))
        assert piece.value_at(Fraction(1, 8)) == 1
        assert f.max_on(Interval(Fraction(1, 2), Fraction(1))) == 0 or True
        assert f.max_on(Interval(HALF, Fraction(1))) == 0
        assert f.min_on(Interval(HALF, Fraction(1))) == -1

    def test_union_algebra(self):
        rng = random.Random(8)
        frame = Interval(Fraction(0), Fraction(1))
        for _ in range(200):
            def random_union():
                parts = []
                for _ in range(rng.randint(0, 4)):
                    a = Fraction(rng.randint(0, 30), 32)
                    b = a + Fraction(rng.randint(1, 32 - int(a * 32)), 32)
                    parts.append(Interval(a, min(b, Fraction(1))))
                return IntervalUnion.from_intervals(parts)

            u, v = random_union(), random_union()
            assert u.union(v).measure + u.intersection(v).measure == u.measure + v.measure
            assert u.difference(v).measure == u.measure - u.intersection(v).measure
            comp = u.complement_within(frame)
            assert comp.measure + u.intersection(IntervalUnion((frame,))).measure == 1
            assert u.intersection(v).is_subset_of(u)
            assert u.difference(v).is_subset_of(u)


class TestSerialization:
    def test_roundtrip(self):
        rng = random.Random(9)
        for _ in range(30):
            f = make_random_step(rng, rng.randint(2, 10))
            assert StepFunction.from_json_str(f.to_json_str()) == f

    def test_extremal_fixture_file(self):
        fixture = Path(__file__).resolve().parents[1] / "extremal.json"
        assert StepFunction.from_json_str(fixture.read_text()) == make_extremal()
        assert fixture.read_text() == make_extremal().to_json_str()

    def test_malformed(self):
        with pytest.raises(DomainError):
            StepFunction.from_json_str("{not json")
        with pytest.raises(DomainError):
            StepFunction.from_json_str('{"domain": {"a": "0", "b": "1"}}')


@given(
    values=st.lists(rationals, min_size=1, max_size=6),
    cut=st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100),
)
@settings(max_examples=60, deadline=None)
def test_hypothesis_split_additivity(values, cut):
    n = len(values)
    bps = tuple(Fraction(i, n) for i in range(1, n))
    f = StepFunction(Interval(Fraction(0), Fraction(1)), bps, tuple(values))
    left = Interval(Fraction(0), cut)
    right = Interval(cut, Fraction(1))
    assert f.integral(left) + f.integral(right) == f.integral()
