import random
from fractions import Fraction

import pytest

from jnsharp.extremal import make_extremal
from jnsharp.numerics import DomainError
from jnsharp.stepfn import Interval, IntervalUnion, StepFunction
from jnsharp.sunrise import sunrise_decompose

from conftest import make_random_step

HALF = Fraction(1, 2)


def halfstep():
    return StepFunction(
        Interval(Fraction(0), Fraction(1)), (HALF,), (Fraction(1), Fraction(0))
    )


class TestExamples:
    def test_halfstep_at_three_quarters(self):
        family = sunrise_decompose(halfstep(), Fraction(3, 4))
        assert family.to_pairs() == [["0", "2/3"]]
        assert halfstep().average(family.parts[0]) == Fraction(3, 4)

    def test_zero_function_empty_family(self):
        zero = StepFunction.constant(Interval(Fraction(0), Fraction(1)), Fraction(0))
        assert sunrise_decompose(zero, HALF).is_empty()

    def test_extremal_at_half(self):
        family = sunrise_decompose(make_extremal(), HALF)
        assert family.to_pairs() == [["0", "1/2"]]
        assert make_extremal().average(family.parts[0]) == HALF

    def test_average_equals_level_full_interval(self):
        # level equal to the global average returns the whole interval
        family = sunrise_decompose(halfstep(), HALF)
        assert family.to_pairs() == [["0", "1"]]

    def test_precondition(self):
        with pytest.raises(DomainError):
            sunrise_decompose(halfstep(), Fraction(1, 4))


class TestProperties:
    def test_bulk_exactness(self):
        rng = random.Random(31)
        checked = 0
        while checked < 1000:
            g = make_random_step(rng, rng.randint(1, 12))
            avg = g.average()
            alpha = avg + Fraction(rng.randint(0, 12), rng.randint(1, 8))
            family = sunrise_decompose(g, alpha)
            for part in family.parts:
                assert g.average(part) == alpha
                assert g.integral(part) - alpha * part.length == 0
            outside = family.complement_within(g.domain)
            if not outside.is_empty():
                assert g.max_on(outside) <= alpha
            checked += 1

    def test_parts_disjoint_and_inside(self):
        rng = random.Random(32)
        for _ in range(200):
            g = make_random_step(rng, rng.randint(2, 10))
            alpha = g.average() + Fraction(rng.randint(0, 6), 4)
            family = sunrise_decompose(g, alpha)
            for prev, cur in zip(family.parts, family.parts[1:]):
                assert prev.b < cur.a or prev.b == cur.a is None or prev.b <= cur.a
            for part in family.parts:
                assert g.domain.contains_interval(part)

    def test_maximality_cell_granularity(self):
        rng = random.Random(33)
        for _ in range(150):
            g = make_random_step(rng, rng.randint(2, 8))
            # a level strictly between cell values keeps the check generic
            alpha = g.average() + Fraction(rng.randint(1, 9), 7)
            family = sunrise_decompose(g, alpha)
            if family.is_empty():
                continue
            grid = g.grid
            union = family
            for part in family.parts:
                left_nodes = [x for x in grid if x < part.a][-1:]
                right_nodes = [x for x in grid if x > part.b][:1]
                candidates = []
                for x in left_nodes:
                    candidates.append(Interval(x, part.b))
                    candidates.append(Interval((x + part.a) / 2, part.b))
                for x in right_nodes:
                    candidates.append(Interval(part.a, x))
                    candidates.append(Interval(part.a, (part.b + x) / 2))
                for ext in candidates:
                    added = IntervalUnion((ext,)).difference(union)
                    if added.is_empty():
                        continue
                    overlaps_other = any(
                        IntervalUnion((other,)).intersects(added)
                        for other in family.parts
                        if other != part
                    )
                    if overlaps_other:
                        continue
                    flat = all(
                        g.max_on(added) <= alpha and g.min_on(added) >= alpha
                        for _ in (0,)
                    )
                    assert g.average(ext) != alpha or flat
