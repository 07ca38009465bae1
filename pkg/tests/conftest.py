"""Shared test helpers: deterministic random step functions and references."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from jnsharp.stepfn import Interval, StepFunction

# 40-digit references computed with three independent evaluations
# (binary-splitting series over exact rationals, 60-digit mpmath, float64).
REF_E = Fraction("2.718281828459045235360287471352662497757")
REF_LN2 = Fraction("0.6931471805599453094172321214581765680755")
REF_SQRT2 = Fraction("1.41421356237309504880168872420969807857")
REF_EXP_4_OVER_E = Fraction("4.355841268575315337427309272093692422401")
REF_C1 = Fraction("2.1779206342876576687136546360468462112")
REF_C2 = Fraction("0.7357588823428846431910475403229217348916")
REF_2_EXP_M2 = Fraction("0.2706705664732253837879989899449688068153")
REF_C2_SEQ = Fraction("2.103374079360790768402714049712459172797")
REF_NU1 = Fraction("1.0889603171438288343568273180234231056")
REF_MU1 = Fraction("2.784422382354665628753105756959633056748")
REF_XI1 = Fraction("1.471517764685769286382095080645843469783")
REF_XI2 = Fraction("2.483186227907235670769785448589860855259")
REF_EXP3 = Fraction("20.08553692318766774092852965458171789699")
REF_INV_E = Fraction("0.3678794411714423215955237701614608674458")
REF_TAIL_09 = Fraction("0.5792648936231889353084215213133383910895")
REF_RATIO_01 = Fraction("0.8631629596480420472836607216279253886495")
REF_RATIO_001 = Fraction("0.9853925614656015118568141782808582012245")
REF_RATIO_1E6 = Fraction("0.9999985284833179959655446522162799410343")


def make_random_step(
    rng: random.Random,
    cells: int,
    max_den: int = 64,
    value_num: int = 8,
    value_den: int = 8,
) -> StepFunction:
    points: set[Fraction] = set()
    while len(points) < cells - 1:
        den = rng.randint(2, max_den)
        points.add(Fraction(rng.randint(1, den - 1), den))
    values: list[Fraction] = []
    for _ in range(cells):
        while True:
            v = Fraction(rng.randint(-value_num, value_num), rng.randint(1, value_den))
            if not values or v != values[-1]:
                break
        values.append(v)
    return StepFunction(
        Interval(Fraction(0), Fraction(1)), tuple(sorted(points)), tuple(values)
    )


@pytest.fixture(scope="session")
def corpus_small():
    """60 deterministic step functions with up to 20 cells."""
    rng = random.Random(20260809)
    return [make_random_step(rng, rng.randint(2, 20)) for _ in range(60)]
