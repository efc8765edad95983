from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import positive, rationals
from ctopo.interval import (
    Interval,
    box_inside_ball,
    box_meet,
    box_outside_ball,
    box_width,
    ceil_dyadic,
    floor_dyadic,
    point_box,
    split_box,
    sqrt_lower,
    sqrt_upper,
)

intervals = st.tuples(rationals, rationals).map(lambda p: Interval(min(p), max(p)))


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Interval(1, 0)


@given(rationals, st.integers(0, 40))
def test_dyadic_rounding_brackets(q, k):
    lo, hi = floor_dyadic(q, k), ceil_dyadic(q, k)
    assert lo <= q <= hi
    assert hi - lo <= Fraction(1, 1 << k)
    assert (lo * (1 << k)).denominator == 1


@given(positive, st.integers(1, 40))
def test_sqrt_bounds(q, k):
    lo, hi = sqrt_lower(q, k), sqrt_upper(q, k)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= Fraction(1, 1 << k)


def test_sqrt_exact_square():
    assert sqrt_lower(Fraction(9, 4), 10) == Fraction(3, 2) == sqrt_upper(Fraction(9, 4), 10)


@given(intervals, intervals, rationals, rationals)
def test_arithmetic_encloses(a, b, x, y):
    # clamp sample points into the intervals
    x = min(max(x, a.lo), a.hi)
    y = min(max(y, b.lo), b.hi)
    assert (a + b).contains(x + y)
    assert (a - b).contains(x - y)
    assert (a * b).contains(x * y)
    assert a.sqr().contains(x * x)


@given(intervals, intervals, st.integers(4, 30))
def test_division_encloses(a, b, k):
    if not b.excludes_zero():
        assert a.div(b, k) is None
        return
    q = a.div(b, k)
    assert q.contains(a.lo / b.lo) and q.contains(a.hi / b.hi)


@given(intervals, intervals)
def test_meet(a, b):
    m = a.meet(b)
    overlap = max(a.lo, b.lo) <= min(a.hi, b.hi)
    assert (m is not None) == overlap
    if m is not None:
        assert m.lo == max(a.lo, b.lo) and m.hi == min(a.hi, b.hi)


def test_box_ball_relations():
    box = (Interval(0, Fraction(1, 4)), Interval(0, Fraction(1, 4)))
    assert box_inside_ball(box, (0, 0), Fraction(1, 2))
    assert not box_inside_ball(box, (0, 0), Fraction(1, 4))
    assert box_outside_ball(box, (1, 1), Fraction(1, 2))
    assert not box_outside_ball(box, (0, 0), Fraction(1, 8))


def test_split_and_width():
    box = (Interval(0, 1), Interval(0, Fraction(1, 2)))
    a, b = split_box(box)
    assert box_width(a) == box_width(b) == Fraction(1, 2)
    assert box_meet(a, b) is not None
    assert box_width(point_box((1, 2))) == 0
