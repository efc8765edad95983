from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import positive, rationals
from ctopo.ball import (
    RationalBall,
    ball_disjoint,
    ball_subset,
    format_ball,
    mu_decode,
    mu_dom,
    mu_encode,
    parse_ball,
    parse_vector,
)
from ctopo.words import InvalidCode, tuple_word

balls = st.builds(lambda c, r: RationalBall(tuple(c), r), st.lists(rationals, min_size=1, max_size=3), positive)


def B(c, r):
    c = c if isinstance(c, tuple) else (c,)
    return RationalBall(c, Fraction(r))


class TestSubset:
    def test_examples(self):
        assert ball_subset(B(0, 1), B(0, 2))
        assert ball_subset(B((1, 0), 1), B((0, 0), 2))
        assert not ball_subset(B(3, 1), B(0, 2))

    @given(balls)
    def test_reflexive(self, b):
        assert ball_subset(b, b)

    @given(balls, st.data())
    def test_subset_by_sampling(self, b, data):
        c = data.draw(st.lists(rationals, min_size=b.dim, max_size=b.dim))
        r = data.draw(positive)
        other = RationalBall(tuple(c), r)
        if ball_subset(other, b):
            # the center and the axis extremes of the inner ball lie in the outer one
            assert b.contains(other.center)
            for i in range(b.dim):
                for s in (-1, 1):
                    p = list(other.center)
                    p[i] += s * other.radius * Fraction(63, 64)
                    assert b.contains(p)


class TestDisjoint:
    def test_examples(self):
        assert ball_disjoint(B(0, 1), B(2, 1))
        assert not ball_disjoint(B(0, 1), B(1, 1))
        assert not ball_disjoint(B(0, 1), B(0, 1))

    @given(balls, balls)
    def test_symmetric(self, u, v):
        if u.dim == v.dim:
            assert ball_disjoint(u, v) == ball_disjoint(v, u)

    @given(balls, balls)
    def test_disjoint_balls_share_no_midpoint(self, u, v):
        if u.dim != v.dim or not ball_disjoint(u, v):
            return
        mid = [(a + b) / 2 for a, b in zip(u.center, v.center)]
        assert not (u.contains(mid) and v.contains(mid))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ball_disjoint(B(0, 1), B((0, 0), 1))


class TestCodec:
    def test_unit_ball_code(self):
        assert mu_encode(B(0, 1)) == tuple_word(["0/1", "1/1"])

    def test_negative_radius_rejected(self):
        with pytest.raises(InvalidCode):
            mu_decode(tuple_word(["0/1", "-1/1"]))
        assert not mu_dom(tuple_word(["0/1", "-1/1"]))
        assert not mu_dom(tuple_word(["0/1"]))

    def test_plane_ball_roundtrip(self):
        b = B((Fraction(1, 2), 0), 2)
        assert mu_decode(mu_encode(b)) == b

    @given(balls)
    def test_roundtrip(self, b):
        assert mu_decode(mu_encode(b)) == b
        assert mu_dom(mu_encode(b), b.dim)
        assert not mu_dom(mu_encode(b), b.dim + 1)


class TestLiterals:
    @given(balls)
    def test_literal_roundtrip(self, b):
        assert parse_ball(format_ball(b)) == b

    def test_parse(self):
        assert parse_ball("B(0;1)") == B(0, 1)
        assert parse_ball(" B( 1/2 , -3 ; 1/4 ) ") == B((Fraction(1, 2), -3), Fraction(1, 4))
        assert parse_vector("(0,1)") == (0, 1)

    @pytest.mark.parametrize("bad", ["B(0;0)", "B(0;-1)", "B(;1)", "C(0;1)", "B(0,1)", "B(x;1)"])
    def test_malformed(self, bad):
        with pytest.raises(InvalidCode):
            parse_ball(bad)

    def test_validation(self):
        with pytest.raises(ValueError):
            RationalBall((), 1)
        with pytest.raises(ValueError):
            RationalBall((0,), 0)
