from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import strip
from ctopo import maps as M
from ctopo.ball import RationalBall, ball_disjoint, ball_subset, mu_encode
from ctopo.euclid import (
    CauchyName,
    ball_homeo,
    cauchy_to_delta,
    delta_to_cauchy,
    enclosure_at,
    euclidean_space,
    h_w,
    map_name,
    point_from_rational,
    scaling,
    stereographic,
    translation,
    unit_interval_space,
    unit_interval_translators,
)
from ctopo.interval import box_width
from ctopo.words import InvalidCode

R1, R2 = euclidean_space(1), euclidean_space(2)
small = st.fractions(-3, 3, max_denominator=32)


def B(c, r):
    c = c if isinstance(c, tuple) else (c,)
    return RationalBall(c, Fraction(r))


def inside(box, q):
    return all(iv.lo <= c <= iv.hi for iv, c in zip(box, q))


def value(n, prec=20):
    """Enclosure of a name read without its exact tag."""
    return enclosure_at(strip(n), prec)


class TestSpace:
    def test_dimension(self):
        with pytest.raises(ValueError):
            euclidean_space(0)
        assert R2.dom(mu_encode(B((0, 0), 1)))
        assert not R2.dom(mu_encode(B(0, 1)))
        with pytest.raises(InvalidCode):
            R2.ball(mu_encode(B(0, 1)))

    def test_diagonal_intersection_witness(self):
        u = mu_encode(B(Fraction(1, 3), 2))
        assert next(R1.refine(u, u)) == u

    def test_intersection_witnesses_are_sound(self):
        u, v = mu_encode(B(0, 2)), mu_encode(B(1, 2))
        found = [w for w in islice(R1.refine(u, v), 200) if w is not None]
        assert found
        for w in found:
            assert ball_subset(R1.ball(w), B(0, 2)) and ball_subset(R1.ball(w), B(1, 2))

    def test_global_witness_stream(self):
        triples = [t for t in islice(R1.intersection_witnesses(), 3000) if t is not None]
        assert triples
        for u, v, w in triples:
            assert R1.subset(w, u) and R1.subset(w, v)

    def test_hausdorff_witnesses(self):
        pairs = [p for p in islice(R1.hausdorff_witnesses(), 2000) if p is not None]
        assert pairs
        assert all(ball_disjoint(R1.ball(u), R1.ball(v)) for u, v in pairs)
        assert R1.disjoint(mu_encode(B(0, 1)), mu_encode(B(2, 1)))


class TestPointNames:
    def test_zero(self):
        n = point_from_rational((0,), R1)
        ws = n.query(300)
        assert mu_encode(B(0, 1)) in ws
        assert mu_encode(B(2, 1)) not in ws

    def test_circle_point_witness(self):
        q = (Fraction(3, 5), Fraction(4, 5))
        n = point_from_rational(q, R2)
        assert n.step_of(mu_encode(B(q, Fraction(1, 8))), 10_000) is not None

    @given(small, small)
    def test_sound(self, x, y):
        n = point_from_rational((x, y), R2)
        assert all(R2.ball(w).contains((x, y)) for w in n.query(150))

    def test_wrong_dimension(self):
        with pytest.raises(Exception):
            point_from_rational((0, 0), R1)


class TestCauchy:
    def test_constant_zero(self):
        c = CauchyName(1, lambda i: (0,))
        d = cauchy_to_delta(c)
        assert all(R1.ball(w).contains((0,)) for w in d.query(200))
        assert enclosure_at(d, 20) is not None

    def test_third(self):
        c = delta_to_cauchy(strip(point_from_rational((Fraction(1, 3),), R1)))
        for i in range(21):
            assert abs(c.approximant(i)[0] - Fraction(1, 3)) < Fraction(1, 1 << i)

    @given(small)
    def test_roundtrip(self, q):
        back = cauchy_to_delta(delta_to_cauchy(strip(point_from_rational((q,), R1))))
        for k in (4, 12, 20):
            box = enclosure_at(back, k)
            assert box is not None and inside(box, (q,)) and box_width(box) <= Fraction(1, 1 << k)

    def test_text_format(self):
        c = CauchyName.of_rational((Fraction(1, 2),))
        text = c.text(3)
        assert text.count("#") == 3
        again = CauchyName.parse(text)
        assert again.approximant(2) == (Fraction(1, 2),)
        assert c.prefix(5) == text[:5]
        with pytest.raises(InvalidCode):
            CauchyName.parse("1101011")


class TestMaps:
    def test_ball_homeo_values(self):
        h, hinv = ball_homeo(2)
        assert h(point_from_rational((0, 0), R2)).point == (0, 0)
        assert h(point_from_rational((Fraction(1, 2), 0), R2)).point == (Fraction(2, 3), 0)
        assert hinv(point_from_rational((Fraction(2, 3), 0), R2)).point == (Fraction(1, 2), 0)

    def test_ball_homeo_on_untagged_names(self):
        h, _ = ball_homeo(1)
        box = value(h(strip(point_from_rational((Fraction(1, 2),), R1))))
        assert inside(box, (Fraction(2, 3),))

    @given(st.fractions(Fraction(-9, 10), Fraction(9, 10), max_denominator=50))
    def test_ball_homeo_roundtrip(self, x):
        h, hinv = ball_homeo(1)
        out = hinv(strip(h(strip(point_from_rational((x,), R1)))))
        for k in (8, 20):
            box = enclosure_at(out, k)
            assert box is not None and inside(box, (x,))

    def test_affine_values(self):
        assert translation((1,))(point_from_rational((Fraction(1, 2),), R1)).point == (Fraction(-1, 2),)
        assert scaling(2)(point_from_rational((Fraction(3, 4),), R1)).point == (Fraction(3, 2),)
        assert h_w(B(0, 1))(point_from_rational((Fraction(1, 2),), R1)).point == (Fraction(2, 3),)

    def test_stereographic_values(self):
        s, sinv = stereographic(1, 2)
        R3 = euclidean_space(3)
        assert s(point_from_rational((0, 0, -1), R3)).point == (0, 0)
        assert sinv(point_from_rational((0, 0), R2)).point == (0, 0, -1)
        s1, s1inv = stereographic(1, 1)
        assert s1(point_from_rational((1, 0), R2)).point == (1,)
        assert s1inv(point_from_rational((1,), R1)).point == (1, 0)

    @given(st.integers(-20, 20), st.integers(1, 20))
    def test_stereographic_roundtrip(self, a, b):
        # rational circle points from Pythagorean parametrization
        t = Fraction(a, b)
        p = ((2 * t) / (1 + t * t), (t * t - 1) / (1 + t * t))
        s, sinv = stereographic(1, 1)
        out = sinv(strip(s(strip(point_from_rational(p, R2)))))
        box = enclosure_at(out, 20)
        assert box is not None and inside(box, p)

    def test_off_domain_diverges(self):
        f = M.BallToSpace(B(0, 1))
        n = map_name(f, strip(point_from_rational((2,), R1)))
        assert n.query(200) == []


class TestUnitIntervals:
    def test_subbase(self):
        T = unit_interval_space()
        z = T.z
        assert z.member((Fraction(1, 2),), "0/1")
        assert not z.member((1,), "0/1")
        assert z.disjoint("0/1", "1/1") and not z.disjoint("0/1", "1/10")

    def test_half_lists_the_unit_interval(self):
        T = unit_interval_space()
        n = T.point_name((Fraction(1, 2),))
        # the intersection code of {(0, 1)} is wrap of the code of 0
        assert T.z.point_name((Fraction(1, 2),)).query(5)[0] == "0/1"
        assert "11000/01011" in n.query(20)

    @pytest.mark.parametrize("x", [Fraction(1, 3), Fraction(1, 2), Fraction(-7, 5), Fraction(0)])
    def test_equivalent_to_the_line(self, x):
        T = unit_interval_space()
        there, back = unit_interval_translators(T)
        listed = there(strip(point_from_rational((x,), R1))).query(300)
        assert listed and all(T.member((x,), w) for w in listed)
        out = back(strip(T.point_name((x,))))
        assert all(R1.ball(w).contains((x,)) for w in out.query(300))
        box = enclosure_at(out, 2, 4000)
        assert box is not None and inside(box, (x,))
