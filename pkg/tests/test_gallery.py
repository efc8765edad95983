from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import strip
from ctopo.espace import separate_points
from ctopo.euclid import enclosure_at, euclidean_space, point_from_rational
from ctopo.gallery import (
    GALLERY_IDS,
    ORIGIN,
    ORIGIN_PRIME,
    circle,
    line_point,
    make,
    projective,
    shifted_line,
    sphere_stereo,
    torus_embedding_map,
    two_origins,
)
from ctopo.manifold import FORWARD, atlas_translator, chart_eval, compatibility_certificate, from_ambient, to_ambient
from ctopo.names import Unknown
from ctopo.words import nat_encode

F = Fraction
R1 = euclidean_space(1)


def inside(box, q):
    return all(iv.lo <= c <= iv.hi for iv, c in zip(box, q))


@pytest.mark.parametrize("ident", GALLERY_IDS)
def test_make_every_id(ident):
    m = make(ident)
    assert m.dim >= 1 and next(m.atlas.indices())


@pytest.mark.parametrize("ident", ["sphere", "euclid:0", "torus:x", "projective:-1"])
def test_make_rejects(ident):
    with pytest.raises(ValueError):
        make(ident)


def test_projective_chart():
    P = projective(2)
    c = P.chart(nat_encode(1))
    assert c.forward.exact((1, 2, 3)) == (2, 3)
    assert P.chart(nat_encode(3)).forward.exact((1, 2, 3)) == (F(1, 3), F(2, 3))
    assert not P.chart(nat_encode(1)).forward.in_domain((0, 1, 1))


def test_sphere_chart_at_south_pole():
    S = sphere_stereo(1)
    out = chart_eval(S, "1", FORWARD, strip(S.point_name((0, -1))))
    box = enclosure_at(out, 16)
    assert inside(box, (0,)) and box[0].hi - box[0].lo <= F(1, 1 << 16)


class TestTwoOrigins:
    def test_charts_agree_off_the_origin(self):
        H = two_origins()
        for i in ("0", "1"):
            assert H.chart(i).forward.exact(line_point(F(3, 2))) == (F(3, 2),)

    def test_origins_share_chart_values(self):
        H = two_origins()
        assert H.chart("0").forward.exact(ORIGIN) == (0,)
        assert H.chart("1").forward.exact(ORIGIN_PRIME) == (0,)

    def test_not_separated(self):
        H = two_origins()
        res = separate_points(H.point_name(ORIGIN), H.point_name(ORIGIN_PRIME), 2000)
        assert isinstance(res, Unknown)
        assert not H.hausdorff

    def test_ordinary_points_separate(self):
        H = two_origins()
        res = separate_points(H.point_name(line_point(0)), H.point_name(line_point(1)), 2000)
        assert isinstance(res, tuple)

    def test_carrier(self):
        A = two_origins().atlas
        assert A.on_carrier(ORIGIN) and A.on_carrier(ORIGIN_PRIME) and A.on_carrier(line_point(5))
        assert not A.on_carrier((F(1), F(1)))


class TestTorusEmbedding:
    def test_values(self):
        fwd, _ = torus_embedding_map()
        R4 = euclidean_space(4)
        assert fwd(point_from_rational((1, 0, 1, 0), R4)).point == (0, 2, 1)
        assert fwd(point_from_rational((0, 1, 0, 1), R4)).point == (3, 0, 0)

    def test_inverse(self):
        _, inv = torus_embedding_map()
        R3 = euclidean_space(3)
        box = enclosure_at(inv(strip(point_from_rational((0, 2, 1), R3))), 16)
        assert box is not None and inside(box, (1, 0, 1, 0))


class TestShiftedLine:
    @settings(max_examples=20)
    @given(st.fractions(-5, 5, max_denominator=30))
    def test_forward_adds_a(self, x):
        L = shifted_line(F(1, 3))
        out = chart_eval(L, "0", FORWARD, strip(L.point_name((x,))))
        box = enclosure_at(out, 20)
        assert box is not None and inside(box, (x + F(1, 3),))

    def test_shift_given_by_a_name(self):
        a = strip(point_from_rational((F(-2, 7),), R1))
        L = shifted_line(a)
        out = chart_eval(L, "0", FORWARD, strip(L.point_name((1,))))
        box = enclosure_at(out, 20)
        assert box is not None and inside(box, (F(5, 7),))


class TestSubspaceStructure:
    """Charted names against names through the ambient Euclidean space."""

    samples = [(F(3, 5), F(4, 5)), (F(-5, 13), F(12, 13)), (0, -1), (F(-8, 17), F(-15, 17)), (1, 0)]

    @pytest.mark.parametrize("make_space", [circle, lambda: sphere_stereo(1)])
    def test_circle_like(self, make_space):
        S = make_space()
        amb = euclidean_space(2)
        to, fro = from_ambient(S), to_ambient(S)
        for x in self.samples:
            listed = to(strip(amb.point_name(x))).query(40)
            assert listed and all(S.member(x, w) is not False for w in listed)
            box = enclosure_at(fro(strip(S.point_name(x))), 8, 400)
            assert box is not None and inside(box, x)

    def test_circle_against_stereographic(self):
        a, b = circle(), sphere_stereo(1)
        r = compatibility_certificate(a, b, atlas_translator(a, b), atlas_translator(b, a), self.samples)
        assert r.ok, str(r)
