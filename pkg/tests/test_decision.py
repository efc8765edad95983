import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import positive, rationals
from ctopo import maps as M
from ctopo.ball import RationalBall, ball_disjoint, ball_subset
from ctopo.decision import (
    ContainmentQuery,
    Relation,
    UnsupportedMapFamily,
    Verdict,
    decide,
    image_containment,
)


def B(c, r):
    c = c if isinstance(c, tuple) else (c,)
    return RationalBall(c, Fraction(r))


UNIT = B(0, 1)


def test_h_image_of_half_ball_inside_unit_ball():
    # h(x) = x/(1 - x^2) sends (-1/2, 1/2) onto (-2/3, 2/3)
    q = ContainmentQuery(B(0, Fraction(1, 2)), M.BallToSpace(UNIT), UNIT)
    assert image_containment(q) is Verdict.HOLDS


def test_h_image_of_half_ball_escapes_half_ball():
    q = ContainmentQuery(B(0, Fraction(1, 2)), M.BallToSpace(UNIT), B(0, Fraction(1, 2)))
    out = decide(q)
    assert out.verdict is Verdict.FAILS
    # the witness lies in the source and its image leaves the target
    (x,) = out.witness
    assert abs(x) < Fraction(1, 2)
    assert abs(x / (1 - x * x)) >= Fraction(1, 2)


def test_identity_holds_immediately():
    b = B((1, 2), 3)
    out = decide(ContainmentQuery(b, M.Identity(2), b), budget=1)
    assert out.verdict is Verdict.HOLDS


def test_disjoint_relation():
    q = ContainmentQuery(B(0, 1), M.Translation((-5,)), B(0, 1), Relation.DISJOINT)
    assert image_containment(q) is Verdict.HOLDS
    q = ContainmentQuery(B(0, 1), M.Translation((-1,)), B(0, 1), Relation.DISJOINT)
    assert image_containment(q) is Verdict.FAILS


def test_stereographic_query():
    # on B((0,-1), 1/2): |x| < 1/2 and 1 - t > 3/2, so |x/(1 - t)| < 1/3
    q = ContainmentQuery(B((0, -1), Fraction(1, 2)), M.Stereographic(1, 1), B(0, Fraction(1, 3)))
    assert image_containment(q, gap=Fraction(1, 64)) is Verdict.HOLDS
    q = ContainmentQuery(B((0, -1), Fraction(1, 2)), M.Stereographic(1, 1), B(0, Fraction(1, 4)))
    assert image_containment(q, gap=Fraction(1, 64)) is Verdict.FAILS


def test_unsupported_family():
    class Odd(M.Map):
        dim_in = dim_out = 1

    with pytest.raises(UnsupportedMapFamily):
        decide(ContainmentQuery(UNIT, Odd(), UNIT))


def test_bad_dimensions():
    with pytest.raises(ValueError):
        ContainmentQuery(B((0, 0), 1), M.Identity(1), UNIT)


def affine(data):
    kind = data.draw(st.sampled_from(["id", "shift", "scale", "both"]))
    a = data.draw(rationals)
    e = data.draw(positive)
    if kind == "id":
        return M.Identity(1), lambda b: b
    if kind == "shift":
        return M.Translation((a,)), lambda b: B(b.center[0] - a, b.radius)
    if kind == "scale":
        return M.Scaling(e, 1), lambda b: B(b.center[0] * e, b.radius * e)
    m = M.Composition([M.Translation((a,)), M.Scaling(e, 1)])
    return m, lambda b: B((b.center[0] - a) * e, b.radius * e)


@given(st.data(), rationals, positive, rationals, positive)
def test_affine_agrees_with_exact_image(data, c, r, d, s):
    f, image = affine(data)
    src, tgt = B(c, r), B(d, s)
    img = image(src)
    for rel, truth in ((Relation.INSIDE, ball_subset(img, tgt)), (Relation.DISJOINT, ball_disjoint(img, tgt))):
        v = image_containment(ContainmentQuery(src, f, tgt, rel), budget=2000)
        if v is Verdict.HOLDS:
            assert truth
        if v is Verdict.FAILS:
            assert not truth


def test_never_both_across_budgets():
    rng = random.Random(11)
    for _ in range(40):
        w = B(Fraction(rng.randint(-4, 4), 4), Fraction(rng.randint(1, 8), 4))
        src = B(Fraction(rng.randint(-8, 8), 8), Fraction(rng.randint(1, 8), 16))
        tgt = B(Fraction(rng.randint(-8, 8), 2), Fraction(rng.randint(1, 16), 4))
        src = B(w.center[0] + (src.center[0] - w.center[0]) * w.radius / 4, src.radius * w.radius / 4)
        q = ContainmentQuery(src, M.BallToSpace(w), tgt)
        seen = {image_containment(q, budget=b) for b in (10, 100, 1000)}
        assert not {Verdict.HOLDS, Verdict.FAILS} <= seen
