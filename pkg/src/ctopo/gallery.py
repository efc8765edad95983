"""Concrete computable manifolds: R^n, the shifted line, the circle with half
charts, stereographic spheres, projective spaces, tori, the line with two
origins and punctured spheres.

Identifiers are strings such as ``euclid:2``, ``circle``, ``sphere-stereo:2``,
``projective:2``, ``torus:2``, ``two-origins``, ``punctured-sphere:2`` and
``shifted-line:1/3``.
"""

from __future__ import annotations

from fractions import Fraction

from . import maps as M
from .ball import RationalBall, ball_disjoint, parse_rational
from .euclid import euclidean_space, map_translator, point_from_rational
from .manifold import (
    Atlas,
    BallRegion,
    Chart,
    FiniteAtlas,
    ManifoldSpace,
    ProductAtlas,
    PushforwardAtlas,
    Whole,
    identity_atlas,
    split_code,
)
from .names import Name
from .words import nat_encode

UNIT = RationalBall((Fraction(0),), Fraction(1))

# circle chart indices and their display labels
CIRCLE_INDEX = {"f+": "1", "f-": "10", "g+": "11", "g-": "100"}


def _unit_sphere(q) -> bool:
    return sum(c * c for c in q) == 1


def euclid(n: int) -> ManifoldSpace:
    return ManifoldSpace(identity_atlas(n), f"euclid:{n}")


def circle_atlas() -> FiniteAtlas:
    charts = [
        Chart(i, M.CircleHalfChart(w), M.CircleHalfChartInverse(w), BallRegion(UNIT), w)
        for w, i in CIRCLE_INDEX.items()
    ]
    return FiniteAtlas(1, 2, charts, "circle", carrier=_unit_sphere)


def circle() -> ManifoldSpace:
    return ManifoldSpace(circle_atlas(), "circle")


def sphere_atlas(n: int) -> FiniteAtlas:
    charts = [
        Chart("1", M.Stereographic(1, n), M.InverseStereographic(1, n), Whole(), "s+1"),
        Chart("-1", M.Stereographic(-1, n), M.InverseStereographic(-1, n), Whole(), "s-1"),
    ]
    return FiniteAtlas(n, n + 1, charts, f"sphere-stereo:{n}", carrier=_unit_sphere)


def sphere_stereo(n: int) -> ManifoldSpace:
    return ManifoldSpace(sphere_atlas(n))


def projective(n: int) -> ManifoldSpace:
    """RP^n carried by representatives in R^{n+1}; chart i divides by x_i."""
    charts = [
        Chart(nat_encode(i), M.ProjectiveChart(i, n), M.ProjectiveChartInverse(i, n), Whole(), f"x{i}")
        for i in range(1, n + 2)
    ]
    return ManifoldSpace(FiniteAtlas(n, n + 1, charts, f"projective:{n}"))


def torus(n: int) -> ManifoldSpace:
    atlas: Atlas = circle_atlas()
    for _ in range(n - 1):
        atlas = ProductAtlas(atlas, circle_atlas())
    atlas.label = f"torus:{n}"
    return ManifoldSpace(atlas)


class TwoOriginsAtlas(FiniteAtlas):
    """Two charts f, f' whose images are all of R; balls of either chart are
    open intervals, and two of them meet iff the intervals do (an overlap of
    open intervals always contains non-zero points)."""

    def _ball_disjoint(self, u, v):
        vu, vv = self.valid(u), self.valid(v)
        if vu is False or vv is False:
            return True
        return ball_disjoint(split_code(u)[1], split_code(v)[1])


ORIGIN = (Fraction(0), Fraction(0))
ORIGIN_PRIME = (Fraction(0), Fraction(1))


def two_origins() -> ManifoldSpace:
    charts = [
        Chart("0", M.TwoOriginsChart(False), M.TwoOriginsChartInverse(False), Whole(), "f"),
        Chart("1", M.TwoOriginsChart(True), M.TwoOriginsChartInverse(True), Whole(), "f'"),
    ]
    def carrier(q):
        return q[1] == 0 or (q[1] == 1 and q[0] == 0)

    return ManifoldSpace(TwoOriginsAtlas(1, 2, charts, "two-origins", hausdorff=False, carrier=carrier))


def line_point(s) -> tuple:
    """The ordinary point s of the two-origins line."""
    return (Fraction(s), Fraction(0))


def punctured_sphere(n: int) -> ManifoldSpace:
    """S^n minus the north pole, as the push-forward of R^n along s_{+1}^-1."""
    atlas = PushforwardAtlas(identity_atlas(n), M.InverseStereographic(1, n), M.Stereographic(1, n), f"punctured-sphere:{n}")
    return ManifoldSpace(atlas)


def shifted_line(a: Name | Fraction | int) -> ManifoldSpace:
    """R with the single chart x -> x + a; a may be any point name of R."""
    if not isinstance(a, Name):
        a = point_from_rational((Fraction(a),), euclidean_space(1))
    chart = Chart("0", M.ShiftByName(a, 1), M.ShiftByName(a, -1), Whole(), "x+a")
    return ManifoldSpace(FiniteAtlas(1, 1, [chart], "shifted-line"))


def torus_embedding_map():
    """(forward, inverse) point-name translators of T^2 -> R^3 and back on the image."""
    return map_translator(M.TorusEmbedding()), map_translator(M.TorusEmbeddingInverse())


def _int(s: str, lo: int) -> int:
    n = int(s)
    if n < lo:
        raise ValueError(f"parameter must be >= {lo}")
    return n


def make(ident: str) -> ManifoldSpace:
    """Build a gallery manifold from its identifier; ValueError when malformed."""
    kind, _, arg = ident.partition(":")
    if kind in ("euclid", "euclidean"):
        return euclid(_int(arg or "1", 1))
    if kind in ("circle", "circle-half-charts"):
        return circle()
    if kind == "sphere-stereo":
        return sphere_stereo(_int(arg or "1", 1))
    if kind == "projective":
        return projective(_int(arg or "1", 1))
    if kind == "torus":
        return torus(_int(arg or "2", 1))
    if kind in ("two-origins", "line-two-origins"):
        return two_origins()
    if kind == "punctured-sphere":
        return punctured_sphere(_int(arg or "1", 1))
    if kind == "shifted-line":
        return shifted_line(parse_rational(arg or "0"))
    raise ValueError(f"unknown gallery id {ident!r}")


GALLERY_IDS = (
    "euclid:1",
    "euclid:2",
    "circle",
    "sphere-stereo:1",
    "sphere-stereo:2",
    "projective:2",
    "torus:2",
    "two-origins",
    "punctured-sphere:2",
    "shifted-line:1/3",
)
