"""Certified (semi-)decisions about rational balls under the shipped maps.

``image_containment`` covers the closed source ball with rational boxes,
interval-evaluates the map on each box and either certifies every box
(``HOLDS``), finds a rational witness point in the open source ball that
violates the relation (``FAILS``), or runs out of budget (``UNKNOWN``).
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import maps as M
from .ball import RationalBall, ball_disjoint, ball_subset, dist2
from .interval import (
    Box,
    box_inside_ball,
    box_outside_ball,
    box_radius_bound,
    box_width,
    near_dist2,
    point_box,
    split_box,
    sqrt_upper,
)

__all__ = [
    "RationalBall",
    "ball_subset",
    "ball_disjoint",
    "Relation",
    "Verdict",
    "ContainmentQuery",
    "Outcome",
    "UnsupportedMapFamily",
    "DEFAULT_GAP",
    "decide",
    "image_containment",
]

DEFAULT_GAP = Fraction(1, 2**20)

SUPPORTED = (
    M.Identity,
    M.Translation,
    M.Scaling,
    M.BallToSpace,
    M.SpaceToBall,
    M.Stereographic,
    M.InverseStereographic,
    M.CircleHalfChart,
    M.CircleHalfChartInverse,
    M.ProjectiveChart,
    M.ProjectiveChartInverse,
    M.Composition,
    M.Product,
    M.TorusEmbedding,
    M.TorusEmbeddingInverse,
    M.TwoOriginsChart,
    M.TwoOriginsChartInverse,
    M.RestrictedMap,
)


class UnsupportedMapFamily(ValueError):
    pass


class Relation(enum.Enum):
    INSIDE = "image-inside"
    DISJOINT = "image-disjoint"


class Verdict(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ContainmentQuery:
    source: RationalBall
    map: M.Map
    target: RationalBall
    relation: Relation = Relation.INSIDE

    def __post_init__(self):
        if self.source.dim != self.map.dim_in or self.target.dim != self.map.dim_out:
            raise ValueError("query dimensions do not match the map's signature")


@dataclass
class Outcome:
    verdict: Verdict
    witness: tuple[Fraction, ...] | None = None
    evaluations: int = 0
    unresolved: list = field(default_factory=list)


def _check_supported(m: M.Map) -> None:
    if not isinstance(m, SUPPORTED):
        raise UnsupportedMapFamily(f"no certified closed form for {m!r}")
    if isinstance(m, M.Composition):
        for part in m.maps:
            _check_supported(part)
    if isinstance(m, M.Product):
        _check_supported(m.f)
        _check_supported(m.g)
    if isinstance(m, M.RestrictedMap):
        _check_supported(m.base)


def _lipschitz(m: M.Map) -> Fraction | None:
    """Exact Lipschitz constant of the similarity maps, else None."""
    if isinstance(m, (M.Identity, M.Translation)):
        return Fraction(1)
    if isinstance(m, M.Scaling):
        return m.eps
    if isinstance(m, M.Composition):
        total = Fraction(1)
        for part in m.maps:
            lip = _lipschitz(part)
            if lip is None:
                return None
            total *= lip
        return total
    return None


def _bits(q: Fraction) -> int:
    # smallest k with 2**-k <= q
    k = 0
    while Fraction(1, 1 << k) > q:
        k += 1
    return k


def _ball_form(q: ContainmentQuery, center, radius, lip) -> Verdict | None:
    """Certify a node enclosed in the closed ball B(center, radius) for a similarity map."""
    img = q.map.exact(center)
    if img is None:
        return None
    spread = lip * radius
    d2 = dist2(img, q.target.center)
    R = q.target.radius
    if q.relation is Relation.INSIDE:
        slack = R - spread
        if slack > 0 and d2 < slack * slack:
            return Verdict.HOLDS
    else:
        s = R + spread
        if d2 >= s * s:
            return Verdict.HOLDS
    return None


def _witness_candidates(q: ContainmentQuery):
    c, r = q.source.center, q.source.radius
    yield c
    img = q.map.exact(c)
    if img is not None:
        if q.relation is Relation.INSIDE:
            d = [a - b for a, b in zip(img, q.target.center)]
        else:
            d = [b - a for a, b in zip(img, q.target.center)]
        if len(d) == len(c) and any(d):
            norm = sqrt_upper(sum((x * x for x in d), Fraction(0)), 40)
            u = [x / norm for x in d]
            for k in (2, 6, 12, 24, 40):
                t = r * (1 - Fraction(1, 1 << k))
                yield tuple(ci + t * ui for ci, ui in zip(c, u))


def _violates(q: ContainmentQuery, p, prec: int) -> bool:
    """Certify that the rational point p (inside the open source ball) violates the relation."""
    pb = point_box(p)
    dom = q.map.domain(pb)
    if q.relation is Relation.INSIDE:
        if dom is False:
            return True
        if dom is not True:
            return False
        img = q.map.exact(p)
        img_box = point_box(img) if img is not None else q.map.eval_box(pb, prec)
        return img_box is not None and box_outside_ball(img_box, q.target.center, q.target.radius)
    if dom is not True:
        return False
    img = q.map.exact(p)
    img_box = point_box(img) if img is not None else q.map.eval_box(pb, prec)
    return img_box is not None and box_inside_ball(img_box, q.target.center, q.target.radius)


def decide(q: ContainmentQuery, gap: Fraction = DEFAULT_GAP, budget: int = 10_000) -> Outcome:
    _check_supported(q.map)
    gap = Fraction(gap)
    if gap <= 0:
        raise ValueError("gap must be positive")
    prec0 = _bits(gap) + 8
    min_width = gap / 4096
    src = q.source
    r2 = src.radius * src.radius
    lip = _lipschitz(q.map)
    evals = 0

    if lip is not None:
        # similarity maps send the open source ball exactly onto an open ball
        img = q.map.exact(src.center)
        image = RationalBall(img, lip * src.radius)
        if q.relation is Relation.INSIDE and ball_subset(image, q.target):
            return Outcome(Verdict.HOLDS, None, 1)
        if q.relation is Relation.DISJOINT and ball_disjoint(image, q.target):
            return Outcome(Verdict.HOLDS, None, 1)

    for p in _witness_candidates(q):
        if dist2(p, src.center) < r2 and _violates(q, p, prec0 + 16):
            return Outcome(Verdict.FAILS, tuple(p), evals)

    queue: deque[tuple[Box, bool]] = deque([(src.box(), True)])
    unresolved = []
    while queue:
        box, root = queue.popleft()
        evals += 1
        if evals > budget:
            return Outcome(Verdict.UNKNOWN, None, evals - 1, unresolved)
        if near_dist2(box, src.center) > r2:
            continue
        w = box_width(box)
        prec = max(prec0, _bits(w) + 12)
        if lip is not None:
            if root:
                center, radius = src.center, src.radius
            else:
                center = tuple(iv.mid for iv in box)
                radius = box_radius_bound(box, prec)
            if _ball_form(q, center, radius, lip) is Verdict.HOLDS:
                continue
        dom = q.map.domain(box)
        if q.relation is Relation.INSIDE:
            if dom is True:
                img = q.map.eval_box(box, prec)
                if img is not None and box_inside_ball(img, q.target.center, q.target.radius):
                    continue
        else:
            if dom is False:
                continue
            img = q.map.eval_box(box, prec)
            if img is not None and box_outside_ball(img, q.target.center, q.target.radius):
                continue
        mid = tuple(iv.mid for iv in box)
        if dist2(mid, src.center) < r2 and _violates(q, mid, prec + 8):
            return Outcome(Verdict.FAILS, mid, evals)
        if w < min_width:
            unresolved.append(box)
            continue
        a, b = split_box(box)
        queue.append((a, False))
        queue.append((b, False))
    if unresolved:
        return Outcome(Verdict.UNKNOWN, None, evals, unresolved)
    return Outcome(Verdict.HOLDS, None, evals)


def image_containment(
    q: ContainmentQuery, gap: Fraction = DEFAULT_GAP, budget: int = 10_000
) -> Verdict:
    return decide(q, gap, budget).verdict
