"""Embedding compact manifolds into Euclidean space.

For a chart phi with image the rational ball z, the collapse map
``g = s^-1 o h_z o phi`` on the chart domain U sends everything outside U to
the north pole P of S^n.  Whether a point lies in U is only semi-decidable, so
the constant branch is never decided pointwise.  Instead the preimages of
the caps V_k = B(P, 2^-k) are open sets, and each one that certifiably holds
the point yields the enclosure box of V_k.  A cap's preimage is the
complement of the compact set g^-1(S^n - V_k), which lies inside one
computable ball of the chart.

The product G = (g_1, ..., g_l) over a finite atlas is injective on the
manifold when the chart domains cover it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

from . import maps as M
from .ball import RationalBall, dist2
from .espace import _z_to_t_steps, compact_complement
from .euclid import EnclosureBuilder, euclidean_space, local_rate
from .interval import Box, Interval, box_inside_ball, box_width, box_meet, box_outside_ball, ceil_dyadic, sqrt_lower, sqrt_upper
from .manifold import (
    BallRegion,
    Chart,
    Locator,
    ManifoldSpace,
    _gate,
    _machine,
    ball_code,
    split_code,
    t_level,
    z_level,
)
from .names import Batches, ContractViolation, Discipline, Name, Translator
from .words import tuple_word, untuple


def north_pole(n: int) -> tuple[Fraction, ...]:
    return (Fraction(0),) * n + (Fraction(1),)


def cap_radius_bound(delta: Fraction, prec: int) -> Fraction:
    """A rational rho' < 1 with h^-1(s(S^n - B(P, delta))) inside B(0, rho').

    On the sphere |x - P|^2 = 2 - 2t and |s(x)|^2 = (1 + t)/(1 - t), so
    outside the cap |s(x)|^2 <= 4/delta^2 - 1 =: R^2; h^-1 sends the closed
    R-ball onto the closed ball of radius 2R/(1 + sqrt(1 + 4R^2)) < 1.
    """
    R2 = 4 / (delta * delta) - 1
    R = sqrt_upper(R2, prec)
    rho = 2 * R / (1 + sqrt_lower(1 + 4 * R2, prec))
    out = ceil_dyadic(rho, prec) + Fraction(1, 1 << prec)
    if out >= 1:
        raise ValueError("precision too low for this cap")
    return out


@dataclass
class CollapseMap:
    space: ManifoldSpace
    chart: Chart
    ball: RationalBall

    @property
    def n(self) -> int:
        return self.space.dim

    @property
    def pole(self) -> tuple[Fraction, ...]:
        return north_pole(self.n)

    @property
    def inner(self) -> M.Map:
        """s^-1 o h_z on the chart image."""
        return M.Composition([M.BallToSpace(self.ball), M.InverseStereographic(1, self.n)])

    @property
    def inner_inverse(self) -> M.Map:
        return M.Composition([M.Stereographic(1, self.n), M.SpaceToBall(self.ball)])

    def exact(self, x) -> tuple[Fraction, ...] | None:
        """g(x) for a rational carrier point, None when irrational."""
        f = self.chart.forward
        if not f.in_domain(x):
            return self.pole
        y = f.exact(x)
        if y is None:
            return None
        return self.inner.exact(y)

    def cover_code(self, k: int) -> str:
        """A computable ball of the chart covering g^-1(S^n - V_k), V_k = B(P, 2^-k)."""
        rho = cap_radius_bound(Fraction(1, 1 << k), k + 8)
        b = RationalBall(self.ball.center, self.ball.radius * rho)
        return ball_code(self.chart.index, b)

    def cap_box(self, k: int) -> Box:
        r = Fraction(1, 1 << k)
        return tuple(Interval(c - r, c + r) for c in self.pole)

    def in_cap_preimage(self, code: str, k: int) -> bool:
        """Certify phi_j^-1(mu(w)) ⊂ g^-1(V_k) through disjointness from the cover."""
        return self.space.atlas.ball_disjoint(code, self.cover_code(k)) is True


def collapse_map(space: ManifoldSpace, index: str) -> CollapseMap:
    chart = space.chart(index)
    if chart is None:
        raise ContractViolation(f"{index!r} is not a chart of {space.label}")
    if not isinstance(chart.region, BallRegion):
        raise ContractViolation("collapse maps need a chart whose image is a rational ball")
    return CollapseMap(space, chart, chart.region.ball)


class _CollapseState:
    """Enclosures of g(x) from a shared locator: the direct branch through
    the chart, and the cap branch through certified cap preimages."""

    def __init__(self, g: CollapseMap, loc: Locator):
        self.g = g
        self.loc = loc
        self.k = 1
        self.pos = 0
        self.E: Box | None = None

    def _feed(self, box: Box | None) -> None:
        if box is not None:
            self.E = box if self.E is None else (box_meet(self.E, box) or self.E)

    def step(self, t: int) -> Box | None:
        g = self.g
        src = self.loc.box_for(g.chart.index, t) if self.loc.E else None
        if src is not None:
            inner = g.inner
            if inner.domain(src) is True:
                self._feed(inner.eval_box(src, 8 + local_rate(t)))
        # cap branch: the newest listed ball and one from a sweep
        codes = self.loc.codes
        tried = set()
        for c in (codes[-1] if codes else None, codes[self.pos] if self.pos < len(codes) else None):
            if c is None or c in tried:
                continue
            tried.add(c)
            if g.in_cap_preimage(c, self.k):
                self._feed(g.cap_box(self.k))
                self.k += 1
                self.pos = 0
                return self.E
        if self.pos < len(codes):
            self.pos += 1
        return self.E


def collapse_name(g: CollapseMap, p: Name) -> Name:
    """The R^{n+1} point name of g(x)."""
    sp = euclidean_space(g.n + 1)
    if p.point is not None:
        y = g.exact(p.point)
        if y is not None:
            return sp.point_name(y)

    def steps() -> Batches:
        loc = Locator(p, g.space.atlas)
        st = _CollapseState(g, loc)
        b = EnclosureBuilder(sp)
        t = 0
        while True:
            t += 1
            loc.advance(t)
            b.feed(st.step(t))
            yield b.step(t)

    return Name(Discipline.POINT, sp, steps, label="g(x)")


def collapse_preimage(g: CollapseMap, V: RationalBall) -> Name:
    """The open set g^-1(V) for a rational ball V of R^{n+1}.

    Direct part: chart balls whose image under s^-1 o h_z lies in V.  When P
    is in V, also the complement of the compact set g^-1(S^n - V), covered by
    one computable ball of the chart.
    """
    space = g.space
    inner = g.inner
    idx = g.chart.index
    kname = None
    if V.contains(g.pole):
        # a cap B(P, delta) inside V with delta = r - |c - P| bounded below
        gap = V.radius - sqrt_upper(dist2(V.center, g.pole), 64)
        if gap > 0:
            k = 1
            while Fraction(1, 1 << k) > gap:
                k += 1
            cover = g.cover_code(k)
            cover_t = tuple_word([cover])
            kname = Name(Discipline.COMPACT, space, lambda: iter([[tuple_word([cover_t])]]), label="K'")

    def direct(code: str) -> bool:
        i, b = split_code(code)
        if i != idx or not g.chart.region.contains_ball(b):
            return False
        if inner.domain(b.box()) is not True:
            return False
        img = inner.eval_box(b.box(), 40)
        return img is not None and box_inside_ball(img, V.center, V.radius)

    def code_inside(code: str) -> bool:
        if direct(code):
            return True
        return kname is not None and space.atlas.ball_disjoint(code, cover) is True

    def certify(w: str, budget: int) -> bool:
        return any(code_inside(c) for c in untuple(w))

    def steps() -> Batches:
        comp = compact_complement(kname).batches() if kname is not None else None
        base = space.base_words()
        while True:
            u = next(base)
            batch = [u] if all(direct(c) for c in untuple(u)) and u else []
            if comp is not None:
                batch.extend(next(comp))
            yield batch

    return Name(Discipline.OPEN, space, steps, certify=certify, label="g^-1(V)")


@dataclass
class Embedding:
    space: ManifoldSpace
    components: list[CollapseMap]

    @property
    def dim_out(self) -> int:
        return len(self.components) * (self.space.dim + 1)

    def exact(self, x) -> tuple[Fraction, ...] | None:
        out: list[Fraction] = []
        for g in self.components:
            y = g.exact(x)
            if y is None:
                return None
            out.extend(y)
        return tuple(out)

    def forward(self, p: Name) -> Name:
        """G(x) as an R^{l(n+1)} point name; exact when x carries a rational tag."""
        sp = euclidean_space(self.dim_out)
        if p.point is not None:
            y = self.exact(p.point)
            if y is not None:
                return sp.point_name(y)

        def steps() -> Batches:
            loc = Locator(p, self.space.atlas)
            parts = [_CollapseState(g, loc) for g in self.components]
            b = EnclosureBuilder(sp)
            t = 0
            while True:
                t += 1
                loc.advance(t)
                boxes = [s.step(t) for s in parts]
                if all(bx is not None for bx in boxes):
                    b.feed(tuple(iv for bx in boxes for iv in bx))
                yield b.step(t)

        return Name(Discipline.POINT, sp, steps, label="G(x)")

    def inverse(self, q: Name) -> Name:
        """G^-1 on the image: a component whose enclosure avoids the pole gives
        the chart value g_j^-1, which feeds the manifold's point machine."""
        from .euclid import name_boxes

        atlas = self.space.atlas
        m = self.space.dim + 1
        comps = self.components
        boxes = name_boxes(q)
        state: dict[str, Any] = {"E": None}
        maps: dict[tuple[str, str], M.Map] = {}
        known: dict[str, Box] = {}

        def advance(t: int) -> None:
            E = next(boxes)
            state["E"] = E
            if E is None:
                return
            for j, g in enumerate(comps):
                part = E[j * m : (j + 1) * m]
                # the part must keep away from P; the inner inverse then gives chart values
                if box_outside_ball(part, g.pole, Fraction(1, 1 << 40)) and g.inner_inverse.domain(part) is True:
                    val = g.inner_inverse.eval_box(part, 8 + local_rate(t))
                    if val is not None:
                        i = g.chart.index
                        known[i] = val if i not in known else (box_meet(known[i], val) or known[i])

        def box_for(i: str, t: int) -> Box | None:
            if i in known:
                return known[i]
            if not known:
                return None
            j = min(known, key=lambda k: box_width(known[k]))
            key = (j, i)
            if key not in maps:
                maps[key] = atlas.transition_map(j, i)
            f = maps[key]
            if f.domain(known[j]) is not True:
                return None
            return f.eval_box(known[j], 8 + local_rate(t))

        zn = Name(Discipline.POINT, self.space.z, _machine(atlas, box_for, advance), label="G^-1")
        return t_level(zn, self.space)

    def forward_translator(self) -> Translator:
        return Translator(
            Discipline.POINT,
            Discipline.POINT,
            lambda n: self.forward(n).batches(),
            self.space,
            euclidean_space(self.dim_out),
            "G",
            point_map=self.exact,
        )


def embed_compact(space: ManifoldSpace) -> Embedding:
    """G = (g_1, ..., g_l) over every chart of a finite atlas with ball images."""
    atlas = space.atlas
    if not atlas.finite:
        raise ContractViolation("embed_compact needs a finite atlas")
    if not atlas.hausdorff:
        raise ContractViolation("embed_compact needs a computably Hausdorff manifold")
    return Embedding(space, [collapse_map(space, i) for i in atlas.indices()])
