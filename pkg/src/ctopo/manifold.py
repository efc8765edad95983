"""Computable atlases and the computable spaces they induce.

Points of a manifold are carried as rational vectors of some ambient space
(the circle in R^2, the torus in R^4, projective points as integer
representatives, ...); the atlas alone defines the topology.  A chart has a
forward map into R^n, an inverse map back to the carrier and an image region
with a decidable ball-containment test.

A computable ball is coded ``<i, w>`` (a 2-tuple of words) and denotes
``phi_i^-1(mu(w))`` when ``i`` is a chart index and ``mu(w)`` lies in the
chart image, and the empty set otherwise.  The manifold space is the
induced space of this predicate space: its base words are ⋂-codes of
computable balls.

Names over a manifold are produced by one machine: per step it learns chart
enclosures (directly from listed codes, or through transition maps from
another chart) and feeds them to one ball emitter per chart.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator

from . import maps as M
from .ball import RationalBall, ball_disjoint, ball_subset, format_ball, mu_decode, mu_dom, mu_encode
from .decision import ContainmentQuery, Relation, UnsupportedMapFamily, Verdict, decide
from .enumeration import dovetail_pairs
from .espace import InducedSpace, PredicateSpace, _z_to_t_steps
from .euclid import (
    EnclosureBuilder,
    enclosure_steps,
    as_vector,
    euclidean_space,
    image_of_point,
    local_rate,
    map_name,
    name_boxes,
    silent_name,
)
from .interval import Box, box_meet, box_width, point_box
from .names import Batches, ContractViolation, Discipline, Name, Translator
from .words import InvalidCode, check_word, nat_decode, nat_encode, tuple_word, untuple

# -- regions ---------------------------------------------------------------------------------


class Region:
    """An open subset of R^n with a ball-containment test (True/False/None)."""

    def contains_ball(self, b: RationalBall) -> bool | None:
        raise NotImplementedError

    def contains_point(self, y) -> bool:
        raise NotImplementedError


class Whole(Region):
    def contains_ball(self, b):
        return True

    def contains_point(self, y):
        return True

    def __repr__(self):
        return "R^n"


@dataclass(frozen=True)
class BallRegion(Region):
    ball: RationalBall

    def contains_ball(self, b):
        return ball_subset(b, self.ball)

    def contains_point(self, y):
        return self.ball.contains(as_vector(y))


@dataclass(frozen=True)
class ProductRegion(Region):
    a: Region
    b: Region
    split: int

    def contains_ball(self, ball):
        # a ball lies in A x B iff both coordinate projections (balls of the
        # same radius) do
        k = self.split
        pa = RationalBall(ball.center[:k], ball.radius)
        pb = RationalBall(ball.center[k:], ball.radius)
        return M._and(self.a.contains_ball(pa), self.b.contains_ball(pb))

    def contains_point(self, y):
        y = as_vector(y)
        return self.a.contains_point(y[: self.split]) and self.b.contains_point(y[self.split :])


@dataclass(frozen=True)
class MeetRegion(Region):
    parts: tuple

    def contains_ball(self, b):
        out: bool | None = True
        for p in self.parts:
            out = M._and(out, p.contains_ball(b))
            if out is False:
                return False
        return out

    def contains_point(self, y):
        return all(p.contains_point(y) for p in self.parts)


# -- charts and atlases -----------------------------------------------------------------------


@dataclass(frozen=True)
class Chart:
    index: str
    forward: M.Map
    inverse: M.Map
    region: Region
    label: str = ""

    @property
    def name(self) -> str:
        return self.label or self.index


def ball_code(i: str, b: RationalBall) -> str:
    """The computable-ball code <i, w>."""
    return tuple_word([i, mu_encode(b)])


def split_code(c: str) -> tuple[str, RationalBall]:
    i, w = untuple(c, 2)
    return i, mu_decode(w)


class Atlas:
    """A countable chart family with a decidable index set."""

    dim = 0
    ambient = 0
    label = "atlas"
    hausdorff = True
    finite = True
    decide_budget = 400

    def indices(self) -> Iterator[str]:
        raise NotImplementedError

    def chart(self, i: str) -> Chart | None:
        raise NotImplementedError

    def chart_by_label(self, label: str, limit: int = 1000) -> Chart:
        for n, i in enumerate(self.indices()):
            if n >= limit:
                break
            c = self.chart(i)
            if c.index == label or c.label == label:
                return c
        raise KeyError(label)

    def on_carrier(self, q, limit: int = 64) -> bool:
        """Whether the rational vector q is a point of the manifold; by default
        some chart among the first ``limit`` indices has q in its domain."""
        for n, i in enumerate(self.indices()):
            if n >= limit:
                break
            if self.chart(i).forward.in_domain(q):
                return True
        return False

    def valid(self, code: str) -> bool | None:
        """Whether <i, w> is a non-empty computable ball (chart exists and image holds the ball)."""
        try:
            i, b = split_code(code)
        except InvalidCode:
            return False
        c = self.chart(i)
        if c is None or b.dim != self.dim:
            return False
        return c.region.contains_ball(b)

    def transition_map(self, i: str, j: str) -> M.Map:
        return M.Composition([self.chart(i).inverse, self.chart(j).forward])

    def ball_disjoint(self, u: str, v: str) -> bool | None:
        cache = self.__dict__.setdefault("_disjoint_cache", {})
        key = (u, v)
        if key not in cache:
            cache[key] = self._ball_disjoint(u, v)
        return cache[key]

    def _ball_disjoint(self, u: str, v: str) -> bool | None:
        vu, vv = self.valid(u), self.valid(v)
        if vu is False or vv is False:
            return True
        if vu is None or vv is None:
            return None
        i, bu = split_code(u)
        j, bv = split_code(v)
        if i == j:
            return ball_disjoint(bu, bv)
        try:
            q = ContainmentQuery(bu, self.transition_map(i, j), bv, Relation.DISJOINT)
            out = decide(q, gap=min(bu.radius, bv.radius) / 64, budget=self.decide_budget)
        except UnsupportedMapFamily:
            return None
        return True if out.verdict is Verdict.HOLDS else None

    def ball_subset(self, u: str, v: str) -> bool | None:
        if u == v:
            return True
        vu = self.valid(u)
        if vu is False:
            return True
        i, bu = split_code(u)
        j, bv = split_code(v)
        if i == j and vu and ball_subset(bu, bv):
            return True
        return None

    def __repr__(self):
        return f"<Atlas {self.label}>"


class FiniteAtlas(Atlas):
    def __init__(
        self,
        dim: int,
        ambient: int,
        charts: Iterable[Chart],
        label: str,
        hausdorff: bool = True,
        carrier: Callable[[tuple], bool] | None = None,
    ):
        self.dim = dim
        self.ambient = ambient
        self.label = label
        self.hausdorff = hausdorff
        self.charts = {c.index: c for c in charts}
        self.carrier = carrier

    def on_carrier(self, q, limit: int = 64) -> bool:
        if len(q) != self.ambient:
            return False
        if self.carrier is not None and not self.carrier(q):
            return False
        return super().on_carrier(q, limit)

    def indices(self):
        return iter(list(self.charts))

    def chart(self, i):
        return self.charts.get(i)


def identity_atlas(n: int) -> FiniteAtlas:
    return FiniteAtlas(n, n, [Chart("0", M.Identity(n), M.Identity(n), Whole(), "id")], f"id-R^{n}")


# -- the predicate space Z_Phi -----------------------------------------------------------------


class AtlasPredicates(PredicateSpace):
    """Computable balls as a predicate space."""

    def __init__(self, atlas: Atlas):
        self.atlas = atlas
        self.label = f"Z({atlas.label})"
        self.euclid = euclidean_space(atlas.dim)

    @property
    def key(self):
        return ("Z", id(self.atlas))

    def dom(self, w):
        try:
            i, b = untuple(w, 2)
        except InvalidCode:
            return False
        return mu_dom(b, self.atlas.dim)

    def words(self):
        for i, w in dovetail_pairs(self.atlas.indices(), self.euclid.base_words()):
            yield tuple_word([i, w])

    def member(self, x, w):
        v = self.atlas.valid(w)
        if v is False:
            return False
        i, b = split_code(w)
        res = chart_contains(self.atlas.chart(i), x, b)
        return M._and(res, v) if res is not False else False

    def subset(self, u, v):
        return self.atlas.ball_subset(u, v)

    def disjoint(self, u, v):
        return self.atlas.ball_disjoint(u, v)

    def point_name(self, x):
        return z_point_name(self, x)


def chart_value(chart: Chart, x, prec: int = 64) -> Box | None:
    """An enclosure of phi(x) for a rational carrier point inside the chart domain, else None."""
    f = chart.forward
    x = as_vector(x)
    if not f.in_domain(x):
        return None
    img = f.exact(x)
    if img is not None:
        return point_box(img)
    return f.enclose(x, prec)


def chart_contains(chart: Chart, x, b: RationalBall) -> bool | None:
    """x in phi^-1(B) for a rational carrier point x."""
    f = chart.forward
    x = as_vector(x)
    st = f.domain(point_box(x))
    if st is False:
        return False
    img = f.exact(x) if st else None
    if img is not None:
        return b.contains(img)
    for prec in (24, 64, 160):
        box = f.enclose(x, prec)
        if box is None:
            break
        sp = euclidean_space(len(box))
        verdict = sp.word_vs_box(mu_encode(b), box)
        if verdict is False:
            return False
        if verdict and st:
            return True
    return None


# -- the manifold space T_Phi ------------------------------------------------------------------


class ManifoldSpace(InducedSpace):
    def __init__(self, atlas: Atlas, label: str | None = None):
        super().__init__(AtlasPredicates(atlas))
        self.atlas = atlas
        self.dim = atlas.dim
        self.hausdorff = atlas.hausdorff
        self.label = label or atlas.label

    @property
    def key(self):
        return ("T", id(self.atlas))

    def point_name(self, x) -> Name:
        x = as_vector(x)
        return t_level(z_point_name(self.z, x), self, f"point {x}")

    def chart(self, i: str) -> Chart | None:
        return self.atlas.chart(i)

    def format_code(self, w: str) -> str:
        """A base word as its computable balls, each printed ``<i>:<ball literal>``."""
        return " & ".join(format_ball_code(m) for m in untuple(w)) or "whole"

    def resolve_chart(self, key: str) -> Chart:
        """A chart by index or display label."""
        c = self.atlas.chart(key)
        if c is not None:
            return c
        try:
            return self.atlas.chart_by_label(key)
        except KeyError:
            raise ContractViolation(f"no chart {key!r} in {self.label}") from None


def format_ball_code(code: str) -> str:
    i, b = split_code(code)
    return f"{i}:{format_ball(b)}"


def z_level(n: Name) -> Name:
    """View a T-level point name through its computable-ball members."""
    if isinstance(n.space, AtlasPredicates):
        return n
    if getattr(n, "zname", None) is not None:
        return n.zname
    space: ManifoldSpace = n.space

    def steps() -> Batches:
        for batch in n.batches():
            out = []
            for w in batch:
                out.extend(untuple(w))
            yield out

    return Name(n.discipline, space.z, steps, point=n.point)


def t_level(zn: Name, space: ManifoldSpace, label: str = "") -> Name:
    n = Name(Discipline.POINT, space, _z_to_t_steps(zn), label=label or zn.label, point=zn.point)
    # keep the source so z_level can skip the intersection codes
    n.zname = zn
    return n


CHARTS_PER_STEP = 8


def _machine(atlas: Atlas, box_for: Callable[[str, int], Box | None], advance: Callable[[int], None] | None):
    """The chart-wise point-name emitter.  Each step advances the input,
    admits one more chart index (all at once for a finite atlas) and feeds at
    most ``CHARTS_PER_STEP`` charts round-robin."""
    sp = euclidean_space(atlas.dim)

    def steps() -> Batches:
        idx = atlas.indices()
        targets: deque[str] = deque()
        if atlas.finite:
            targets.extend(idx)
        builders: dict[str, EnclosureBuilder] = {}
        t = 0
        while True:
            t += 1
            if advance is not None:
                advance(t)
            if not atlas.finite:
                nxt = next(idx, None)
                if nxt is not None:
                    targets.append(nxt)
            batch: list[str] = []
            for _ in range(min(CHARTS_PER_STEP, len(targets))):
                i = targets.popleft()
                targets.append(i)
                box = box_for(i, t)
                b = builders.get(i)
                if b is None:
                    if box is None:
                        continue
                    chart = atlas.chart(i)
                    b = builders[i] = EnclosureBuilder(
                        sp,
                        accept=_gate(chart.region),
                        wrap=lambda w, i=i: tuple_word([i, w]),
                    )
                b.feed(box)
                batch.extend(b.step(t))
            yield batch

    return steps


def _gate(region: Region) -> Callable[[str], bool]:
    return lambda w: region.contains_ball(mu_decode(w)) is True


def z_point_name(z: AtlasPredicates, x) -> Name:
    """delta_Z name of a rational carrier point."""
    atlas = z.atlas
    x = as_vector(x)
    status: dict[str, Any] = {}

    def box_for(i: str, t: int) -> Box | None:
        if i not in status:
            c = atlas.chart(i)
            status[i] = None if c is None else chart_value(c, x, 16)
        box = status[i]
        if box is None:
            return None
        if box_width(box) == 0:
            return box
        c = atlas.chart(i)
        return c.forward.enclose(x, 8 + local_rate(t))

    return Name(Discipline.POINT, z, _machine(atlas, box_for, None), label=f"zpoint {x}", point=x)


class Locator:
    """Chart enclosures of the point denoted by a manifold name.

    ``advance`` reads one more input step.  ``box_for(i, t)`` answers for a
    chart of the target atlas: the direct enclosure if the input lists codes of
    that chart (same atlas only), otherwise the image of the narrowest known
    chart enclosure under the transition map, provided its domain is
    certified.
    """

    def __init__(self, p: Name, target: Atlas):
        zp = z_level(p)
        self.source: Atlas = zp.space.atlas
        self.target = target
        self.same = self.source is target
        self._it = zp.batches()
        self.E: dict[str, Box] = {}
        self.codes: list[str] = []
        self._seen: set[str] = set()
        self._maps: dict[tuple[str, str], M.Map] = {}
        self._last: dict[str, Any] = {}

    def advance(self, t: int) -> None:
        for code in next(self._it):
            if code in self._seen:
                continue
            self._seen.add(code)
            self.codes.append(code)
            i, b = split_code(code)
            old = self.E.get(i)
            box = b.box()
            self.E[i] = box if old is None else (box_meet(old, box) or old)

    def _map(self, j: str, i: str) -> M.Map | None:
        key = (j, i)
        if key not in self._maps:
            src, dst = self.source.chart(j), self.target.chart(i)
            self._maps[key] = None if src is None or dst is None else M.Composition([src.inverse, dst.forward])
        return self._maps[key]

    def box_for(self, i: str, t: int) -> Box | None:
        if self.same and i in self.E:
            return self.E[i]
        if not self.E:
            return None
        j = min(self.E, key=lambda k: box_width(self.E[k]))
        src = self.E[j]
        if self._last.get(i) == (j, src):
            return None
        self._last[i] = (j, src)
        f = self._map(j, i)
        if f is None or f.domain(src) is not True:
            return None
        return f.eval_box(src, 8 + local_rate(t))


def translate_name(p: Name, target: ManifoldSpace) -> Name:
    """Re-express a manifold point name in another atlas on the same carrier."""
    loc = Locator(p, target.atlas)
    zn = Name(Discipline.POINT, target.z, _machine(target.atlas, loc.box_for, loc.advance), point=p.point)
    return t_level(zn, target)


def atlas_translator(a: ManifoldSpace, b: ManifoldSpace) -> Translator:
    return Translator(
        Discipline.POINT,
        Discipline.POINT,
        lambda n: translate_name(n, b).batches(),
        a,
        b,
        label=f"{a.label}->{b.label}",
        point_map=lambda x: x,
    )


# -- chart evaluation --------------------------------------------------------------------------

FORWARD = "forward"
BACKWARD = "backward"


def chart_eval(space: ManifoldSpace, i: str, direction: str, p: Name) -> Name:
    """Forward: a manifold point name -> the R^n name of phi_i(x).
    Backward: an R^n name of y in the chart image -> the manifold name of phi_i^-1(y)."""
    chart = space.chart(i)
    if chart is None:
        raise ContractViolation(f"{i!r} is not a chart index of {space.label}")
    sp = euclidean_space(space.dim)
    if direction == FORWARD:
        if p.point is not None:
            return image_of_point(chart.forward, p.point, sp)
        loc = Locator(p, space.atlas)

        def steps() -> Batches:
            b = EnclosureBuilder(sp)
            t = 0
            while True:
                t += 1
                loc.advance(t)
                b.feed(loc.box_for(i, t))
                yield b.step(t)

        return Name(Discipline.POINT, sp, steps, label=f"{chart.name}(x)")
    if direction != BACKWARD:
        raise ValueError(f"unknown direction {direction!r}")
    if p.point is not None:
        y = as_vector(p.point)
        if not chart.region.contains_point(y):
            return t_level(silent_name(space.z), space)
        x = chart.inverse.exact(y)
        if x is not None:
            return space.point_name(x)
    boxes = name_boxes(p) if p.point is None else None
    state: dict[str, Any] = {"E": None}
    maps: dict[str, M.Map] = {}

    def advance(t: int) -> None:
        if boxes is not None:
            state["E"] = next(boxes)
        else:
            state["E"] = point_box(as_vector(p.point))

    last: dict[str, Any] = {}

    def box_for(j: str, t: int) -> Box | None:
        E = state["E"]
        if E is None:
            return None
        if j == i:
            return E
        # nothing new unless the input box or the working precision moved
        key = (E, local_rate(t))
        if last.get(j) == key:
            return None
        last[j] = key
        if j not in maps:
            maps[j] = space.atlas.transition_map(i, j)
        f = maps[j]
        if f.domain(E) is not True:
            return None
        return f.eval_box(E, 8 + key[1])

    zn = Name(Discipline.POINT, space.z, _machine(space.atlas, box_for, advance))
    return t_level(zn, space)


def transition(space: ManifoldSpace, i: str, j: str) -> Translator:
    """phi_j o phi_i^-1 on R^n point names."""
    from .euclid import map_translator

    return map_translator(space.atlas.transition_map(i, j))


def _carrier_boxes(p: Name) -> Iterator[Box | None]:
    """Per input step, the meet of the carrier boxes phi_i^-1(B) over the computable balls listed so far."""
    zp = z_level(p)
    atlas = zp.space.atlas
    E = None
    for batch in zp.batches():
        for code in batch:
            i, b = split_code(code)
            box = atlas.chart(i).inverse.eval_box(b.box(), 48)
            if box is not None:
                E = box if E is None else (box_meet(E, box) or E)
        yield E


def ambient_enclosure(p: Name, budget: int) -> Box | None:
    """Meet of the carrier boxes over the computable balls listed by p within ``budget`` steps."""
    E = None
    for t, E in enumerate(_carrier_boxes(p), 1):
        if t >= budget:
            break
    return E if budget > 0 else None


def ambient_enclosure_at(p: Name, prec: int, max_budget: int = 20_000) -> Box | None:
    """A carrier enclosure of width <= 2^-prec, read step by step up to ``max_budget``."""
    target = Fraction(1, 1 << prec)
    for t, E in enumerate(_carrier_boxes(p), 1):
        if E is not None and box_width(E) <= target:
            return E
        if t >= max_budget:
            return None


# -- compatibility -----------------------------------------------------------------------------


@dataclass
class CompatibilityReport:
    checked: int = 0
    failures: list = field(default_factory=list)
    unverified: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        verdict = "pass" if self.ok else f"{len(self.failures)} failures"
        return f"{self.checked} samples checked, {self.unverified} undecided codes: {verdict}"


def _check_name(space: ManifoldSpace, x, name: Name, budget: int, where: str, report: CompatibilityReport) -> None:
    words = name.query(budget)
    fine = False
    for w in words:
        m = space.member(x, w)
        if m is False:
            report.failures.append((where, x, space.format_code(w), "unsound"))
            return
        if m is None:
            report.unverified += 1
        for code in untuple(w):
            if split_code(code)[1].radius <= Fraction(1, 8):
                fine = True
    if not fine:
        report.failures.append((where, x, None, "incomplete at budget"))


def compatibility_certificate(
    a: ManifoldSpace,
    b: ManifoldSpace,
    t_ab: Translator,
    t_ba: Translator,
    samples: Iterable,
    budget: int = 100,
) -> CompatibilityReport:
    """Check declared translators on tagged sample points: translated names
    must list only codes containing the point (sound) and reach a code of
    radius <= 1/8 within the budget (complete at budget)."""
    report = CompatibilityReport()
    for x in samples:
        x = as_vector(x)
        report.checked += 1
        _check_name(b, x, t_ab(a.point_name(x)), budget, "a->b", report)
        _check_name(a, x, t_ba(b.point_name(x)), budget, "b->a", report)
    return report


def relabel_translator(t: Translator, mapping: dict[str, str]) -> Translator:
    """A translator whose output chart indices are rewritten (used as a negative control)."""

    def fix(w: str) -> str:
        out = []
        for code in untuple(w):
            i, b = untuple(code, 2)
            out.append(tuple_word([mapping.get(i, i), b]))
        return tuple_word(out)

    def transducer(n: Name) -> Batches:
        for batch in t.transducer(n):
            yield [fix(w) for w in batch]

    return Translator(t.source, t.target, transducer, t.source_space, t.target_space, label=t.label + "*")


# -- products and push-forwards ------------------------------------------------------------------


class ProductAtlas(Atlas):
    def __init__(self, a: Atlas, b: Atlas):
        self.a, self.b = a, b
        self.dim = a.dim + b.dim
        self.ambient = a.ambient + b.ambient
        self.label = f"{a.label}x{b.label}"
        self.hausdorff = a.hausdorff and b.hausdorff
        self.finite = a.finite and b.finite

    def indices(self):
        for i, j in dovetail_pairs(self.a.indices(), self.b.indices()):
            yield tuple_word([i, j])

    def chart(self, ij):
        try:
            i, j = untuple(ij, 2)
        except InvalidCode:
            return None
        ca, cb = self.a.chart(i), self.b.chart(j)
        if ca is None or cb is None:
            return None
        return Chart(
            ij,
            M.Product(ca.forward, cb.forward),
            M.Product(ca.inverse, cb.inverse),
            ProductRegion(ca.region, cb.region, self.a.dim),
            f"{ca.name}x{cb.name}",
        )

    def on_carrier(self, q, limit: int = 64) -> bool:
        k = self.a.ambient
        return len(q) == self.ambient and self.a.on_carrier(q[:k], limit) and self.b.on_carrier(q[k:], limit)


def product_manifold(m1: ManifoldSpace, m2: ManifoldSpace) -> ManifoldSpace:
    return ManifoldSpace(ProductAtlas(m1.atlas, m2.atlas))


def project_point(p: Name, k: int) -> Name:
    """A point name of the k-th factor from a point name of a product manifold."""
    space: ManifoldSpace = p.space
    atlas: ProductAtlas = space.atlas
    factor = atlas.a if k == 0 else atlas.b
    fspace = ManifoldSpace(factor)
    loc = Locator(p, atlas)
    cut = slice(0, atlas.a.dim) if k == 0 else slice(atlas.a.dim, None)

    def box_for(i: str, t: int) -> Box | None:
        for ij, E in loc.E.items():
            if untuple(ij, 2)[k] == i:
                return E[cut]
        return None

    zn = Name(Discipline.POINT, fspace.z, _machine(factor, box_for, loc.advance))
    point = None
    if p.point is not None:
        point = p.point[: atlas.a.ambient] if k == 0 else p.point[atlas.a.ambient :]
    return Name(Discipline.POINT, fspace, _z_to_t_steps(zn), point=point)


class PushforwardAtlas(Atlas):
    """psi_i = phi_i o f^-1 on V_i = f(U_i)."""

    def __init__(self, base: Atlas, f: M.Map, f_inv: M.Map, label: str):
        self.base = base
        self.f, self.f_inv = f, f_inv
        self.dim = base.dim
        self.ambient = f.dim_out
        self.label = label
        self.hausdorff = base.hausdorff
        self.finite = base.finite

    def indices(self):
        return self.base.indices()

    def chart(self, i):
        c = self.base.chart(i)
        if c is None:
            return None
        return Chart(
            i,
            M.Composition([self.f_inv, c.forward]),
            M.Composition([c.inverse, self.f]),
            c.region,
            c.label,
        )

    def on_carrier(self, q, limit: int = 64) -> bool:
        if len(q) != self.ambient or not self.f_inv.in_domain(q):
            return False
        y = self.f_inv.exact(q)
        return y is not None and self.f.exact(y) == tuple(q) and self.base.on_carrier(y, limit)


def pushforward_manifold(m: ManifoldSpace, f: M.Map, f_inv: M.Map, label: str = "") -> ManifoldSpace:
    return ManifoldSpace(PushforwardAtlas(m.atlas, f, f_inv, label or f"{m.label}_f"))


def pushforward_translator(m: ManifoldSpace, pushed: ManifoldSpace) -> Translator:
    """delta_{Phi_f} = f o delta_Phi: the words are unchanged, only their meaning moves."""
    f = pushed.atlas.f

    def point_map(x):
        x = as_vector(x)
        return f.exact(x) if f.in_domain(x) else None

    def transducer(n: Name) -> Batches:
        return n.batches()

    return Translator(Discipline.POINT, Discipline.POINT, transducer, m, pushed, "push", point_map=point_map)


# -- normalization and refinement ------------------------------------------------------------------


def nonempty_codes(space: ManifoldSpace) -> Iterator[str]:
    """Enumerate the computable balls certified non-empty."""
    for w in space.z.words():
        if space.atlas.valid(w) is True:
            yield w


class PrunedPredicates(PredicateSpace):
    """Computable balls certified non-empty, each tagged by its own code.

    The re-indexer w -> w is total and injective on the tags, and the tag set
    is decidable because the certificate is a total procedure.  Numbering the
    codes by their position in the enumeration would also work, but finding
    that position for a fine ball means walking a very long prefix."""

    def __init__(self, space: ManifoldSpace):
        self.parent = space
        self.label = f"pruned({space.label})"

    def code(self, w: str) -> str:
        return w

    def dom(self, w):
        return self.parent.atlas.valid(w) is True

    def words(self):
        return nonempty_codes(self.parent)

    def member(self, x, w):
        return self.parent.z.member(x, w)

    def subset(self, u, v):
        return self.parent.z.subset(u, v)

    def disjoint(self, u, v):
        return self.parent.z.disjoint(u, v)

    def point_name(self, x):
        return _reindex(z_level(self.parent.point_name(x)), self)


def _reindex(zn: Name, pruned: PrunedPredicates) -> Name:
    def steps() -> Batches:
        for batch in zn.batches():
            yield [w for w in batch if pruned.dom(w)]

    return Name(Discipline.POINT, pruned, steps, point=zn.point)


def normalize_balls(space: ManifoldSpace):
    """(enumerator of non-empty codes, pruned space, translator to it, translator back)."""
    pruned = PrunedPredicates(space)
    tspace = InducedSpace(pruned)

    def to_pruned(n: Name) -> Batches:
        return _z_to_t_steps(_reindex(z_level(n), pruned))()

    def from_pruned(n: Name) -> Batches:
        def zsteps() -> Batches:
            for batch in n.batches():
                out = []
                for w in batch:
                    out.extend(pruned.code(m) for m in untuple(w))
                yield out

        return _z_to_t_steps(Name(Discipline.POINT, space.z, zsteps))()

    fwd = Translator(Discipline.POINT, Discipline.POINT, to_pruned, space, tspace, "prune", point_map=lambda x: x)
    back = Translator(Discipline.POINT, Discipline.POINT, from_pruned, tspace, space, "unprune", point_map=lambda x: x)
    return nonempty_codes(space), tspace, fwd, back


class RefinedAtlas(Atlas):
    """Charts indexed by non-empty computable balls <i, w>.

    ``ball-image``: phi_i restricted to phi_i^-1(mu(w)), image mu(w).
    ``full-space``: the same chart followed by h_w, image R^n.
    """

    finite = False

    def __init__(self, base: Atlas, mode: str):
        if mode not in ("ball-image", "full-space"):
            raise ValueError(f"unknown refinement mode {mode!r}")
        self.base = base
        self.mode = mode
        self.dim = base.dim
        self.ambient = base.ambient
        self.label = f"{base.label}[{mode}]"
        self.hausdorff = base.hausdorff
        self._z = AtlasPredicates(base)
        self._charts: dict[str, Chart | None] = {}

    def indices(self):
        for w in self._z.words():
            if self.base.valid(w) is True:
                yield w

    def chart(self, code):
        if code in self._charts:
            return self._charts[code]
        c = None
        if self.base.valid(code) is True:
            i, b = split_code(code)
            parent = self.base.chart(i)
            fwd = M.RestrictedMap(parent.forward, b)
            if self.mode == "ball-image":
                c = Chart(code, fwd, parent.inverse, BallRegion(b), f"{parent.name}|{format_ball(b)}")
            else:
                c = Chart(
                    code,
                    M.Composition([fwd, M.BallToSpace(b)]),
                    M.Composition([M.SpaceToBall(b), parent.inverse]),
                    Whole(),
                    f"h o {parent.name}|{format_ball(b)}",
                )
        self._charts[code] = c
        return c


def refine_atlas(space: ManifoldSpace, mode: str = "ball-image"):
    """(refined space, translator to it, translator back)."""
    refined = ManifoldSpace(RefinedAtlas(space.atlas, mode))
    return refined, atlas_translator(space, refined), atlas_translator(refined, space)


def containment_codes(w: RationalBall, z: RationalBall, budget: int = 200) -> Iterator[str | None]:
    """The c.e. set C_wz = {v : mu(v) ⊂ h_w^-1(mu(z))}, with ``None`` ticks for rejected candidates."""
    sp = euclidean_space(w.dim)
    h = M.BallToSpace(w)
    for v in sp.base_words():
        bv = mu_decode(v)
        if not ball_subset(bv, w):
            yield None
            continue
        out = decide(ContainmentQuery(bv, h, z), budget=budget)
        yield v if out.verdict is Verdict.HOLDS else None


# -- open submanifolds ---------------------------------------------------------------------------


class SubAtlas(Atlas):
    """Charts <i, w, n> of an open subset W: w is a ⋂-code first listed by W's
    name at step n whose members all use chart i; the chart is phi_i on nu(w).

    Tagging the listing step keeps the index set decidable although W is only
    enumerable."""

    finite = False

    def __init__(self, space: ManifoldSpace, W: Name):
        self.space = space
        self.parent = space.atlas
        self.W = W
        self.dim = space.dim
        self.ambient = self.parent.ambient
        self.label = f"{space.label}|W"
        self.hausdorff = self.parent.hausdorff
        self._charts: dict[str, Chart | None] = {}

    def _chart_of(self, w: str) -> list[str]:
        members = [split_code(m) for m in untuple(w)]
        charts = {i for i, _ in members}
        if not members:
            return list(self.parent.indices()) if self.parent.finite else []
        if len(charts) != 1:
            return []
        return list(charts)

    def indices(self):
        t = 0
        for batch in self.W.batches():
            t += 1
            for w in batch:
                for i in self._chart_of(w):
                    yield tuple_word([i, w, nat_encode(t)])

    def chart(self, idx):
        if idx in self._charts:
            return self._charts[idx]
        c = None
        try:
            i, w, n = untuple(idx, 3)
            step = nat_decode(n)
        except InvalidCode:
            self._charts[idx] = None
            return None
        parent = self.parent.chart(i)
        if parent is not None and i in self._chart_of(w) and self.W.step_of(w, step) == step:
            balls = [split_code(m)[1] for m in untuple(w)]
            fwd = parent.forward
            for b in balls:
                fwd = M.RestrictedMap(fwd, b)
            region = MeetRegion((parent.region,) + tuple(BallRegion(b) for b in balls))
            c = Chart(idx, fwd, parent.inverse, region, f"{parent.name}|{step}")
        self._charts[idx] = c
        return c


def open_submanifold(space: ManifoldSpace, W: Name):
    """(restricted manifold, restriction translator delta -> delta_W, inclusion translator)."""
    if W.discipline is not Discipline.OPEN:
        raise ContractViolation("open_submanifold expects an open name")
    sub_atlas = SubAtlas(space, W)
    sub = ManifoldSpace(sub_atlas)

    def restrict(p: Name) -> Batches:
        return _z_to_t_steps(restriction_zname(p, sub))()

    restrict_t = Translator(Discipline.POINT, Discipline.POINT, restrict, space, sub, "restrict")
    include_t = atlas_translator(sub, space)
    return sub, restrict_t, include_t


def restriction_zname(p: Name, sub: ManifoldSpace) -> Name:
    """The time-sharing machine: for every code w listed by W a task
    semi-decides x in nu(w) against the input's listed words; once it
    confirms, the charts <i, w, n> start emitting balls around the point."""
    atlas: SubAtlas = sub.atlas
    space = atlas.space
    loc = Locator(p, atlas.parent)
    pa = atlas.parent

    def membership_task(w: str):
        # x in nu(w) once every member of w contains some listed ball of x;
        # one listed ball is compared per step
        todo = set(untuple(w))
        pos = 0
        while todo:
            if pos < len(loc.codes):
                c = loc.codes[pos]
                pos += 1
                todo = {m for m in todo if pa.ball_subset(c, m) is not True}
            if todo:
                yield

    def steps() -> Batches:
        wb = atlas.W.batches()
        live: list[tuple[Iterator, list[str]]] = []
        active: deque[str] = deque()
        builders: dict[str, EnclosureBuilder] = {}
        sp = euclidean_space(atlas.dim)
        t = 0
        while True:
            t += 1
            loc.advance(t)
            for w in next(wb):
                idxs = [tuple_word([i, w, nat_encode(t)]) for i in atlas._chart_of(w)]
                if idxs:
                    live.append((membership_task(w), idxs))
            still = []
            for task, idxs in live:
                try:
                    next(task)
                    still.append((task, idxs))
                except StopIteration:
                    active.extend(idxs)
            live = still
            batch: list[str] = []
            for _ in range(min(CHARTS_PER_STEP, len(active))):
                idx = active.popleft()
                active.append(idx)
                chart = atlas.chart(idx)
                b = builders.get(idx)
                if b is None:
                    b = builders[idx] = EnclosureBuilder(
                        sp, accept=_gate(chart.region), wrap=lambda v, idx=idx: tuple_word([idx, v])
                    )
                b.feed(loc.box_for(untuple(idx, 3)[0], t))
                batch.extend(b.step(t))
            yield batch

    return Name(Discipline.POINT, sub.z, steps, label="restricted", point=p.point)


# -- the carrier structure -----------------------------------------------------------------------


def from_ambient(space: ManifoldSpace) -> Translator:
    """Ambient R^N point names (the subspace structure of the carrier) -> manifold names."""
    atlas = space.atlas
    amb = euclidean_space(atlas.ambient)

    def transducer(n: Name) -> Batches:
        boxes = name_boxes(n)
        state: dict[str, Any] = {"E": None}

        def advance(t: int) -> None:
            state["E"] = next(boxes)

        def box_for(i: str, t: int) -> Box | None:
            E = state["E"]
            c = atlas.chart(i)
            if E is None or c is None or c.forward.domain(E) is not True:
                return None
            return c.forward.eval_box(E, 8 + local_rate(t))

        zn = Name(Discipline.POINT, space.z, _machine(atlas, box_for, advance))
        return _z_to_t_steps(zn)()

    return Translator(Discipline.POINT, Discipline.POINT, transducer, amb, space, "ambient->M", point_map=lambda x: x)


def to_ambient(space: ManifoldSpace) -> Translator:
    """Manifold names -> ambient R^N point names, through the chart inverses."""
    atlas = space.atlas
    amb = euclidean_space(atlas.ambient)

    def transducer(n: Name) -> Batches:
        zn = z_level(n)

        def boxes() -> Iterator[Box | None]:
            E = None
            t = 0
            for batch in zn.batches():
                t += 1
                for code in batch:
                    i, b = split_code(code)
                    c = atlas.chart(i)
                    if c is None or c.region.contains_ball(b) is not True:
                        continue
                    box = c.inverse.eval_box(b.box(), 8 + local_rate(t))
                    if box is not None:
                        E = box if E is None else (box_meet(E, box) or E)
                yield E

        return enclosure_steps(amb, boxes())

    return Translator(Discipline.POINT, Discipline.POINT, transducer, space, amb, "M->ambient", point_map=lambda x: x)
