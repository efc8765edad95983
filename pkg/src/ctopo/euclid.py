"""Computable Euclidean space: rational balls, point names, the Cauchy
representation and name transducers for the closed-form maps.

Point names are produced from *enclosure streams*: one box per machine step,
each containing the point.  Step ``t`` may emit

* local balls ``B(c, 2^-k)`` around the current enclosure, for
  ``k <= local_rate(t)`` (square-root growth after a short linear start
  keeps code lengths polynomial in the budget), and
* the ``t``-th code of a fixed total enumeration of all balls, when the
  enclosure certifies membership; undecided codes are retried later.

The second channel makes every name complete in the limit: a ball that
contains the point with positive margin is decided once the enclosure is
small enough.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Iterator, Sequence

from . import maps as M
from .ball import (
    RationalBall,
    ball_disjoint,
    ball_subset,
    dist2,
    mu_decode,
    mu_dom,
    mu_encode,
)
from .enumeration import LazySeq, positive_rational, rational, unpair_n
from .espace import EffectiveSpace, InducedSpace, PredicateSpace
from .interval import (
    Box,
    Interval,
    box_inside_ball,
    box_meet,
    box_mid,
    box_outside_ball,
    box_width,
    far_dist2,
    floor_dyadic,
    point_box,
)
from .names import Batches, ContractViolation, Discipline, Name, Translator
from .words import InvalidCode, check_word, rat_decode, rat_dom, rat_encode, tuple_word, untuple

Vector = tuple  # tuple[Fraction, ...]


def as_vector(x) -> Vector:
    if isinstance(x, (int, Fraction)):
        return (Fraction(x),)
    return tuple(Fraction(c) for c in x)


# -- global enumeration of balls ---------------------------------------------------------


# decoded balls of enumerated codes, so hot loops skip re-parsing
_DECODED: dict[str, RationalBall] = {}


def _ball_codes(n: int) -> Iterator[str]:
    k = 0
    while True:
        idx = unpair_n(k, n + 1)
        center = tuple(rational(i) for i in idx[:-1])
        b = RationalBall(center, positive_rational(idx[-1]))
        w = mu_encode(b)
        _DECODED[w] = b
        yield w
        k += 1


_GLOBAL: dict[int, LazySeq] = {}


def global_code(n: int, k: int) -> str:
    """The k-th code of the fixed enumeration of dom mu^n (a bijection onto all balls)."""
    seq = _GLOBAL.get(n)
    if seq is None:
        seq = _GLOBAL[n] = LazySeq(_ball_codes(n))
    return seq.get(k)


def local_rate(t: int) -> int:
    # finest local level allowed at step t: a bounded linear head start, then
    # square-root growth so exact points do not flood long listings
    return 2 * isqrt(t) + min(t, 32)


class EnclosureBuilder:
    """Incremental point-name emitter for one box space.

    ``accept`` filters candidate words (e.g. balls inside a chart image) and
    ``wrap`` rewrites accepted words into the output code.
    """

    def __init__(self, space, accept: Callable[[str], bool] | None = None, wrap: Callable[[str], str] | None = None):
        self.space = space
        self.accept = accept
        self.wrap = wrap
        self.E: Box | None = None
        self.k = 0
        self.g = 0
        self.pending: deque[str] = deque()

    def feed(self, box: Box | None) -> None:
        if box is None:
            return
        if self.E is None:
            self.E = box
        else:
            self.E = box_meet(self.E, box) or self.E

    def _ok(self, w: str) -> bool:
        return self.accept is None or self.accept(w)

    def _out(self, w: str) -> str:
        return w if self.wrap is None else self.wrap(w)

    def step(self, t: int) -> list[str]:
        batch: list[str] = []
        E = self.E
        if E is None:
            return batch
        space = self.space
        while self.k <= local_rate(t):
            w = space.local_word(E, self.k)
            if w is None:
                break
            if self._ok(w):
                batch.append(self._out(w))
            self.k += 1
        w = space.global_word(self.g)
        self.g += 1
        self._test(w, batch, E)
        for _ in range(min(2, len(self.pending))):
            self._test(self.pending.popleft(), batch, E)
        return batch

    def _test(self, w: str, batch: list[str], E: Box) -> None:
        verdict = self.space.word_vs_box(w, E)
        if verdict:
            if self._ok(w):
                batch.append(self._out(w))
        elif verdict is None:
            self.pending.append(w)


def enclosure_steps(space, enclosures: Iterable[Box | None]) -> Batches:
    """Turn a stream of enclosures of one point into the batches of its point name."""
    b = EnclosureBuilder(space)
    t = 0
    for box in enclosures:
        t += 1
        b.feed(box)
        yield b.step(t)


def name_boxes(n: Name) -> Iterator[Box | None]:
    """Per input step, the meet of the boxes of all words listed so far."""
    space = n.space
    E: Box | None = None
    for batch in n.batches():
        for w in batch:
            b = space.word_box(w)
            if b is None:
                continue
            E = b if E is None else (box_meet(E, b) or E)
        yield E


def enclosure_at(n: Name, prec: int, max_budget: int = 20_000) -> Box | None:
    """An enclosure of width <= 2^-prec read off a point name, or None if the
    name does not get that precise within ``max_budget`` steps."""
    target = Fraction(1, 1 << prec)
    if n.point is not None:
        return point_box(as_vector(n.point))
    for t, E in enumerate(name_boxes(n), 1):
        if E is not None and box_width(E) <= target:
            return E
        if t >= max_budget:
            return None


# -- the space ------------------------------------------------------------------------------


class EuclideanSpace(EffectiveSpace):
    hausdorff = True

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = n
        self.label = f"R^{n}"

    @property
    def key(self):
        return ("R", self.dim)

    def dom(self, w):
        return mu_dom(w, self.dim)

    def ball(self, w: str) -> RationalBall:
        b = _DECODED.get(w) or mu_decode(w)
        if b.dim != self.dim:
            raise InvalidCode(f"ball of dimension {b.dim} in {self.label}")
        return b

    def global_word(self, k: int) -> str:
        return global_code(self.dim, k)

    def base_words(self):
        k = 0
        while True:
            yield global_code(self.dim, k)
            k += 1

    def refine(self, u, v):
        """Balls inside nu(u) ∩ nu(v): the larger-in-smaller shortcut, then
        dyadic grids of growing resolution over the common bounding box."""
        bu, bv = self.ball(u), self.ball(v)
        if ball_subset(bu, bv):
            yield u
            return
        if ball_subset(bv, bu):
            yield v
            return
        box = box_meet(bu.box(), bv.box())
        if box is None or ball_disjoint(bu, bv):
            return
        n = self.dim
        s = 0
        while True:
            s += 1
            step = Fraction(1, 1 << s)
            radius = n * step
            ranges = [
                range(int(floor_dyadic(iv.lo, s) * (1 << s)), int(floor_dyadic(iv.hi, s) * (1 << s)) + 2)
                for iv in box
            ]
            for idx in _grid(ranges):
                c = tuple(i * step for i in idx)
                b = RationalBall(c, radius)
                if ball_subset(b, bu) and ball_subset(b, bv):
                    yield mu_encode(b)
                else:
                    yield None

    def subset(self, u, v):
        return ball_subset(self.ball(u), self.ball(v))

    def disjoint(self, u, v):
        return ball_disjoint(self.ball(u), self.ball(v))

    def member(self, x, w):
        return self.ball(w).contains(as_vector(x))

    def point_name(self, x) -> Name:
        return point_from_rational(x, self)

    # box-space hooks
    def word_box(self, w: str) -> Box:
        return self.ball(w).box()

    def word_vs_box(self, w: str, box: Box) -> bool | None:
        b = self.ball(w)
        if all(iv.lo == iv.hi for iv in box):
            return b.contains([iv.lo for iv in box])
        if box_inside_ball(box, b.center, b.radius):
            return True
        if box_outside_ball(box, b.center, b.radius):
            return False
        return None

    def local_word(self, box: Box, k: int) -> str | None:
        r = Fraction(1, 1 << k)
        if box_width(box) == 0:
            c = box_mid(box)
        else:
            c = tuple(floor_dyadic(m, k + 3) for m in box_mid(box))
        if far_dist2(box, c) < r * r:
            return mu_encode(RationalBall(c, r))
        return None

    def open_ball(self, b: RationalBall) -> Name:
        return self.base_open(mu_encode(b))


def _grid(ranges: Sequence[range]) -> Iterator[tuple[int, ...]]:
    if not ranges:
        yield ()
        return
    for i in ranges[0]:
        for rest in _grid(ranges[1:]):
            yield (i,) + rest


_SPACES: dict[int, EuclideanSpace] = {}


def euclidean_space(n: int) -> EuclideanSpace:
    sp = _SPACES.get(n)
    if sp is None:
        sp = _SPACES[n] = EuclideanSpace(n)
    return sp


def point_from_rational(q, space: EuclideanSpace | None = None) -> Name:
    """The delta-name of a rational point: exactly the balls containing q."""
    q = as_vector(q)
    space = space or euclidean_space(len(q))
    if len(q) != space.dim:
        raise ContractViolation(f"point of dimension {len(q)} in {space.label}")
    box = point_box(q)

    def steps() -> Batches:
        def forever():
            while True:
                yield box

        return enclosure_steps(space, forever())

    return Name(Discipline.POINT, space, steps, label=f"point {_fmt(q)}", point=q)


def point_from_enclosures(space, enclose: Callable[[int], Box | None], label: str = "") -> Name:
    """A point name from ``enclose(t)``, an enclosure for each step t >= 1."""

    def steps() -> Batches:
        def gen():
            t = 0
            while True:
                t += 1
                yield enclose(t)

        return enclosure_steps(space, gen())

    return Name(Discipline.POINT, space, steps, label=label)


def _fmt(q: Vector) -> str:
    return "(" + ",".join(str(c) for c in q) + ")"


# -- Cauchy representation ------------------------------------------------------------------


class CauchyName:
    """``#w0#w1#...`` with ``|x - w_i| < 2^-i``; ``approx(i)`` supplies w_i."""

    def __init__(self, dim: int, approx: Callable[[int], Vector]):
        self.dim = dim
        self._approx = approx
        self._cache: list[Vector] = []

    def approximant(self, i: int) -> Vector:
        while len(self._cache) <= i:
            v = as_vector(self._approx(len(self._cache)))
            if len(v) != self.dim:
                raise ContractViolation("approximant of the wrong dimension")
            self._cache.append(v)
        return self._cache[i]

    def text(self, count: int) -> str:
        return "".join("#" + tuple_word(rat_encode(c) for c in self.approximant(i)) for i in range(count))

    def prefix(self, budget: int) -> str:
        """The first ``budget`` symbols of the infinite word."""
        count = 1
        while len(self.text(count)) < budget:
            count += 1
        return self.text(count)[:budget]

    @classmethod
    def of_rational(cls, q) -> "CauchyName":
        q = as_vector(q)
        return cls(len(q), lambda i: q)

    @classmethod
    def parse(cls, text: str) -> "CauchyName":
        check_word(text)
        if not text.startswith("#"):
            raise InvalidCode("a Cauchy name starts with '#'")
        parts = [tuple(rat_decode(p) for p in untuple(chunk)) for chunk in text[1:].split("#")]
        if not parts or len({len(p) for p in parts}) != 1:
            raise InvalidCode("inconsistent Cauchy approximants")

        def approx(i: int) -> Vector:
            if i >= len(parts):
                raise ContractViolation("finite Cauchy prefix exhausted")
            return parts[i]

        return cls(len(parts[0]), approx)


def cauchy_to_delta(c: CauchyName, space: EuclideanSpace | None = None) -> Name:
    """List a ball once some approximant certifies it: the box of radius 2^-i
    around w_i lies inside the ball."""
    space = space or euclidean_space(c.dim)

    def enclose(t: int) -> Box:
        # read just past the finest level the emitter may use at step t
        i = local_rate(t) + 2
        r = Fraction(1, 1 << i)
        return tuple(Interval(a - r, a + r) for a in c.approximant(i))

    return point_from_enclosures(space, enclose, label="cauchy->delta")


def delta_to_cauchy(d: Name, max_budget: int = 1_000_000) -> CauchyName:
    """w_i is the center of a listed ball of radius < 2^-(i+1)."""
    space = d.space

    def approx(i: int) -> Vector:
        if d.point is not None:
            return as_vector(d.point)
        limit = Fraction(1, 1 << (i + 1))
        budget = 8
        while True:
            for w in d.query(budget):
                b = space.ball(w)
                if b.radius < limit:
                    return b.center
            if budget >= max_budget:
                raise ContractViolation("name too coarse within the budget cap")
            budget = min(2 * budget, max_budget)

    return CauchyName(space.dim, approx)


# -- map transducers --------------------------------------------------------------------------


def silent_name(space, label: str = "diverges") -> Name:
    """A point name that never lists anything (divergence off a domain)."""
    return Name(Discipline.POINT, space, lambda: iter(lambda: [], None), label=label)


def image_of_point(f: M.Map, q, target: EuclideanSpace | None = None) -> Name:
    """The name of f(q) for a rational q: exact when rational, else refined enclosures."""
    target = target or euclidean_space(f.dim_out)
    q = as_vector(q)
    if not f.in_domain(q):
        return silent_name(target)
    img = f.exact(q)
    if img is not None:
        return point_from_rational(img, target)
    return point_from_enclosures(target, lambda t: f.enclose(q, 8 + local_rate(t)), label="image")


def map_name(f: M.Map, n: Name, target: EuclideanSpace | None = None) -> Name:
    """Realize a closed-form map on point names.

    Rational tagged inputs use the exact image when it is rational and an
    enclosure of the formula at the input point otherwise; general inputs are
    refined through the enclosures read off their listed words.  Inputs off
    the domain yield a name that never lists anything.
    """
    target = target or euclidean_space(f.dim_out)
    if n.point is not None:
        return image_of_point(f, n.point, target)

    def steps() -> Batches:
        def gen():
            t = 0
            for E in name_boxes(n):
                t += 1
                if E is None or f.domain(E) is not True:
                    yield None
                else:
                    yield f.eval_box(E, 8 + local_rate(t))

        return enclosure_steps(target, gen())

    return Name(Discipline.POINT, target, steps, label="image")


def map_translator(f: M.Map, source=None, target=None) -> Translator:
    source = source or euclidean_space(f.dim_in)
    target = target or euclidean_space(f.dim_out)

    def point_map(q):
        q = as_vector(q)
        return f.exact(q) if f.in_domain(q) else None

    return Translator(
        Discipline.POINT,
        Discipline.POINT,
        lambda n: map_name(f, n, target).batches(),
        source,
        target,
        label=f.kind,
        point_map=point_map,
    )


def ball_homeo(n: int = 1) -> tuple[Translator, Translator]:
    """h: B(0,1) -> R^n and its inverse, as translators between point names."""
    h, hinv = M.unit_ball_maps(n)
    return map_translator(h), map_translator(hinv)


def translation(a) -> Translator:
    return map_translator(M.Translation(as_vector(a)))


def scaling(eps, n: int = 1) -> Translator:
    return map_translator(M.Scaling(eps, n))


def h_w(w: RationalBall) -> Translator:
    return map_translator(M.BallToSpace(w))


def stereographic(r: int, n: int) -> tuple[Translator, Translator]:
    """s_r and its inverse between R^{n+1} (sphere points) and R^n."""
    return map_translator(M.Stereographic(r, n)), map_translator(M.InverseStereographic(r, n))


# -- regions used by subspaces ----------------------------------------------------------------


def on_sphere(x) -> bool:
    x = as_vector(x)
    return sum((c * c for c in x), Fraction(0)) == 1


def in_ball(b: RationalBall) -> Callable[[Vector], bool]:
    return lambda x: b.contains(as_vector(x))


def ball_of(w: str) -> RationalBall:
    return mu_decode(w)


def dist_vec2(a, b) -> Fraction:
    return dist2(as_vector(a), as_vector(b))


# -- the unit-interval subbase of R ----------------------------------------------------------


class UnitIntervals(PredicateSpace):
    """lambda(w) = (q, q + 1) for q = nu_Q(w): a point-separating subbase of R
    whose induced space is equivalent to R."""

    label = "unit-intervals"

    def dom(self, w):
        return rat_dom(w)

    def words(self):
        k = 0
        while True:
            yield rat_encode(rational(k))
            k += 1

    def interval(self, w: str) -> Interval:
        q = rat_decode(w)
        return Interval(q, q + 1)

    def member(self, x, w):
        iv = self.interval(w)
        return iv.lo < as_vector(x)[0] < iv.hi

    def subset(self, u, v):
        return u == v

    def disjoint(self, u, v):
        return abs(rat_decode(u) - rat_decode(v)) >= 1

    def point_name(self, x):
        return to_unit_intervals(point_from_rational(as_vector(x), euclidean_space(1)), self)


def to_unit_intervals(n: Name, z: UnitIntervals) -> Name:
    """delta^1 -> delta_Z: list q once an enclosure lies inside (q, q + 1).

    Candidates arrive one per step; an undecided candidate is retried until
    an enclosure settles it, at most 16 retries per step.
    """

    def steps() -> Batches:
        cands = z.words()
        pending: deque[str] = deque()
        for E in name_boxes(n):
            pending.append(next(cands))
            batch = []
            if E is not None:
                x = E[0]
                for _ in range(min(16, len(pending))):
                    w = pending.popleft()
                    iv = z.interval(w)
                    if iv.lo < x.lo and x.hi < iv.hi:
                        batch.append(w)
                    elif x.lo < iv.hi and iv.lo < x.hi:
                        pending.append(w)
            yield batch

    return Name(Discipline.POINT, z, steps, label="unit intervals", point=n.point)


def from_unit_intervals(n: Name) -> Name:
    """delta_T(Z) -> delta^1: enclosures are the meets of the listed intervals."""
    space: InducedSpace = n.space
    z: UnitIntervals = space.z
    target = euclidean_space(1)

    def steps() -> Batches:
        def gen():
            E = None
            for batch in n.batches():
                for w in batch:
                    for m in untuple(w):
                        iv = (z.interval(m),)
                        E = iv if E is None else (box_meet(E, iv) or E)
                yield E

        return enclosure_steps(target, gen())

    return Name(Discipline.POINT, target, steps, label="from unit intervals", point=n.point)


def unit_interval_space() -> InducedSpace:
    return InducedSpace(UnitIntervals())


def unit_interval_translators(space: InducedSpace) -> tuple[Translator, Translator]:
    """(delta^1 -> delta_T(Z), delta_T(Z) -> delta^1) for the unit-interval space."""
    from .espace import apply_z_to_t

    R = euclidean_space(1)
    there = Translator(
        Discipline.POINT,
        Discipline.POINT,
        lambda n: apply_z_to_t(to_unit_intervals(n, space.z), space).batches(),
        R,
        space,
        "R->T(Z)",
        point_map=lambda x: x,
    )
    back = Translator(
        Discipline.POINT,
        Discipline.POINT,
        lambda n: from_unit_intervals(n).batches(),
        space,
        R,
        "T(Z)->R",
        point_map=lambda x: x,
    )
    return there, back
