"""Closed-form map families used by charts, transitions and decisions.

Every map knows three things:

* ``eval_box(box, prec)``: an interval enclosure of the formula on a box,
  valid for the points of the box that lie in the map's domain (``None`` when
  the formula cannot be enclosed, e.g. a denominator interval meets zero);
* ``domain(box)``: ``True`` if the box lies inside the declared domain,
  ``False`` if it lies entirely outside, ``None`` otherwise;
* ``exact(q)``: the exact rational image of a rational point, or ``None``
  when the image is irrational or ``q`` is off the domain.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

from .ball import RationalBall
from .interval import Box, Interval, box_inside_ball, box_outside_ball, norm2

Point = tuple  # tuple[Fraction, ...]


def exact_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _pbox(q: Sequence) -> Box:
    return tuple(Interval(Fraction(c)) for c in q)


def _and(a: bool | None, b: bool | None) -> bool | None:
    if a is False or b is False:
        return False
    if a is True and b is True:
        return True
    return None


class Map:
    kind = "abstract"
    dim_in = 0
    dim_out = 0

    def eval_box(self, box: Box, prec: int) -> Box | None:
        raise NotImplementedError

    def domain(self, box: Box) -> bool | None:
        return True

    def exact(self, q: Point) -> Point | None:
        return None

    def in_domain(self, q: Point) -> bool:
        return self.domain(_pbox(q)) is True

    def enclose(self, q: Point, prec: int) -> Box | None:
        return self.eval_box(_pbox(q), prec)

    def then(self, other: "Map") -> "Map":
        return Composition([self, other])

    def __repr__(self) -> str:
        return f"<{self.kind} {self.dim_in}->{self.dim_out}>"


class Identity(Map):
    kind = "identity"

    def __init__(self, n: int):
        self.dim_in = self.dim_out = n

    def eval_box(self, box, prec):
        return box

    def exact(self, q):
        return tuple(Fraction(c) for c in q)


class Translation(Map):
    """T_a(x) = x - a."""

    kind = "translation"

    def __init__(self, a: Sequence):
        self.a = tuple(Fraction(c) for c in a)
        self.dim_in = self.dim_out = len(self.a)

    def eval_box(self, box, prec):
        return tuple(iv - c for iv, c in zip(box, self.a))

    def exact(self, q):
        return tuple(Fraction(x) - c for x, c in zip(q, self.a))


class Scaling(Map):
    """S_eps(x) = eps x."""

    kind = "scaling"

    def __init__(self, eps, n: int):
        self.eps = Fraction(eps)
        if self.eps <= 0:
            raise ValueError("scaling factor must be positive")
        self.dim_in = self.dim_out = n

    def eval_box(self, box, prec):
        return tuple(iv * self.eps for iv in box)

    def exact(self, q):
        return tuple(Fraction(x) * self.eps for x in q)


def _h_interval(box: Box, prec: int) -> Box | None:
    """h(y) = y / (1 - |y|^2) on a box."""
    if len(box) == 1:
        iv = box[0]
        # monotone increasing on (-1, 1): evaluate the endpoints
        if iv.lo <= -1 or iv.hi >= 1:
            return None
        lo = Interval(iv.lo).div(1 - Interval(iv.lo).sqr(), prec)
        hi = Interval(iv.hi).div(1 - Interval(iv.hi).sqr(), prec)
        return (Interval(lo.lo, hi.hi),)
    d = 1 - norm2(box)
    if not d.strictly_positive():
        return None
    return tuple(iv.div(d, prec) for iv in box)


def _hinv_interval(box: Box, prec: int) -> Box:
    """h^-1(y) = 2y / (1 + sqrt(1 + 4|y|^2))."""
    if len(box) == 1:
        iv = box[0]
        ends = []
        for e in (iv.lo, iv.hi):
            pt = Interval(e)
            root = (1 + 4 * pt.sqr()).sqrt(prec + 4)
            ends.append((2 * pt).div(1 + root, prec))
        return (Interval(ends[0].lo, ends[1].hi),)
    root = (1 + 4 * norm2(box)).sqrt(prec + 4)
    den = 1 + root
    return tuple((2 * iv).div(den, prec) for iv in box)


class BallToSpace(Map):
    """h_w = h o S_{1/eps} o T_q for the ball w = B(q, eps); h_w maps w onto R^n."""

    kind = "ball-to-space"

    def __init__(self, w: RationalBall):
        self.w = w
        self.dim_in = self.dim_out = w.dim

    def _normalize(self, box: Box) -> Box:
        inv = 1 / self.w.radius
        return tuple((iv - c) * inv for iv, c in zip(box, self.w.center))

    def domain(self, box):
        n2 = norm2(self._normalize(box))
        if n2.hi < 1:
            return True
        if n2.lo >= 1:
            return False
        return None

    def eval_box(self, box, prec):
        return _h_interval(self._normalize(box), prec)

    def exact(self, q):
        y = tuple((Fraction(x) - c) / self.w.radius for x, c in zip(q, self.w.center))
        d = 1 - sum((c * c for c in y), Fraction(0))
        if d <= 0:
            return None
        return tuple(c / d for c in y)


class SpaceToBall(Map):
    """h_w^-1 = T_{-q} o S_eps o h^-1."""

    kind = "space-to-ball"

    def __init__(self, w: RationalBall):
        self.w = w
        self.dim_in = self.dim_out = w.dim

    def eval_box(self, box, prec):
        y = _hinv_interval(box, prec)
        return tuple(iv * self.w.radius + c for iv, c in zip(y, self.w.center))

    def exact(self, q):
        q = tuple(Fraction(x) for x in q)
        root = exact_sqrt(1 + 4 * sum((c * c for c in q), Fraction(0)))
        if root is None:
            return None
        return tuple(2 * c / (1 + root) * self.w.radius + o for c, o in zip(q, self.w.center))


def ball_homeo() -> tuple[Map, Map]:
    """The pair h: B(0,1) -> R^n and its inverse, for n = 1 by default."""
    return unit_ball_maps(1)


def unit_ball_maps(n: int) -> tuple[Map, Map]:
    w = RationalBall((0,) * n, 1)
    return BallToSpace(w), SpaceToBall(w)


class Stereographic(Map):
    """s_r(x, t) = x / (1 - r t) from S^n minus the pole (0,...,0,r)."""

    kind = "stereographic"

    def __init__(self, r: int, n: int):
        if r not in (1, -1):
            raise ValueError("pole must be +1 or -1")
        self.r = r
        self.dim_in = n + 1
        self.dim_out = n

    def _den(self, box):
        return 1 - box[-1] * self.r

    def domain(self, box):
        d = self._den(box)
        if d.lo > 0:
            return True
        if d.hi <= 0:
            return False
        return None

    def eval_box(self, box, prec):
        d = self._den(box)
        if not d.strictly_positive():
            return None
        return tuple(iv.div(d, prec) for iv in box[:-1])

    def exact(self, q):
        q = tuple(Fraction(c) for c in q)
        d = 1 - self.r * q[-1]
        if d <= 0:
            return None
        return tuple(c / d for c in q[:-1])


class InverseStereographic(Map):
    """s_r^-1(y) = (2y, r(|y|^2 - 1)) / (|y|^2 + 1)."""

    kind = "inverse-stereographic"

    def __init__(self, r: int, n: int):
        self.r = r
        self.dim_in = n
        self.dim_out = n + 1

    def eval_box(self, box, prec):
        if len(box) == 1:
            return self._eval_1d(box[0], prec)
        n2 = norm2(box)
        den = n2 + 1
        out = [(2 * iv).div(den, prec) for iv in box]
        # r (|y|^2 - 1)/(|y|^2 + 1) = r (1 - 2/(|y|^2 + 1)) is monotone in |y|^2
        t = 1 - 2 * Interval(1).div(den, prec + 2)
        t = t.round(prec)
        out.append(t * self.r)
        return tuple(out)

    def _eval_1d(self, iv, prec):
        # 2y/(y^2+1) increases on [-1, 1] and decreases outside
        def f(y):
            p = Interval(y)
            return (2 * p).div(p.sqr() + 1, prec)

        cands = [f(iv.lo), f(iv.hi)]
        lo = min(c.lo for c in cands)
        hi = max(c.hi for c in cands)
        if iv.contains(1):
            hi = Fraction(1)
        if iv.contains(-1):
            lo = Fraction(-1)
        n2 = iv.sqr()
        t = 1 - 2 * Interval(1).div(n2 + 1, prec + 2)
        return (Interval(lo, hi), t.round(prec) * self.r)

    def exact(self, q):
        q = tuple(Fraction(c) for c in q)
        n2 = sum((c * c for c in q), Fraction(0))
        return tuple(2 * c / (n2 + 1) for c in q) + (self.r * (n2 - 1) / (n2 + 1),)


CIRCLE_CHARTS = ("f+", "f-", "g+", "g-")


class CircleHalfChart(Map):
    """f_{+/-}(x,y) = x on y >< 0;  g_{+/-}(x,y) = y on x >< 0."""

    kind = "circle-half-chart"
    dim_in = 2
    dim_out = 1

    def __init__(self, which: str):
        if which not in CIRCLE_CHARTS:
            raise ValueError(f"unknown half chart {which!r}")
        self.which = which
        self.keep = 0 if which[0] == "f" else 1
        self.sign = 1 if which[1] == "+" else -1

    def domain(self, box):
        iv = box[1 - self.keep] * self.sign
        if iv.lo > 0:
            return True
        if iv.hi <= 0:
            return False
        return None

    def eval_box(self, box, prec):
        return (box[self.keep],)

    def exact(self, q):
        q = tuple(Fraction(c) for c in q)
        if q[1 - self.keep] * self.sign <= 0:
            return None
        return (q[self.keep],)

    def inverse(self) -> "CircleHalfChartInverse":
        return CircleHalfChartInverse(self.which)


class CircleHalfChartInverse(Map):
    kind = "circle-half-chart-inverse"
    dim_in = 1
    dim_out = 2

    def __init__(self, which: str):
        self.which = which
        self.keep = 0 if which[0] == "f" else 1
        self.sign = 1 if which[1] == "+" else -1

    def domain(self, box):
        iv = box[0]
        if -1 < iv.lo and iv.hi < 1:
            return True
        if iv.hi <= -1 or iv.lo >= 1:
            return False
        return None

    def eval_box(self, box, prec):
        t = box[0]
        s = 1 - t.sqr()
        if s.hi < 0:
            return None
        root = Interval(max(s.lo, Fraction(0)), s.hi).sqrt(prec)
        other = root * self.sign
        return (t, other) if self.keep == 0 else (other, t)

    def exact(self, q):
        t = Fraction(q[0])
        if not -1 < t < 1:
            return None
        root = exact_sqrt(1 - t * t)
        if root is None:
            return None
        other = root * self.sign
        return (t, other) if self.keep == 0 else (other, t)


class ProjectiveChart(Map):
    """phi_i[x_1 : ... : x_{n+1}] = (x_j / x_i)_{j != i}, on representatives; i is 1-based."""

    kind = "projective-chart"

    def __init__(self, i: int, n: int):
        if not 1 <= i <= n + 1:
            raise ValueError("chart index out of range")
        self.i = i
        self.dim_in = n + 1
        self.dim_out = n

    def domain(self, box):
        iv = box[self.i - 1]
        if iv.excludes_zero():
            return True
        if iv.lo == iv.hi == 0:
            return False
        return None

    def eval_box(self, box, prec):
        d = box[self.i - 1]
        if not d.excludes_zero():
            return None
        return tuple(iv.div(d, prec) for k, iv in enumerate(box) if k != self.i - 1)

    def exact(self, q):
        q = tuple(Fraction(c) for c in q)
        d = q[self.i - 1]
        if d == 0:
            return None
        return tuple(c / d for k, c in enumerate(q) if k != self.i - 1)


class ProjectiveChartInverse(Map):
    kind = "projective-chart-inverse"

    def __init__(self, i: int, n: int):
        self.i = i
        self.dim_in = n
        self.dim_out = n + 1

    def eval_box(self, box, prec):
        return tuple(box[: self.i - 1]) + (Interval(1),) + tuple(box[self.i - 1 :])

    def exact(self, q):
        q = tuple(Fraction(c) for c in q)
        return q[: self.i - 1] + (Fraction(1),) + q[self.i - 1 :]


class Composition(Map):
    kind = "composition"

    def __init__(self, maps: Sequence[Map]):
        flat: list[Map] = []
        for m in maps:
            flat.extend(m.maps if isinstance(m, Composition) else [m])
        if not flat:
            raise ValueError("empty composition")
        for a, b in zip(flat, flat[1:]):
            if a.dim_out != b.dim_in:
                raise ValueError(f"dimension mismatch composing {a} then {b}")
        self.maps = flat
        self.dim_in = flat[0].dim_in
        self.dim_out = flat[-1].dim_out

    def eval_box(self, box, prec):
        for m in self.maps:
            box = m.eval_box(box, prec)
            if box is None:
                return None
        return box

    def domain(self, box):
        status: bool | None = True
        for m in self.maps:
            st = m.domain(box)
            status = _and(status, st)
            if status is False:
                return False
            box = m.eval_box(box, 64)
            if box is None:
                return None if status is not False else False
        return status

    def exact(self, q):
        for m in self.maps:
            if not m.in_domain(q):
                return None
            q = m.exact(q)
            if q is None:
                return None
        return q

    def in_domain(self, q):
        for m in self.maps:
            if not m.in_domain(q):
                return False
            q2 = m.exact(q)
            if q2 is None:
                # irrational intermediate point: fall back to interval status
                return self.domain(_pbox(q)) is True
            q = q2
        return True


class Product(Map):
    """(f x g)(x, y) = (f(x), g(y)) on concatenated coordinates."""

    kind = "product"

    def __init__(self, f: Map, g: Map):
        self.f, self.g = f, g
        self.dim_in = f.dim_in + g.dim_in
        self.dim_out = f.dim_out + g.dim_out

    def _split(self, v):
        return v[: self.f.dim_in], v[self.f.dim_in :]

    def eval_box(self, box, prec):
        a, b = self._split(box)
        fa, gb = self.f.eval_box(a, prec), self.g.eval_box(b, prec)
        if fa is None or gb is None:
            return None
        return tuple(fa) + tuple(gb)

    def domain(self, box):
        a, b = self._split(box)
        return _and(self.f.domain(a), self.g.domain(b))

    def exact(self, q):
        a, b = self._split(tuple(q))
        if not (self.f.in_domain(a) and self.g.in_domain(b)):
            return None
        fa, gb = self.f.exact(a), self.g.exact(b)
        if fa is None or gb is None:
            return None
        return tuple(fa) + tuple(gb)

    def in_domain(self, q):
        a, b = self._split(tuple(q))
        return self.f.in_domain(a) and self.g.in_domain(b)


class TorusEmbedding(Map):
    """(x_u, y_u, x_v, y_v) -> ((2 + y_v) y_u, (2 + y_v) x_u, x_v)."""

    kind = "torus-embedding"
    dim_in = 4
    dim_out = 3

    def eval_box(self, box, prec):
        xu, yu, xv, yv = box
        s = yv + 2
        return (s * yu, s * xu, xv)

    def exact(self, q):
        xu, yu, xv, yv = (Fraction(c) for c in q)
        s = 2 + yv
        return (s * yu, s * xu, xv)


class TorusEmbeddingInverse(Map):
    """(X, Y, Z) -> (Y/rho, X/rho, Z, rho - 2) with rho = sqrt(X^2 + Y^2)."""

    kind = "torus-embedding-inverse"
    dim_in = 3
    dim_out = 4

    def domain(self, box):
        rho2 = box[0].sqr() + box[1].sqr()
        if rho2.lo > 0:
            return True
        if rho2.hi == 0:
            return False
        return None

    def eval_box(self, box, prec):
        X, Y, Z = box
        rho = (X.sqr() + Y.sqr()).sqrt(prec + 4)
        if rho is None or not rho.strictly_positive():
            return None
        return (Y.div(rho, prec), X.div(rho, prec), Z, (rho - 2).round(prec))

    def exact(self, q):
        X, Y, Z = (Fraction(c) for c in q)
        rho = exact_sqrt(X * X + Y * Y)
        if rho is None or rho == 0:
            return None
        return (Y / rho, X / rho, Z, rho - 2)


class TwoOriginsChart(Map):
    """Charts of the line with two origins, carried in R^2 as {(s,0)} plus (0,1).

    ``f`` is defined on all (s, 0); ``f'`` on (s, 0) with s != 0 and on the
    second origin (0, 1).  Both send a point to its first coordinate.
    """

    kind = "two-origins-chart"
    dim_in = 2
    dim_out = 1

    def __init__(self, primed: bool):
        self.primed = primed

    def domain(self, box):
        s, t = box
        on_line = t.lo == t.hi == 0
        if not self.primed:
            if on_line:
                return True
            if t.excludes_zero():
                return False
            return None
        if on_line:
            if s.excludes_zero():
                return True
            if s.lo == s.hi == 0:
                return False
            return None
        if s.lo == s.hi == 0 and t.lo == t.hi == 1:
            return True
        if t.excludes_zero() and not t.contains(1):
            return False
        return None

    def eval_box(self, box, prec):
        return (box[0],)

    def exact(self, q):
        if not self.in_domain(q):
            return None
        return (Fraction(q[0]),)


class TwoOriginsChartInverse(Map):
    kind = "two-origins-chart-inverse"
    dim_in = 1
    dim_out = 2

    def __init__(self, primed: bool):
        self.primed = primed

    def eval_box(self, box, prec):
        s = box[0]
        if not self.primed or s.excludes_zero():
            return (s, Interval(0))
        if s.lo == s.hi == 0:
            return (s, Interval(1))
        return (s, Interval(0, 1))

    def exact(self, q):
        s = Fraction(q[0])
        if self.primed and s == 0:
            return (s, Fraction(1))
        return (s, Fraction(0))


class ShiftByName(Map):
    """x -> x + a for a real a known only through a point name (the shifted line)."""

    kind = "shift-by-name"
    dim_in = dim_out = 1

    def __init__(self, a_name, sign: int = 1):
        self.a_name = a_name
        self.sign = sign

    def eval_box(self, box, prec):
        from .euclid import enclosure_at  # local: euclid builds on this module

        enc = enclosure_at(self.a_name, prec)
        if enc is None:
            return None
        return (box[0] + enc[0] * self.sign,)

    def exact(self, q):
        a = self.a_name.point
        if a is None:
            return None
        a = a[0] if isinstance(a, tuple) else Fraction(a)
        return (Fraction(q[0]) + a * self.sign,)


class RestrictedMap(Map):
    """A map restricted to the preimage of an open rational ball."""

    kind = "restricted"

    def __init__(self, base: Map, ball: RationalBall):
        self.base = base
        self.ball = ball
        self.dim_in = base.dim_in
        self.dim_out = base.dim_out

    def domain(self, box):
        st = self.base.domain(box)
        if st is False:
            return False
        img = self.base.eval_box(box, 64)
        if img is None:
            return None if st is None else None
        if box_inside_ball(img, self.ball.center, self.ball.radius):
            inside: bool | None = True
        elif box_outside_ball(img, self.ball.center, self.ball.radius):
            inside = False
        else:
            inside = None
        return _and(st, inside)

    def eval_box(self, box, prec):
        return self.base.eval_box(box, prec)

    def exact(self, q):
        if not self.base.in_domain(q):
            return None
        img = self.base.exact(q)
        if img is None or not self.ball.contains(img):
            return None
        return img

    def in_domain(self, q):
        if not self.base.in_domain(q):
            return False
        img = self.base.exact(q)
        if img is not None:
            return self.ball.contains(img)
        return self.domain(_pbox(q)) is True
