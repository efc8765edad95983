"""Exact rational interval arithmetic with outward dyadic rounding.

Nonlinear operations take a precision ``prec`` (bits) and round their
result outward to multiples of ``2**-prec`` so that denominators stay
bounded while enclosures remain certified.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def floor_dyadic(q: Fraction, prec: int) -> Fraction:
    s = 1 << prec
    return Fraction((q.numerator * s) // q.denominator, s)


def ceil_dyadic(q: Fraction, prec: int) -> Fraction:
    s = 1 << prec
    return Fraction(-((-q.numerator * s) // q.denominator), s)


def sqrt_lower(q: Fraction, prec: int) -> Fraction:
    if q <= 0:
        return ZERO
    s = 1 << (2 * prec)
    return Fraction(isqrt((q.numerator * s) // q.denominator), 1 << prec)


def sqrt_upper(q: Fraction, prec: int) -> Fraction:
    if q <= 0:
        return ZERO
    s = 1 << (2 * prec)
    m = -((-q.numerator * s) // q.denominator)
    r = isqrt(m)
    if r * r < m:
        r += 1
    return Fraction(r, 1 << prec)


def ratio_sign(a: Fraction) -> int:
    return (a > 0) - (a < 0)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, o):
        if not isinstance(o, Interval):
            o = Fraction(o)
            return Interval(self.lo + o, self.hi + o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        if not isinstance(o, Interval):
            o = Fraction(o)
            return Interval(self.lo - o, self.hi - o)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Interval):
            o = Fraction(o)
            a, b = self.lo * o, self.hi * o
            return Interval(min(a, b), max(a, b))
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def sqr(self):
        a, b = self.lo * self.lo, self.hi * self.hi
        if self.lo <= 0 <= self.hi:
            return Interval(ZERO, max(a, b))
        return Interval(min(a, b), max(a, b))

    def round(self, prec: int) -> "Interval":
        return Interval(floor_dyadic(self.lo, prec), ceil_dyadic(self.hi, prec))

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def strictly_negative(self) -> bool:
        return self.hi < 0

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def recip(self, prec: int) -> "Interval | None":
        if not self.excludes_zero():
            return None
        return Interval(floor_dyadic(1 / self.hi, prec), ceil_dyadic(1 / self.lo, prec))

    def div(self, o: "Interval", prec: int) -> "Interval | None":
        if not o.excludes_zero():
            return None
        if o.lo == o.hi:
            return (self * (1 / o.lo)).round(prec)
        r = o.recip(prec + 4)
        return (self * r).round(prec)

    def sqrt(self, prec: int) -> "Interval | None":
        if self.lo < 0:
            return None
        return Interval(sqrt_lower(self.lo, prec), sqrt_upper(self.hi, prec))

    def meet(self, o: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, o.lo), min(self.hi, o.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def hull(self, o: "Interval") -> "Interval":
        return Interval(min(self.lo, o.lo), max(self.hi, o.hi))


Box = tuple  # tuple[Interval, ...]


def point_box(q: Sequence) -> Box:
    return tuple(Interval(Fraction(c)) for c in q)


def box_from_ball(center: Sequence[Fraction], radius: Fraction) -> Box:
    return tuple(Interval(c - radius, c + radius) for c in center)


def norm2(box: Box) -> Interval:
    total = Interval(ZERO)
    for iv in box:
        total = total + iv.sqr()
    return total


def box_mid(box: Box) -> tuple[Fraction, ...]:
    return tuple(iv.mid for iv in box)


def box_width(box: Box) -> Fraction:
    return max(iv.width for iv in box)


def box_round(box: Box, prec: int) -> Box:
    return tuple(iv.round(prec) for iv in box)


def box_meet(a: Box, b: Box) -> Box | None:
    out = []
    for x, y in zip(a, b):
        m = x.meet(y)
        if m is None:
            return None
        out.append(m)
    return tuple(out)


def box_hull(a: Box, b: Box) -> Box:
    return tuple(x.hull(y) for x, y in zip(a, b))


def split_box(box: Box) -> tuple[Box, Box]:
    k = max(range(len(box)), key=lambda i: box[i].width)
    iv = box[k]
    m = iv.mid
    left = box[:k] + (Interval(iv.lo, m),) + box[k + 1 :]
    right = box[:k] + (Interval(m, iv.hi),) + box[k + 1 :]
    return left, right


def far_dist2(box: Box, center: Sequence[Fraction]) -> Fraction:
    """Squared distance from ``center`` to the farthest point of ``box``."""
    total = ZERO
    for iv, c in zip(box, center):
        a, b = iv.lo - c, iv.hi - c
        total += max(a * a, b * b)
    return total


def near_dist2(box: Box, center: Sequence[Fraction]) -> Fraction:
    """Squared distance from ``center`` to the nearest point of ``box``."""
    total = ZERO
    for iv, c in zip(box, center):
        if c < iv.lo:
            d = iv.lo - c
        elif c > iv.hi:
            d = c - iv.hi
        else:
            continue
        total += d * d
    return total


def box_inside_ball(box: Box, center: Sequence[Fraction], radius: Fraction) -> bool:
    """Closed box inside the open ball."""
    return far_dist2(box, center) < radius * radius


def box_outside_ball(box: Box, center: Sequence[Fraction], radius: Fraction) -> bool:
    """Closed box disjoint from the open ball."""
    return near_dist2(box, center) >= radius * radius


def box_radius_bound(box: Box, prec: int) -> Fraction:
    """An upper bound on the distance from the midpoint to any corner."""
    h2 = sum(((iv.width / 2) ** 2 for iv in box), ZERO)
    return sqrt_upper(h2, prec)
