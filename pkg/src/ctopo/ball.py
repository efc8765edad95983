"""Rational balls: the atoms of every base notation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .interval import Box, Interval
from .words import InvalidCode, rat_decode, rat_encode, tuple_word, untuple


@dataclass(frozen=True)
class RationalBall:
    center: tuple[Fraction, ...]
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(Fraction(c) for c in self.center))
        object.__setattr__(self, "radius", Fraction(self.radius))
        if not self.center:
            raise ValueError("a ball needs dimension >= 1")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, q: Sequence) -> bool:
        d2 = sum(((Fraction(a) - c) ** 2 for a, c in zip(q, self.center)), Fraction(0))
        return d2 < self.radius * self.radius

    def closure_contains(self, q: Sequence) -> bool:
        d2 = sum(((Fraction(a) - c) ** 2 for a, c in zip(q, self.center)), Fraction(0))
        return d2 <= self.radius * self.radius

    def box(self) -> Box:
        return tuple(Interval(c - self.radius, c + self.radius) for c in self.center)

    def literal(self) -> str:
        return format_ball(self)

    def code(self) -> str:
        return mu_encode(self)


def dist2(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum(((x - y) ** 2 for x, y in zip(a, b)), Fraction(0))


def ball_subset(inner: RationalBall, outer: RationalBall) -> bool:
    if inner.dim != outer.dim:
        raise ValueError("dimension mismatch")
    slack = outer.radius - inner.radius
    if slack < 0:
        return False
    return dist2(inner.center, outer.center) <= slack * slack


def ball_disjoint(u: RationalBall, v: RationalBall) -> bool:
    if u.dim != v.dim:
        raise ValueError("dimension mismatch")
    s = u.radius + v.radius
    return dist2(u.center, v.center) >= s * s


# -- codec -----------------------------------------------------------------------


def mu_encode(b: RationalBall) -> str:
    return tuple_word([rat_encode(c) for c in b.center] + [rat_encode(b.radius)])


@lru_cache(maxsize=500_000)
def mu_decode(w: str) -> RationalBall:
    parts = untuple(w)
    if len(parts) < 2:
        raise InvalidCode(f"not a ball code: {w!r}")
    vals = [rat_decode(p) for p in parts]
    if vals[-1] <= 0:
        raise InvalidCode(f"non-positive radius in {w!r}")
    return RationalBall(tuple(vals[:-1]), vals[-1])


def mu_dom(w: str, n: int | None = None) -> bool:
    try:
        b = mu_decode(w)
    except InvalidCode:
        return False
    return n is None or b.dim == n


# -- literal grammar -------------------------------------------------------------

_LIT = re.compile(r"\s*B\(\s*([^;()]*)\s*;\s*([^;()]*)\s*\)\s*")


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidCode(f"not a rational: {s!r}") from exc


def parse_vector(s: str) -> tuple[Fraction, ...]:
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise InvalidCode("empty vector")
    return tuple(parse_rational(p) for p in s.split(","))


def parse_ball(s: str) -> RationalBall:
    m = _LIT.fullmatch(s)
    if m is None:
        raise InvalidCode(f"not a ball literal: {s!r}")
    center = parse_vector(m.group(1))
    radius = parse_rational(m.group(2))
    if radius <= 0:
        raise InvalidCode(f"non-positive radius in {s!r}")
    return RationalBall(center, radius)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def format_ball(b: RationalBall) -> str:
    return "B(" + ",".join(format_rational(c) for c in b.center) + ";" + format_rational(b.radius) + ")"
