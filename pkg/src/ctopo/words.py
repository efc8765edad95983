"""Symbol-level encodings: the alphabet, wrapping, tupling and the
canonical notations of naturals, rationals and finite sets.

Words are plain ``str`` values over ``SIGMA``.  A wrapped word
``wrap(a1...ak)`` is ``11 0a1 0a2 ... 0ak 011``; inside a wrapping the pair
``11`` only occurs at the two ends, which is what makes scanning unambiguous
and nesting safe.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

SIGMA = frozenset("01-/#")


class InvalidCode(ValueError):
    """Raised when a word is outside the domain of a notation."""


def is_word(w: str) -> bool:
    return all(ch in SIGMA for ch in w)


def check_word(w: str) -> str:
    if not isinstance(w, str) or not is_word(w):
        raise InvalidCode(f"not a word over the alphabet: {w!r}")
    return w


def wrap(u: str) -> str:
    if not u:
        return "11011"
    return "110" + "0".join(u) + "011"


# a block body is a run of 0-escaped symbols; the lazy repetition stops at the
# first escaped "1" followed by "1", exactly the closing marker
_BLOCK = re.compile(r"11((?:0.)*?)011", re.DOTALL)


def _parse_block(w: str, i: int) -> tuple[str, int] | None:
    # w[i:i+2] == "11"; returns (member, end index) or None
    m = _BLOCK.match(w, i)
    if m is None:
        return None
    return m.group(1)[1::2], m.end()


@lru_cache(maxsize=200_000)
def scan_wrapped(w: str) -> tuple[str, ...]:
    """The members ``u`` whose wrappings occur in ``w``, scanned left to right.

    After a block is recognized the scan resumes at its end, so a ``11``
    closing one block is never reused to open another.
    """
    found = []
    i = w.find("11")
    while i != -1:
        hit = _parse_block(w, i)
        if hit is not None:
            found.append(hit[0])
            i = w.find("11", hit[1])
        else:
            i = w.find("11", i + 1)
    return tuple(found)


def occurs(u: str, w: str) -> bool:
    """The relation u << w."""
    return u in scan_wrapped(w)


def tuple_word(parts: Iterable[str]) -> str:
    return "".join(wrap(p) for p in parts)


@lru_cache(maxsize=200_000)
def untuple(w: str, arity: int | None = None) -> tuple[str, ...]:
    """Inverse of ``tuple_word``: ``w`` must be exactly a concatenation of blocks."""
    parts = []
    i = 0
    while i < len(w):
        if not w.startswith("11", i):
            raise InvalidCode(f"not a tuple: {w!r}")
        hit = _parse_block(w, i)
        if hit is None:
            raise InvalidCode(f"not a tuple: {w!r}")
        parts.append(hit[0])
        i = hit[1]
    if arity is not None and len(parts) != arity:
        raise InvalidCode(f"expected a {arity}-tuple, got {len(parts)} parts")
    return tuple(parts)


class WordStream:
    """A budget-indexed infinite word.

    ``producer(b)`` returns the prefix at budget ``b`` and must be
    prefix-monotone in ``b``; the constructors below are.
    """

    def __init__(self, producer: Callable[[int], str]):
        self._producer = producer

    def prefix(self, budget: int) -> str:
        if budget <= 0:
            return ""
        return self._producer(budget)

    @classmethod
    def constant(cls, symbol: str) -> "WordStream":
        check_word(symbol)
        return cls(lambda b: symbol * b)

    @classmethod
    def from_word(cls, w: str, tail: "WordStream | None" = None) -> "WordStream":
        check_word(w)

        def produce(b: int) -> str:
            if b <= len(w) or tail is None:
                return w[:b]
            return w + tail.prefix(b - len(w))

        return cls(produce)

    @classmethod
    def from_symbols(cls, symbol_at: Callable[[int], str]) -> "WordStream":
        return cls(lambda b: "".join(symbol_at(i) for i in range(b)))


def tuple_mixed(u: str, p: WordStream) -> WordStream:
    return WordStream.from_word(wrap(u), p)


def interleave(p: WordStream, q: WordStream) -> WordStream:
    def produce(b: int) -> str:
        half = (b + 1) // 2
        a, c = p.prefix(half), q.prefix(half)
        out = []
        for i in range(b):
            out.append(a[i // 2] if i % 2 == 0 else c[i // 2])
        return "".join(out)

    return WordStream(produce)


# -- naturals and rationals ------------------------------------------------

_NAT = re.compile(r"0|1[01]*")
_RAT = re.compile(r"(-?)(0|1[01]*)/(1[01]*)")


def nat_encode(n: int) -> str:
    if n < 0:
        raise InvalidCode(f"not a natural number: {n}")
    return format(n, "b")


def nat_decode(w: str) -> int:
    if not _NAT.fullmatch(w):
        raise InvalidCode(f"not a natural numeral: {w!r}")
    return int(w, 2)


def nat_dom(w: str) -> bool:
    return _NAT.fullmatch(w) is not None


def rat_encode(q: Fraction | int) -> str:
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    return f"{sign}{abs(q.numerator):b}/{q.denominator:b}"


@lru_cache(maxsize=200_000)
def rat_decode(w: str) -> Fraction:
    m = _RAT.fullmatch(w)
    if m is None:
        raise InvalidCode(f"not a rational literal: {w!r}")
    num, den = int(m.group(2), 2), int(m.group(3), 2)
    if m.group(1) and num == 0:
        raise InvalidCode(f"negative zero: {w!r}")
    q = Fraction(num, den)
    if q.denominator != den:
        raise InvalidCode(f"not in lowest terms: {w!r}")
    return -q if m.group(1) else q


def rat_dom(w: str) -> bool:
    try:
        rat_decode(w)
    except InvalidCode:
        return False
    return True


# -- finite sets ---------------------------------------------------------------


class Flavor(enum.Enum):
    UNION = "union"
    INTERSECTION = "intersection"


@dataclass(frozen=True)
class FsCode:
    word: str
    flavor: Flavor

    def members(self) -> tuple[str, ...]:
        return scan_wrapped(self.word)


def fs_encode(
    members: Sequence[str],
    flavor: Flavor,
    dom: Callable[[str], bool] | None = None,
) -> FsCode:
    for m in members:
        check_word(m)
        if dom is not None and not dom(m):
            raise InvalidCode(f"member outside the notation's domain: {m!r}")
    return FsCode(tuple_word(members), flavor)


def fs_decode(c: FsCode | str, dom: Callable[[str], bool] | None = None) -> frozenset[str]:
    word = c.word if isinstance(c, FsCode) else c
    members = scan_wrapped(word)
    if dom is not None:
        for m in members:
            if not dom(m):
                raise InvalidCode(f"member outside the notation's domain: {m!r}")
    return frozenset(members)


def fs_dom(w: str, dom: Callable[[str], bool]) -> bool:
    """Decidable domain of the fs-notation: a clean concatenation of wrapped members."""
    try:
        parts = untuple(w)
    except InvalidCode:
        return False
    return all(dom(p) for p in parts)
