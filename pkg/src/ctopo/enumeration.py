"""Total enumerations and dovetailing helpers."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import isqrt
from typing import Generic, Iterable, Iterator, TypeVar

T = TypeVar("T")


def pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def unpair(k: int) -> tuple[int, int]:
    s = (isqrt(8 * k + 1) - 1) // 2
    b = k - s * (s + 1) // 2
    return s - b, b


def unpair_n(k: int, n: int) -> tuple[int, ...]:
    """Bijection N -> N^n by nested Cantor unpairing."""
    if n == 1:
        return (k,)
    out = []
    for _ in range(n - 1):
        a, k = unpair(k)
        out.append(a)
    out.append(k)
    return tuple(out)


def fusc(n: int) -> int:
    # Stern's diatomic sequence
    a, b = 1, 0
    while n:
        if n & 1:
            b += a
        else:
            a += b
        n >>= 1
    return b


def positive_rational(k: int) -> Fraction:
    """k-th positive rational (k >= 0) in Calkin-Wilf order: 1, 1/2, 2, 1/3, 3/2, ..."""
    m = k + 1
    return Fraction(fusc(m), fusc(m + 1))


def rational(k: int) -> Fraction:
    """Bijection N -> Q: 0, 1, -1, 1/2, -1/2, 2, -2, ..."""
    if k == 0:
        return Fraction(0)
    q = positive_rational((k - 1) // 2)
    return q if k % 2 == 1 else -q


class LazySeq(Generic[T]):
    """Random access into a (possibly infinite) iterator, caching as it goes."""

    def __init__(self, source: Iterable[T]):
        self._it = iter(source)
        self._items: list[T] = []
        self._done = False

    def get(self, i: int) -> T | None:
        while len(self._items) <= i and not self._done:
            try:
                self._items.append(next(self._it))
            except StopIteration:
                self._done = True
        return self._items[i] if i < len(self._items) else None

    def __len__(self) -> int:
        return len(self._items)


def dovetail_pairs(a: Iterable[T], b: Iterable[T]) -> Iterator[tuple[T, T]]:
    """All pairs of two (possibly infinite) sequences, in Cantor order."""
    sa, sb = LazySeq(a), LazySeq(b)
    s = 0
    while True:
        # probe the ends so exhausted sides clip the diagonal
        sa.get(s)
        sb.get(s)
        lo = s - len(sb) + 1 if sb._done else 0
        hi = min(s, len(sa) - 1) if sa._done else s
        for i in range(max(lo, 0), hi + 1):
            x, y = sa.get(i), sb.get(s - i)
            if x is not None and y is not None:
                yield x, y
        s += 1
        if sa._done and sb._done and s > len(sa) + len(sb):
            return


def round_robin(sources: Iterable[Iterator[T]]) -> Iterator[T | None]:
    """Fair merge of countably many iterators: in round r the r-th source is
    admitted, then every live source is advanced once.  Each ``next`` of the
    result advances exactly one source and yields its item (``None`` items
    are ticks and are passed through)."""
    src = iter(sources)
    live: deque[Iterator[T]] = deque()
    admitting = True
    while True:
        if admitting:
            try:
                live.append(iter(next(src)))
            except StopIteration:
                admitting = False
        if not live:
            if not admitting:
                return
            yield None
            continue
        for _ in range(len(live)):
            it = live.popleft()
            try:
                item = next(it)
            except StopIteration:
                continue
            live.append(it)
            yield item


def index_sequences(min_len: int = 2) -> Iterator[tuple[int, ...]]:
    """Every finite sequence of naturals of length >= min_len, by increasing weight
    sum(entries) + length."""

    def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    weight = min_len
    while True:
        for length in range(min_len, weight + 1):
            yield from compositions(weight - length, length)
        weight += 1
