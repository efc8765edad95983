"""Budgeted names, semi-decisions, translators and the fair scheduler.

A name is driven by a *step source*: a zero-argument callable returning a
fresh iterator, each ``next()`` of which yields the batch of words listed in
one machine step.  The prefix at budget ``n`` is the concatenation of the
first ``n`` batches, so prefix-monotonicity holds by construction.  Batches
are cached, making a name a pure function of its budget.
"""

from __future__ import annotations

import bisect
import enum
import threading
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Sequence

from .words import check_word

Batches = Iterator[Iterable[str]]


class Discipline(enum.Enum):
    POINT = "delta"
    OPEN = "theta"
    CLOSED = "psi"
    CLOSED_NEG = "psi-"
    COMPACT = "kappa"


class ContractViolation(RuntimeError):
    """A caller broke a declared precondition (discipline, space, arity)."""


class Name:
    """A budgeted, prefix-monotone enumeration of words.

    ``certify`` is an optional semi-decision ``(word, budget) -> bool`` that
    some constructions attach: it confirms ``nu(word) ⊆ denoted set`` and lets
    membership tests avoid waiting for the identical word to be listed.
    """

    def __init__(
        self,
        discipline: Discipline,
        space: Any,
        steps: Callable[[], Batches],
        certify: Callable[[str, int], bool] | None = None,
        label: str = "",
        point: Any = None,
    ):
        self.discipline = discipline
        self.space = space
        self.certify = certify
        self.label = label
        # exact rational tag of the denoted point, when known; lets translators
        # take an exact path instead of interval refinement
        self.point = point
        self._steps = steps
        self._it: Batches | None = None
        self._words: list[str] = []
        self._when: list[int] = []
        self._seen: set[str] = set()
        self._done = 0
        self._exhausted = False
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        return f"Name({self.discipline.value}, {self.label or self.space!r})"

    def _advance(self, budget: int) -> None:
        with self._lock:
            if self._it is None:
                self._it = iter(self._steps())
            while self._done < budget and not self._exhausted:
                try:
                    batch = next(self._it)
                except StopIteration:
                    self._exhausted = True
                    break
                self._done += 1
                for w in batch:
                    if w not in self._seen:
                        self._seen.add(w)
                        self._words.append(w)
                        self._when.append(self._done)

    def query(self, budget: int) -> list[str]:
        if budget <= 0:
            return []
        self._advance(budget)
        return self._words[: bisect.bisect_right(self._when, budget)]

    def listing(self, budget: int) -> list[tuple[int, str]]:
        """``(step, word)`` pairs in first-listed order."""
        words = self.query(budget)
        return list(zip(self._when[: len(words)], words))

    def step_of(self, word: str, budget: int) -> int | None:
        """The step at which ``word`` is first listed, reading no further than needed."""
        target = 1
        while word not in self._seen and target < budget and not self._exhausted:
            target = min(budget, 2 * target)
            self._advance(target)
        if word not in self._seen:
            return None
        step = self._when[self._words.index(word)]
        return step if step <= budget else None

    def batches(self) -> Iterator[list[str]]:
        """Replay the name step by step: batch ``t`` holds the words first listed at step ``t``."""
        t = 0
        pos = 0
        while True:
            t += 1
            self._advance(t)
            if self._exhausted and t > self._done:
                # finite listing: keep producing empty steps
                yield []
                continue
            end = bisect.bisect_right(self._when, t)
            yield self._words[pos:end]
            pos = end

    def dump(self, budget: int) -> str:
        return "".join(f"{s} {w}\n" for s, w in self.listing(budget))


def listed_name(discipline: Discipline, space: Any, words: Sequence[str], label: str = "") -> Name:
    """A name listing a fixed finite word list, one word per step."""
    words = [check_word(w) for w in words]
    return Name(discipline, space, lambda: ([w] for w in words), label=label)


def parse_dump(text: str) -> list[tuple[int, str]]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        step, _, word = line.partition(" ")
        out.append((int(step), check_word(word)))
    return out


def name_from_dump(discipline: Discipline, space: Any, text: str) -> Name:
    records = parse_dump(text)

    def steps() -> Batches:
        i = 0
        t = 0
        while i < len(records):
            t += 1
            batch = []
            while i < len(records) and records[i][0] <= t:
                batch.append(records[i][1])
                i += 1
            yield batch

    return Name(discipline, space, steps)


# -- semi-decisions ------------------------------------------------------------


@dataclass(frozen=True)
class Confirmed:
    step: int

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Unknown:
    budget: int

    def __bool__(self) -> bool:
        return False


SemiDecision = Confirmed | Unknown


# -- translators -----------------------------------------------------------------


class Translator:
    """Realizer of a reduction: turns the batch stream of a source name into
    the batch stream of a target name, reading at most ``t`` input steps
    before emitting output step ``t``."""

    def __init__(
        self,
        source: Discipline,
        target: Discipline,
        transducer: Callable[[Name], Batches],
        source_space: Any = None,
        target_space: Any = None,
        label: str = "",
        point_map: Callable[[Any], Any] | None = None,
    ):
        self.source = source
        self.target = target
        self.transducer = transducer
        self.source_space = source_space
        self.target_space = target_space
        self.label = label
        self.point_map = point_map

    def __call__(self, n: Name) -> Name:
        return apply_translator(self, n)

    def then(self, other: "Translator") -> "Translator":
        if other.source is not self.target:
            raise ContractViolation(f"cannot compose {self.target} into {other.source}")
        first = self

        def transducer(n: Name) -> Batches:
            return other.transducer(apply_translator(first, n))

        pm = None
        if self.point_map is not None and other.point_map is not None:

            def pm(x):
                y = first.point_map(x)
                return None if y is None else other.point_map(y)

        return Translator(
            self.source,
            other.target,
            transducer,
            self.source_space,
            other.target_space,
            label=f"{self.label}>{other.label}",
            point_map=pm,
        )


def identity_translator(discipline: Discipline, space: Any = None) -> Translator:
    return Translator(discipline, discipline, lambda n: n.batches(), space, space, "id", point_map=lambda x: x)


def apply_translator(t: Translator, n: Name, budget: int | None = None) -> Name:
    if n.discipline is not t.source:
        raise ContractViolation(f"translator expects {t.source.value}, got {n.discipline.value}")
    if t.source_space is not None and n.space is not None and n.space is not t.source_space:
        if getattr(n.space, "key", None) != getattr(t.source_space, "key", object()):
            raise ContractViolation("translator applied to a name over a different space")
    space = t.target_space if t.target_space is not None else n.space
    point = None
    if n.point is not None and t.point_map is not None:
        point = t.point_map(n.point)
    out = Name(t.target, space, lambda: t.transducer(n), label=t.label, point=point)
    if budget is not None:
        out.query(budget)
    return out


# -- scheduling ------------------------------------------------------------------

# A task is an iterator; each next() is one step.  Yielding a non-None value
# confirms the task with that payload.  Exhaustion means the task gave up.
Task = Iterator[Any]


@dataclass(frozen=True)
class Event:
    task: int
    cost: int
    step: int
    payload: Any


class Scheduler:
    """Fair dovetailing: in round ``r`` task ``r`` is admitted, then every
    admitted live task runs one step.  A task with index ``k`` that confirms
    after ``c`` of its own steps is reported by global step
    ``bound(k, c)``."""

    def __init__(self, tasks: Iterable[Task]):
        self._source = iter(tasks)
        self._live: list[tuple[int, Task, list[int]]] = []
        self._admitted = 0
        self._source_done = False
        self.step = 0
        self.events: list[Event] = []

    @staticmethod
    def bound(k: int, c: int) -> int:
        # rounds 0..k+c-1, round r runs at most r+1 tasks
        r = k + c
        return r * (r + 1) // 2

    def _admit(self) -> None:
        if self._source_done:
            return
        try:
            task = next(self._source)
        except StopIteration:
            self._source_done = True
            return
        self._live.append((self._admitted, iter(task), [0]))
        self._admitted += 1

    def run(self, budget: int) -> list[Event]:
        """Advance until ``budget`` global steps have been spent; returns all events so far."""
        while self.step < budget:
            self._admit()
            if not self._live:
                if self._source_done:
                    break
                continue
            finished = []
            for pos, (k, task, used) in enumerate(self._live):
                if self.step >= budget:
                    break
                self.step += 1
                used[0] += 1
                try:
                    out = next(task)
                except StopIteration:
                    finished.append(pos)
                    continue
                if out is not None:
                    self.events.append(Event(k, used[0], self.step, out))
                    finished.append(pos)
            for pos in reversed(finished):
                del self._live[pos]
        return list(self.events)


def dovetail(tasks: Iterable[Task], budget: int) -> list[Event]:
    return Scheduler(tasks).run(budget)


def scheduler_steps(tasks: Iterable[Task], per_step: int = 1) -> Iterator[list[Event]]:
    """Run a scheduler forever, yielding the events of each chunk of ``per_step`` global steps."""
    s = Scheduler(tasks)
    seen = 0
    target = 0
    while True:
        target += per_step
        s.run(target)
        new = s.events[seen:]
        seen = len(s.events)
        yield new


# -- membership ------------------------------------------------------------------


def member_semidecide(x: Name, W: Name, budget: int) -> SemiDecision:
    """Confirm ``x in W`` once a word is listed by both names, or once ``W``'s
    certificate accepts a word listed by ``x``."""
    if x.discipline is not Discipline.POINT:
        raise ContractViolation("member_semidecide expects a point name")
    if W.discipline not in (Discipline.OPEN, Discipline.CLOSED_NEG):
        raise ContractViolation("member_semidecide expects an open name")
    xs = x.listing(budget)
    ws = W.listing(budget)
    first_w = {}
    for s, w in ws:
        first_w.setdefault(w, s)
    best = None
    for s, w in xs:
        if w in first_w:
            t = max(s, first_w[w])
            best = t if best is None else min(best, t)
    if W.certify is not None:
        for s, w in xs:
            if best is not None and s >= best:
                break
            if W.certify(w, s):
                best = s if best is None else min(best, s)
                break
            if W.certify(w, budget):
                best = budget if best is None else min(best, budget)
    if best is None:
        return Unknown(budget)
    return Confirmed(best)
