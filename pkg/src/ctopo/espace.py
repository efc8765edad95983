"""Effective topological spaces and the generic operations on their names.

A space supplies a decidable code domain, a total enumeration of base
words, the intersection witnesses ``S`` (as per-pair ``refine`` streams) and,
optionally, certified disjointness standing in for ``H``.  Exactness is a
per-space capability: the hooks ``subset``, ``disjoint`` and ``member``
answer ``True``/``False`` when certain and ``None`` otherwise.

``refine`` streams and translator step sources may yield ``None`` as a
tick, so that one machine step stays bounded even while a search is running.
"""

from __future__ import annotations

from collections import deque
from typing import Any, Callable, Iterable, Iterator

from .enumeration import LazySeq, dovetail_pairs, index_sequences, round_robin
from .names import (
    Batches,
    ContractViolation,
    Discipline,
    Name,
    Translator,
    Unknown,
    listed_name,
)
from .words import InvalidCode, fs_dom, scan_wrapped, tuple_word, untuple, wrap

Point = Any


class EffectiveSpace:
    hausdorff = False
    label = "space"

    @property
    def key(self) -> Any:
        return self.label

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label}>"

    # -- notation ---------------------------------------------------------------
    def dom(self, w: str) -> bool:
        raise NotImplementedError

    def base_words(self) -> Iterator[str]:
        raise NotImplementedError

    def global_word(self, k: int) -> str:
        """Random access into ``base_words``."""
        seq = self.__dict__.get("_base_seq")
        if seq is None:
            seq = self.__dict__["_base_seq"] = LazySeq(self.base_words())
        return seq.get(k)

    def refine(self, u: str, v: str) -> Iterator[str | None]:
        """The section of S at (u, v): words w certified with nu(w) ⊆ nu(u) ∩ nu(v)."""
        if self.subset(u, v):
            yield u
        elif self.subset(v, u):
            yield v
        for w in self.base_words():
            if self.subset(w, u) and self.subset(w, v):
                yield w
            else:
                yield None

    # -- interpreter ------------------------------------------------------------
    def subset(self, u: str, v: str) -> bool | None:
        return True if u == v else None

    def disjoint(self, u: str, v: str) -> bool | None:
        return None

    def member(self, x: Point, w: str) -> bool | None:
        return None

    def point_name(self, x: Point) -> Name:
        raise NotImplementedError

    # -- derived enumerations -------------------------------------------------------
    def intersection_witnesses(self) -> Iterator[tuple[str, str, str] | None]:
        def section(u, v):
            # bind u, v now; a generator expression would read them late
            for w in self.refine(u, v):
                yield (u, v, w) if w is not None else None

        def sections():
            for u, v in dovetail_pairs(self.base_words(), self.base_words()):
                yield section(u, v)

        return round_robin(sections())

    def hausdorff_witnesses(self) -> Iterator[tuple[str, str] | None]:
        for u, v in dovetail_pairs(self.base_words(), self.base_words()):
            yield (u, v) if self.disjoint(u, v) else None

    # -- basic open names -----------------------------------------------------------
    def base_open(self, u: str) -> Name:
        """nu <= theta: the base set nu(u) as an open name."""
        if not self.dom(u):
            raise InvalidCode(f"not a base word of {self.label}: {u!r}")
        return Name(
            Discipline.OPEN,
            self,
            lambda: iter([[u]]),
            certify=lambda w, b: bool(self.subset(w, u)),
            label=f"open {u}",
        )

    def open_union(self, words: Iterable[str]) -> Name:
        words = list(words)
        for u in words:
            if not self.dom(u):
                raise InvalidCode(f"not a base word of {self.label}: {u!r}")

        def certify(w: str, b: int) -> bool:
            return any(self.subset(w, u) for u in words)

        return Name(Discipline.OPEN, self, lambda: ([u] for u in words), certify=certify)

    def whole(self) -> Name:
        return Name(
            Discipline.OPEN,
            self,
            lambda: ([w] for w in self.base_words()),
            certify=lambda w, b: True,
            label="whole",
        )

    def empty(self) -> Name:
        return listed_name(Discipline.OPEN, self, [], label="empty")


def certified_inside(name: Name, w: str, budget: int) -> bool:
    """Semi-decide nu(w) ⊆ set named by an open name."""
    if name.certify is not None:
        return name.certify(w, budget)
    space = name.space
    return any(u == w or space.subset(w, u) for u in name.query(budget))


# -- open / closed / compact operations ------------------------------------------------


def _intersect2(a: Name, b: Name, discipline: Discipline) -> Name:
    space = a.space

    def steps() -> Batches:
        ia, ib = a.batches(), b.batches()
        seen_a: list[str] = []
        seen_b: list[str] = []
        active: deque = deque()
        while True:
            for u in next(ia):
                for v in seen_b:
                    active.append(space.refine(u, v))
                seen_a.append(u)
            for v in next(ib):
                for u in seen_a:
                    active.append(space.refine(u, v))
                seen_b.append(v)
            batch = []
            for _ in range(min(len(active), 8)):
                it = active.popleft()
                try:
                    w = next(it)
                except StopIteration:
                    continue
                if w is not None:
                    batch.append(w)
                active.append(it)
            yield batch

    def certify(w: str, budget: int) -> bool:
        return certified_inside(a, w, budget) and certified_inside(b, w, budget)

    return Name(discipline, space, steps, certify=certify, label="intersection")


def finite_intersection(*names: Name, space: Any = None) -> Name:
    if not names:
        if space is None:
            raise ContractViolation("empty intersection needs the ambient space")
        return space.whole()
    for n in names:
        if n.discipline is not Discipline.OPEN:
            raise ContractViolation("finite_intersection expects open names")
    out = names[0]
    for n in names[1:]:
        out = _intersect2(out, n, Discipline.OPEN)
    return out


def finite_union_closed(*names: Name, space: Any = None) -> Name:
    """Union of psi^- names = complement of the intersection of their open complements."""
    if not names:
        if space is None:
            raise ContractViolation("empty union needs the ambient space")
        w = space.whole()
        return Name(Discipline.CLOSED_NEG, space, w._steps, certify=w.certify, label="complement of empty")
    for n in names:
        if n.discipline is not Discipline.CLOSED_NEG:
            raise ContractViolation("finite_union_closed expects psi^- names")
    out = names[0]
    for n in names[1:]:
        out = _intersect2(out, n, Discipline.CLOSED_NEG)
    return out


def finite_union_compact(*names: Name) -> Name:
    for n in names:
        if n.discipline is not Discipline.COMPACT:
            raise ContractViolation("finite_union_compact expects kappa names")
    if not names:
        raise ContractViolation("empty compact union")
    out = names[0]
    for n in names[1:]:
        out = _union_compact2(out, n)
    return out


def _union_compact2(a: Name, b: Name) -> Name:
    def steps() -> Batches:
        ia, ib = a.batches(), b.batches()
        seen_a: list[str] = []
        seen_b: list[str] = []
        set_a: set[str] = set()
        set_b: set[str] = set()
        combos: deque[str] = deque()
        while True:
            batch = []
            for z in next(ia):
                if z in set_b:
                    batch.append(z)
                combos.extend(z + y for y in seen_b)
                seen_a.append(z)
                set_a.add(z)
            for y in next(ib):
                if y in set_a:
                    batch.append(y)
                combos.extend(z + y for z in seen_a)
                seen_b.append(y)
                set_b.add(y)
            for _ in range(min(len(combos), 8)):
                batch.append(combos.popleft())
            yield batch

    return Name(Discipline.COMPACT, a.space, steps, label="compact union")


def separate_points(x: Name, y: Name, budget: int) -> tuple[str, str] | Unknown:
    """Search for (u, v) with u listed by x, v listed by y and nu(u) ∩ nu(v) = ∅ certified.

    Step t tests one pair; the names are read at budget isqrt(t) + 1, and every
    pair of listed words is eventually tested exactly once.
    """
    space = x.space
    if x.discipline is not Discipline.POINT or y.discipline is not Discipline.POINT:
        raise ContractViolation("separate_points expects point names")
    xs: list[str] = []
    ys: list[str] = []
    queue: deque[tuple[str, str]] = deque()
    name_budget = 0
    t = 0
    while t < budget:
        # grow the names whenever the queue runs dry or t passes a square
        if not queue or (name_budget + 1) ** 2 <= t + 1:
            name_budget += 1
            new_x = x.query(name_budget)[len(xs):]
            new_y = y.query(name_budget)[len(ys):]
            for u in new_x:
                queue.extend((u, v) for v in ys)
                xs.append(u)
            for v in new_y:
                queue.extend((u, v) for u in xs)
                ys.append(v)
            if not queue:
                t += 1
                continue
        u, v = queue.popleft()
        t += 1
        if space.disjoint(u, v):
            return u, v
    return Unknown(budget)


def compact_complement(k: Name, budget: int | None = None) -> Name:
    """kappa <= psi^-: list base words certified disjoint from some listed cover."""
    if k.discipline is not Discipline.COMPACT:
        raise ContractViolation("compact_complement expects a kappa name")
    space = k.space

    def clear(u: str, cover: str) -> bool:
        return all(space.disjoint(u, m) for m in scan_wrapped(cover))

    def steps() -> Batches:
        ik = k.batches()
        base = space.base_words()
        words: list[str] = []
        covers: list[str] = []
        queue: deque[tuple[str, str]] = deque()
        while True:
            u = next(base)
            for z in covers:
                queue.append((u, z))
            words.append(u)
            for z in next(ik):
                queue.extend((w, z) for w in words)
                covers.append(z)
            batch = []
            for _ in range(min(len(queue), 8)):
                w, z = queue.popleft()
                if clear(w, z):
                    batch.append(w)
            yield batch

    def certify(w: str, b: int) -> bool:
        return any(clear(w, z) for z in k.query(b))

    return Name(Discipline.CLOSED_NEG, space, steps, certify=certify, label="complement")


# -- subspaces ---------------------------------------------------------------------------


class Subspace(EffectiveSpace):
    """nu_B(w) = nu(w) ∩ B with the parent's notation; ``region(x)`` tests tagged points."""

    def __init__(self, parent: EffectiveSpace, region: Callable[[Point], bool], label: str = "subspace"):
        self.parent = parent
        self.region = region
        self.label = f"{parent.label}|{label}"
        self.hausdorff = parent.hausdorff

    def dom(self, w):
        return self.parent.dom(w)

    def base_words(self):
        return self.parent.base_words()

    def refine(self, u, v):
        return self.parent.refine(u, v)

    def subset(self, u, v):
        # nu(u) ⊆ nu(v) implies nu_B(u) ⊆ nu_B(v); the converse may fail
        return True if self.parent.subset(u, v) else None

    def disjoint(self, u, v):
        return True if self.parent.disjoint(u, v) else None

    def member(self, x, w):
        if not self.region(x):
            return False
        return self.parent.member(x, w)

    def point_name(self, x):
        if not self.region(x):
            raise ContractViolation(f"{x} is not a point of {self.label}")
        inner = self.parent.point_name(x)
        return Name(Discipline.POINT, self, inner.batches, label=inner.label, point=inner.point)

    def __getattr__(self, item):
        # box-space hooks and the like pass through to the parent
        return getattr(self.parent, item)


def restrict_name(n: Name, sub: Subspace) -> Name:
    """Reinterpret a name over the parent as a name over the subspace (same words)."""
    return Name(n.discipline, sub, n.batches, certify=n.certify, label=n.label, point=n.point)


def include_name(n: Name) -> Name:
    sub = n.space
    return Name(n.discipline, sub.parent, n.batches, certify=n.certify, label=n.label, point=n.point)


# -- products --------------------------------------------------------------------------


class ProductSpace(EffectiveSpace):
    def __init__(self, a: EffectiveSpace, b: EffectiveSpace):
        self.a, self.b = a, b
        self.label = f"({a.label})x({b.label})"
        self.hausdorff = a.hausdorff and b.hausdorff
        if hasattr(a, "dim") and hasattr(b, "dim"):
            self.dim = a.dim + b.dim

    def split(self, w: str) -> tuple[str, str]:
        return untuple(w, 2)

    def join(self, u: str, v: str) -> str:
        return tuple_word([u, v])

    def dom(self, w):
        try:
            u, v = self.split(w)
        except InvalidCode:
            return False
        return self.a.dom(u) and self.b.dom(v)

    def base_words(self):
        for u, v in dovetail_pairs(self.a.base_words(), self.b.base_words()):
            yield self.join(u, v)

    def refine(self, u, v):
        (u1, u2), (v1, v2) = self.split(u), self.split(v)
        left = (w for w in self.a.refine(u1, v1) if w is not None)
        right = (w for w in self.b.refine(u2, v2) if w is not None)
        for w1, w2 in dovetail_pairs(left, right):
            yield self.join(w1, w2)

    def subset(self, u, v):
        (u1, u2), (v1, v2) = self.split(u), self.split(v)
        s1, s2 = self.a.subset(u1, v1), self.b.subset(u2, v2)
        if s1 and s2:
            return True
        if s1 is False or s2 is False:
            return False
        return None

    def disjoint(self, u, v):
        (u1, u2), (v1, v2) = self.split(u), self.split(v)
        d1, d2 = self.a.disjoint(u1, v1), self.b.disjoint(u2, v2)
        if d1 or d2:
            return True
        if d1 is False and d2 is False:
            return False
        return None

    def member(self, x, w):
        u, v = self.split(w)
        m1, m2 = self.a.member(x[0], u), self.b.member(x[1], v)
        if m1 is False or m2 is False:
            return False
        if m1 and m2:
            return True
        return None

    def point_name(self, x):
        return pair_names(self.a.point_name(x[0]), self.b.point_name(x[1]), self)

    # box-space hooks, when both factors are box spaces
    def word_vs_box(self, w, box):
        u, v = self.split(w)
        s1 = self.a.word_vs_box(u, box[: self.a.dim])
        s2 = self.b.word_vs_box(v, box[self.a.dim :])
        if s1 is False or s2 is False:
            return False
        if s1 and s2:
            return True
        return None

    def local_word(self, box, k):
        u = self.a.local_word(box[: self.a.dim], k)
        v = self.b.local_word(box[self.a.dim :], k)
        if u is None or v is None:
            return None
        return self.join(u, v)

    def word_box(self, w):
        u, v = self.split(w)
        return tuple(self.a.word_box(u)) + tuple(self.b.word_box(v))


def product(a: EffectiveSpace, b: EffectiveSpace) -> ProductSpace:
    return ProductSpace(a, b)


def pair_names(p: Name, q: Name, space: ProductSpace) -> Name:
    """[delta_1, delta_2] -> product delta: list <u, v> for every listed pair."""

    def steps() -> Batches:
        ip, iq = p.batches(), q.batches()
        us: list[str] = []
        vs: list[str] = []
        while True:
            batch = []
            new_u, new_v = next(ip), next(iq)
            for u in new_u:
                batch.extend(space.join(u, v) for v in vs)
                us.append(u)
            for v in new_v:
                batch.extend(space.join(u, v) for u in us)
                vs.append(v)
            yield batch

    return Name(Discipline.POINT, space, steps, label="pair")


def project_name(n: Name, k: int) -> Name:
    space: ProductSpace = n.space
    factor = space.a if k == 0 else space.b

    def steps() -> Batches:
        for batch in n.batches():
            yield [space.split(w)[k] for w in batch]

    return Name(n.discipline, factor, steps, label=f"proj{k}")


def product_open(p: Name, q: Name, space: ProductSpace) -> Name:
    out = pair_names(p, q, space)
    return Name(Discipline.OPEN, space, out._steps, label="open product")


def product_compact(p: Name, q: Name, space: ProductSpace) -> Name:
    """Covers of K1 x K2 from pairs of covers: the members of z1 x z2."""

    def steps() -> Batches:
        for batch in pair_names(p, q, space).batches():
            out = []
            for w in batch:
                z1, z2 = space.split(w)
                out.append(tuple_word(space.join(a, b) for a in scan_wrapped(z1) for b in scan_wrapped(z2)))
            yield out

    return Name(Discipline.COMPACT, space, steps, label="compact product")


# -- predicate spaces ----------------------------------------------------------------


class PredicateSpace:
    """A subbase notation lambda with decidable domain.

    Subclasses supply ``dom``, ``words`` (an enumeration of dom lambda),
    ``member`` for tagged points and ``point_name`` (a delta_Z name listing
    every lambda-word whose set contains the point).
    """

    label = "predicates"

    @property
    def key(self) -> Any:
        return self.label

    def dom(self, w: str) -> bool:
        raise NotImplementedError

    def words(self) -> Iterator[str]:
        raise NotImplementedError

    def member(self, x: Point, w: str) -> bool | None:
        return None

    def subset(self, u: str, v: str) -> bool | None:
        return True if u == v else None

    def disjoint(self, u: str, v: str) -> bool | None:
        return None

    def point_name(self, x: Point) -> Name:
        raise NotImplementedError


class InducedSpace(EffectiveSpace):
    """T(Z): finite intersections of subbase sets under the ⋂-flavored fs-notation."""

    def __init__(self, z: PredicateSpace):
        self.z = z
        self.label = f"T({z.label})"

    def dom(self, w):
        return fs_dom(w, self.z.dom)

    def members(self, w: str) -> tuple[str, ...]:
        return untuple(w)

    def base_words(self):
        yield ""
        seq = []
        src = self.z.words()
        for idx in index_sequences(1):
            while len(seq) <= max(idx):
                seq.append(next(src))
            yield tuple_word(seq[i] for i in idx)

    def refine(self, u, v):
        yield u + v

    def subset(self, u, v):
        mu, mv = self.members(u), self.members(v)
        for b in mv:
            if not any(a == b or self.z.subset(a, b) for a in mu):
                return None
        return True

    def disjoint(self, u, v):
        for a in self.members(u):
            for b in self.members(v):
                if self.z.disjoint(a, b):
                    return True
        return None

    def member(self, x, w):
        result: bool | None = True
        for m in self.members(w):
            r = self.z.member(x, m)
            if r is False:
                return False
            if r is None:
                result = None
        return result

    def point_name(self, x):
        return apply_z_to_t(self.z.point_name(x), self)

    def hausdorff_witnesses(self):
        return super().hausdorff_witnesses()


def induce_from_predicate(z: PredicateSpace) -> InducedSpace:
    return InducedSpace(z)


def _z_to_t_steps(n: Name, combos_every: int = 2) -> Callable[[], Batches]:
    def steps() -> Batches:
        listed: list[str] = []
        seqs = index_sequences(2)
        pending = next(seqs)
        t = 0
        for batch in n.batches():
            t += 1
            out = []
            for m in batch:
                if not listed:
                    # the whole space, listed once the point is known to exist
                    out.append("")
                listed.append(m)
                out.append(wrap(m))
            if t % combos_every == 0 and max(pending) < len(listed):
                out.append(tuple_word(listed[i] for i in pending))
                pending = next(seqs)
            yield out

    return steps


def apply_z_to_t(n: Name, space: InducedSpace) -> Name:
    """delta_Z -> delta_T(Z): list every finite intersection of listed subbase words."""
    return Name(Discipline.POINT, space, _z_to_t_steps(n), label="z->t")


def z_to_t(space: InducedSpace) -> Translator:
    return Translator(
        Discipline.POINT,
        Discipline.POINT,
        lambda n: _z_to_t_steps(n)(),
        source_space=space.z,
        target_space=space,
        label="z->t",
    )


def t_to_z(space: InducedSpace) -> Translator:
    def transducer(n: Name) -> Batches:
        for batch in n.batches():
            out = []
            for w in batch:
                out.extend(untuple(w))
            yield out

    return Translator(
        Discipline.POINT, Discipline.POINT, transducer, source_space=space, target_space=space.z, label="t->z"
    )
