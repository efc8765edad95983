from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import strip
from ctopo.ball import RationalBall, mu_encode
from ctopo.euclid import euclidean_space, point_from_rational
from ctopo.names import (
    Confirmed,
    ContractViolation,
    Discipline,
    Name,
    Scheduler,
    Translator,
    Unknown,
    apply_translator,
    dovetail,
    identity_translator,
    listed_name,
    member_semidecide,
    name_from_dump,
    parse_dump,
)

R1 = euclidean_space(1)


def code(c, r):
    return mu_encode(RationalBall((Fraction(c),), Fraction(r)))


def counting_name(k: int = 3) -> Name:
    # step t lists the words 1^t 0^j for j < t mod k
    def steps():
        t = 0
        while True:
            t += 1
            yield ["1" * t + "0" * j for j in range(t % k)]

    return Name(Discipline.POINT, None, steps)


class TestName:
    def test_budget_zero_is_empty(self):
        assert point_from_rational((0,), R1).query(0) == []

    def test_point_zero_lists_unit_ball(self):
        n = point_from_rational((0,), R1)
        assert code(0, 1) in n.query(200)

    def test_empty_open(self):
        assert R1.empty().query(100) == []

    @given(st.integers(0, 60), st.integers(0, 60))
    def test_prefix_monotone(self, a, b):
        n = counting_name()
        lo, hi = sorted((a, b))
        assert n.query(hi)[: len(n.query(lo))] == n.query(lo)

    def test_replay_is_deterministic(self):
        a, b = counting_name(), counting_name()
        b.query(5)
        assert a.query(30) == b.query(30)
        assert list(zip(range(10), a.batches())) == list(zip(range(10), b.batches()))

    def test_step_of(self):
        n = counting_name()
        assert n.step_of("111110", 100) == 5
        assert n.step_of("111110", 4) is None
        assert n.step_of("0", 50) is None

    def test_dump_roundtrip(self):
        n = counting_name()
        text = n.dump(12)
        assert parse_dump(text) == n.listing(12)
        again = name_from_dump(Discipline.POINT, None, text)
        assert again.listing(12) == n.listing(12)

    def test_listed_name_rejects_bad_words(self):
        with pytest.raises(Exception):
            listed_name(Discipline.OPEN, None, ["12"])


class TestTranslators:
    def test_identity_preserves_prefixes(self):
        n = counting_name()
        out = identity_translator(Discipline.POINT)(n)
        for b in (0, 1, 7, 25):
            assert out.query(b) == n.query(b)

    def test_discipline_mismatch(self):
        with pytest.raises(ContractViolation):
            apply_translator(identity_translator(Discipline.OPEN), counting_name())

    def test_composition_associative(self):
        def suffix(tag):
            return Translator(
                Discipline.POINT,
                Discipline.POINT,
                lambda n: ([w + tag for w in b] for b in n.batches()),
                label=tag,
            )

        a, b, c = suffix("0"), suffix("-"), suffix("/")
        left, right = a.then(b).then(c), a.then(b.then(c))
        n = counting_name()
        assert left(n).query(20) == right(n).query(20)
        assert left.target is Discipline.POINT

    def test_compose_checks_disciplines(self):
        to_open = Translator(Discipline.POINT, Discipline.OPEN, lambda n: n.batches())
        with pytest.raises(ContractViolation):
            to_open.then(identity_translator(Discipline.POINT))

    def test_base_word_as_open_name(self):
        u = code(0, 1)
        assert R1.base_open(u).query(50) == [u]


def confirm_after(c):
    def task():
        for _ in range(c - 1):
            yield None
        yield "done"

    return task()


def diverge():
    while True:
        yield None


class TestScheduler:
    def test_single_task(self):
        assert dovetail([confirm_after(3)], 2) == []
        (ev,) = dovetail([confirm_after(3)], 3)
        assert ev.cost == 3 and ev.payload == "done"

    def test_all_diverge(self):
        for b in (10, 100, 1000):
            assert dovetail((diverge() for _ in range(50)), b) == []

    @given(st.integers(0, 10), st.integers(1, 100))
    def test_fairness_bound(self, k, c):
        def tasks():
            i = 0
            while True:
                yield confirm_after(c) if i == k else diverge()
                i += 1

        events = dovetail(tasks(), Scheduler.bound(k, c))
        assert [e.task for e in events] == [k]

    def test_finite_tasks_all_confirm(self):
        costs = [5, 1, 9, 2]
        bound = max(Scheduler.bound(k, c) for k, c in enumerate(costs))
        events = dovetail((confirm_after(c) for c in costs), bound)
        assert sorted(e.task for e in events) == [0, 1, 2, 3]


class TestMembership:
    def test_zero_in_unit_ball(self):
        W = R1.base_open(code(0, 1))
        assert isinstance(member_semidecide(point_from_rational((0,), R1), W, 100), Confirmed)

    def test_two_not_in_unit_ball(self):
        W = R1.base_open(code(0, 1))
        x = strip(point_from_rational((2,), R1))
        for b in (10, 100, 1000):
            assert member_semidecide(x, W, b) == Unknown(b)

    def test_union_of_intervals(self):
        W = R1.open_union([code(0, 1), code(Fraction(3, 2), Fraction(1, 2))])
        assert member_semidecide(strip(point_from_rational((0,), R1)), W, 200)

    @given(st.fractions(-4, 4, max_denominator=16), st.fractions(-4, 4, max_denominator=16),
           st.fractions(Fraction(1, 16), 2, max_denominator=16))
    def test_sound_against_exact_membership(self, x, c, r):
        W = R1.base_open(code(c, r))
        out = member_semidecide(strip(point_from_rational((x,), R1)), W, 60)
        if out:
            assert abs(x - c) < r

    def test_contracts(self):
        W = R1.base_open(code(0, 1))
        with pytest.raises(ContractViolation):
            member_semidecide(W, W, 10)
        with pytest.raises(ContractViolation):
            member_semidecide(point_from_rational((0,), R1), point_from_rational((0,), R1), 10)
