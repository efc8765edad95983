from fractions import Fraction
from itertools import islice

from hypothesis import given
from hypothesis import strategies as st

from ctopo.enumeration import (
    LazySeq,
    dovetail_pairs,
    index_sequences,
    pair,
    positive_rational,
    rational,
    round_robin,
    unpair,
    unpair_n,
)


def test_cantor_pairing_values():
    # (a + b)(a + b + 1)/2 + b
    assert [pair(0, 0), pair(1, 0), pair(0, 1), pair(2, 0), pair(1, 1)] == [0, 1, 2, 3, 4]


@given(st.integers(0, 10**9), st.integers(0, 10**9))
def test_pairing_roundtrip(a, b):
    assert unpair(pair(a, b)) == (a, b)


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_unpair_n_is_injective_prefix(k, n):
    assert len(unpair_n(k, n)) == n


def test_unpair_n_bijective_on_a_block():
    seen = {unpair_n(k, 3) for k in range(2000)}
    assert len(seen) == 2000


def test_calkin_wilf_start():
    assert [positive_rational(k) for k in range(5)] == [1, Fraction(1, 2), 2, Fraction(1, 3), Fraction(3, 2)]


def test_rational_enumeration_is_injective_and_hits_small_rationals():
    qs = [rational(k) for k in range(5000)]
    assert len(set(qs)) == len(qs)
    assert qs[:3] == [0, 1, -1]
    for q in (Fraction(2, 3), Fraction(-5, 4), Fraction(7)):
        assert q in qs


def test_dovetail_pairs_covers_grid():
    out = list(islice(dovetail_pairs(iter(range(100)), iter(range(100))), 5050))
    assert len(set(out)) == len(out)
    assert {(i, j) for i in range(10) for j in range(10)} <= set(out)


def test_dovetail_pairs_on_finite_sources():
    assert sorted(dovetail_pairs(iter("ab"), iter("xyz"))) == sorted((a, b) for a in "ab" for b in "xyz")


def test_round_robin_is_fair():
    def src(tag):
        while True:
            yield tag

    out = list(islice(round_robin(src(i) for i in range(1000)), 3000))
    firsts = {x for x in out if x is not None}
    assert {0, 1, 2, 3} <= firsts


def test_index_sequences_lengths():
    seqs = list(islice(index_sequences(2), 200))
    assert all(len(s) >= 2 for s in seqs)
    assert len(set(seqs)) == len(seqs)


def test_lazy_seq_random_access():
    s = LazySeq(iter(range(10**9)))
    assert s.get(50) == 50
    assert s.get(3) == 3
