from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import binary, rationals, words
from ctopo.words import (
    Flavor,
    InvalidCode,
    WordStream,
    fs_decode,
    fs_dom,
    fs_encode,
    interleave,
    is_word,
    nat_decode,
    nat_dom,
    nat_encode,
    occurs,
    rat_decode,
    rat_dom,
    rat_encode,
    scan_wrapped,
    tuple_mixed,
    tuple_word,
    untuple,
    wrap,
)


def wrap_by_definition(u: str) -> str:
    # 110 a1 0 a2 0 ... 0 ak 011, written out symbol by symbol
    out = "11"
    for a in u:
        out += "0" + a
    return out + "011"


class TestWrap:
    def test_single_symbol(self):
        assert wrap("1") == "1101011"

    def test_two_symbols_follow_the_formula(self):
        # the formula gives 110 0 0 1 011
        assert wrap("01") == "110001011"

    def test_empty_word(self):
        assert wrap("") == "11011"

    @given(words)
    def test_matches_definition(self, u):
        if u:
            assert wrap(u) == wrap_by_definition(u)

    @given(words)
    def test_scan_inverts_wrap(self, u):
        assert scan_wrapped(wrap(u)) == (u,)


class TestScan:
    def test_single_block(self):
        assert scan_wrapped("1101011") == ("1",)

    def test_no_block(self):
        assert scan_wrapped("10101") == ()

    @given(st.lists(words, max_size=8))
    def test_concatenation_recovers_members(self, parts):
        assert scan_wrapped(tuple_word(parts)) == tuple(parts)

    @given(st.lists(words, min_size=1, max_size=6), st.data())
    def test_occurs_exactly_for_members(self, parts, data):
        w = tuple_word(parts)
        assert all(occurs(u, w) for u in parts)
        other = data.draw(words)
        if other not in parts:
            assert not occurs(other, w)


class TestTuple:
    def test_tuple_is_concatenated_wrappings(self):
        assert tuple_word(["1", "0"]) == wrap("1") + wrap("0")

    @given(st.lists(words, max_size=6))
    def test_untuple_roundtrip(self, parts):
        assert untuple(tuple_word(parts)) == tuple(parts)

    def test_untuple_rejects_garbage(self):
        with pytest.raises(InvalidCode):
            untuple("1101011" + "0")
        with pytest.raises(InvalidCode):
            untuple(tuple_word(["1"]), 2)


class TestStreams:
    def test_interleave(self):
        p = WordStream.constant("0")
        q = WordStream.constant("1")
        assert interleave(p, q).prefix(6) == "010101"

    def test_tuple_mixed(self):
        q = WordStream.constant("0")
        for b in (0, 3, 7, 12):
            assert tuple_mixed("1", q).prefix(b) == ("1101011" + "0" * 20)[:b]

    @given(words, st.integers(0, 40), st.integers(0, 40))
    def test_prefix_monotone(self, w, a, b):
        s = interleave(WordStream.from_word(w, WordStream.constant("#")), WordStream.constant("1"))
        lo, hi = sorted((a, b))
        assert s.prefix(hi).startswith(s.prefix(lo))
        assert len(s.prefix(hi)) == hi

    def test_constant_rejects_bad_symbol(self):
        with pytest.raises(InvalidCode):
            WordStream.constant("x")


class TestNaturals:
    def test_examples(self):
        assert nat_encode(5) == "101"
        assert nat_encode(0) == "0"
        with pytest.raises(InvalidCode):
            nat_decode("01")

    @given(st.integers(0, 10**12))
    def test_roundtrip(self, n):
        assert nat_decode(nat_encode(n)) == n

    @given(binary)
    def test_dom_agrees_with_decode(self, w):
        try:
            nat_decode(w)
            ok = True
        except InvalidCode:
            ok = False
        assert nat_dom(w) == ok


class TestRationals:
    def test_examples(self):
        assert rat_encode(Fraction(1, 2)) == "1/10"
        assert rat_encode(-3) == "-11/1"
        with pytest.raises(InvalidCode):
            rat_decode("10/100")

    def test_rejects_zero_denominator_and_negative_zero(self):
        for w in ("1/0", "-0/1", "/1", "1/", "01/1"):
            assert not rat_dom(w)

    @given(rationals)
    def test_roundtrip(self, q):
        assert rat_decode(rat_encode(q)) == q

    @given(words)
    def test_dom_is_total(self, w):
        assert rat_dom(w) in (True, False)
        if rat_dom(w):
            assert rat_encode(rat_decode(w)) == w


class TestFiniteSets:
    def test_singleton(self):
        assert fs_decode(fs_encode(["1"], Flavor.UNION)) == {"1"}

    def test_empty_codes(self):
        # the empty intersection is the whole space, the empty union is empty:
        # both are the empty word, the flavor carries the meaning
        assert fs_encode([], Flavor.INTERSECTION).word == ""
        assert fs_decode(fs_encode([], Flavor.UNION)) == frozenset()

    def test_dom_check(self):
        with pytest.raises(InvalidCode):
            fs_encode(["10/100"], Flavor.UNION, dom=rat_dom)
        assert fs_dom(tuple_word(["1/10", "-11/1"]), rat_dom)
        assert not fs_dom(tuple_word(["1/10", "10/100"]), rat_dom)
        assert not fs_dom("1", rat_dom)

    @given(st.lists(rationals, max_size=6))
    def test_roundtrip_as_sets(self, qs):
        members = [rat_encode(q) for q in qs]
        c = fs_encode(members, Flavor.UNION, dom=rat_dom)
        assert fs_decode(c, dom=rat_dom) == frozenset(members)
        assert fs_dom(c.word, rat_dom)


@given(words)
def test_alphabet(w):
    assert is_word(w)
    assert not is_word(w + "2")
