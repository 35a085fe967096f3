import pytest
from hypothesis import given, strategies as st

from squarebraid.errors import ParseError
from squarebraid.words import (GenSym, align_conjugator, commutator, conjugate, cyclic_reduce, cyclically_equal,
                               format_word, free_reduce, inverse, is_commutator_shaped, letter, mul,
                               parse_word, substitute)

GENS = [GenSym("a", (1,)), GenSym("b", (1,)), GenSym("c", ())]
letters = st.tuples(st.sampled_from(GENS), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(tuple)


def test_parse_format_round_trip():
    w = parse_word("a_1_2 b_3^-1 u")
    assert format_word(w) == "a_1_2 b_3^-1 u"
    assert w[0] == (GenSym("a", (1, 2)), 1)


@pytest.mark.parametrize("bad", ["a^2", "a^-2", "1a", "a_", "a__1"])
def test_parse_rejects_bad_tokens(bad):
    with pytest.raises(ParseError):
        parse_word(bad)


def test_free_reduce_cancels_nested_pairs():
    assert free_reduce(parse_word("a b b^-1 a^-1 c")) == parse_word("c")


@given(words)
def test_inverse_cancels(w):
    assert free_reduce(mul(w, inverse(w))) == ()


@given(words, words)
def test_cyclic_reduce_is_conjugation_invariant(w, g):
    w = free_reduce(w)
    assert cyclic_reduce(conjugate(g, w)) == cyclic_reduce(w)
    assert cyclic_reduce(inverse(w)) == cyclic_reduce(w)


@given(words, words)
def test_align_conjugator_recovers_conjugate(w, g):
    w = cyclic_reduce(w)
    target = free_reduce(mul(g, w, inverse(g)))
    got = align_conjugator(target, w)
    assert got is not None
    h, e = got
    stored = w if e == 1 else inverse(w)
    assert free_reduce(mul(h, stored, inverse(h))) == target


def test_commutator_detection_literal_and_rotated():
    a, b = letter("a"), letter("b")
    w = commutator(mul(a, b), b)
    wit = is_commutator_shaped(w)
    assert wit is not None and wit.mode == "literal"
    rot = w[3:] + w[:3]
    assert is_commutator_shaped(rot) is not None


def test_commutator_detection_three_piece():
    x, y, z = letter("x"), letter("y"), letter("z")
    w = mul(x, y, z, inverse(x), inverse(y), inverse(z))
    wit = is_commutator_shaped(w)
    assert wit is not None
    assert cyclically_equal(commutator(wit.u, wit.v), w)


def test_non_commutator_rejected():
    assert is_commutator_shaped(parse_word("a b a b")) is None
    assert is_commutator_shaped(parse_word("a b c")) is None


@given(st.lists(letters, min_size=1, max_size=4).map(tuple), st.lists(letters, min_size=1, max_size=4).map(tuple))
def test_every_cyclically_reduced_commutator_is_detected(u, v):
    r = cyclic_reduce(commutator(u, v))
    if r:
        wit = is_commutator_shaped(r)
        assert wit is not None
        assert cyclically_equal(commutator(wit.u, wit.v), r)


def test_substitute():
    b = GenSym("b", ())
    w = parse_word("a b^-1")
    assert substitute(w, {b: parse_word("a a")}) == parse_word("a^-1")
