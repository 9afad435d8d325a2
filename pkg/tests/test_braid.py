import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from burau_switch.braid import (
    IDENTITY,
    BraidGenerator,
    BraidSyntaxError,
    BraidWord,
    as_word,
    concat,
    exponent_sum,
    free_reduce,
    invert,
    parse_braid_word,
    random_word,
    serialize,
)

P1, N1 = BraidGenerator(1, 1), BraidGenerator(1, -1)
P2, N2 = BraidGenerator(2, 1), BraidGenerator(2, -1)

words = st.lists(st.tuples(st.sampled_from([1, 2]), st.sampled_from([1, -1])), max_size=12).map(BraidWord.from_pairs)


def test_parse_control_word():
    assert parse_braid_word("1 2 1").letters == (P1, P2, P1)


def test_parse_blank_is_identity():
    assert len(parse_braid_word("")) == 0
    assert parse_braid_word("   \t ").is_identity()


def test_parser_does_not_reduce():
    w = parse_braid_word("1 1' 2")
    assert w.letters == (P1, N1, P2)
    assert len(w) == 3


@pytest.mark.parametrize("text,token,pos", [
    ("1 3 2", "3", 1),
    ("1 2''", "2''", 1),
    ("x", "x", 0),
    ("1 2 -1", "-1", 2),
    ("1,2", "1,2", 0),
])
def test_parse_errors_name_token_and_position(text, token, pos):
    with pytest.raises(BraidSyntaxError) as info:
        parse_braid_word(text)
    assert info.value.token == token
    assert info.value.position == pos
    assert repr(token) in str(info.value)


def test_generator_validation():
    with pytest.raises(ValueError):
        BraidGenerator(3)
    with pytest.raises(ValueError):
        BraidGenerator(1, 2)


@pytest.mark.parametrize("letters,expected", [
    ((P1, N1, P2), (P2,)),
    ((P1, P2, N2, N1), ()),
    ((P1, P2, P1), (P1, P2, P1)),
])
def test_free_reduce_examples(letters, expected):
    assert free_reduce(BraidWord(letters)).letters == expected


def test_invert_and_exponent_sum():
    assert invert(BraidWord((P1, P2))).letters == (N2, N1)
    assert exponent_sum(BraidWord((P1, P2, P1))) == 3
    w = parse_braid_word("1 2' 2 1")
    assert free_reduce(concat(w, invert(w))) == IDENTITY


def test_as_word_accepts_several_spellings():
    assert as_word([1, -2]) == BraidWord((P1, N2))
    assert as_word("1 2'") == BraidWord((P1, N2))
    assert serialize(as_word([2, -1])) == "2 1'"


def test_random_word_is_reproducible():
    assert random_word(10, random.Random(3)) == random_word(10, random.Random(3))


@given(words)
def test_inverse_law(u):
    assert free_reduce(concat(u, invert(u))) == IDENTITY
    assert free_reduce(concat(invert(u), u)) == IDENTITY


@given(words)
def test_free_reduce_idempotent_and_keeps_exponent_sum(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert r.is_reduced()
    assert exponent_sum(r) == exponent_sum(w)


@given(words)
def test_serialize_round_trip(w):
    r = free_reduce(w)
    assert parse_braid_word(serialize(r)) == r
    assert parse_braid_word(serialize(w)) == w
