from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lazard.freelie import (
    bch_table,
    bracketing,
    is_lyndon,
    lyndon_words,
    necklace_count,
    standard_factorization,
)

from oracles import NC, bch_reference, nc_tree


def lie_sum(table):
    out = NC({}, table.c)
    for _, tree, q in table.entries:
        out = out + nc_tree(tree, table.c).scale(q)
    return out


@pytest.mark.parametrize("c", [1, 2, 3, 4, 5])
def test_bch_matches_associative_oracle(c):
    assert lie_sum(bch_table(c)).t == bch_reference(c).t


def test_low_weight_coefficients():
    t = bch_table(3)
    assert t.coefficient((0, 1)) == Fraction(1, 2)
    assert t.coefficient((0, 0, 1)) == Fraction(1, 12)
    # the Lyndon word xyy brackets as [[x,y],y] = -[y,[x,y]]
    assert bracketing((0, 1, 1)) == ((0, 1), 1)
    minus_twelfth = nc_tree((1, (0, 1)), 3).scale(Fraction(-1, 12))
    assert nc_tree(((0, 1), 1), 3).scale(t.coefficient((0, 1, 1))).t == minus_twelfth.t


def test_weight_four_and_five_known_terms():
    t = bch_table(5)
    assert t.coefficient((0, 0, 0, 1)) == 0
    assert t.coefficient((0, 0, 1, 1)) == Fraction(1, 24)
    assert t.max_denominator_prime() == 5


def test_bch_json_shape():
    rows = bch_table(2).to_json()
    assert rows[2] == {"word": "xy", "bracketing": "[x,y]", "numerator": 1, "denominator": 2}


def test_class_must_be_positive():
    with pytest.raises(ValueError):
        bch_table(0)


@pytest.mark.parametrize("n,count", [(1, 2), (2, 1), (3, 2), (4, 3), (5, 6), (6, 9)])
def test_lyndon_counts_witt(n, count):
    assert necklace_count(2, n) == count
    assert sum(1 for w in lyndon_words(2, n) if len(w) == n) == count


@given(st.lists(st.integers(0, 2), min_size=2, max_size=7))
def test_standard_factorization(word):
    word = tuple(word)
    if not is_lyndon(word):
        return
    u, v = standard_factorization(word)
    assert u + v == word and is_lyndon(u) and is_lyndon(v) and u < v
