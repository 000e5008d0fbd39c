from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lazard.bchgroup import (
    LazardBoundViolated,
    LazardGroup,
    lie_bracket_via_group,
    lie_sum_via_group,
    recover_lie,
    size_bound,
)
from lazard.io import load_object, read
from lazard.liering import abelian, free_nilpotent, heisenberg

from oracles import heisenberg_matrix

DATA = Path(__file__).resolve().parents[1] / "data"

GROUPS = {
    "heis5": LazardGroup(heisenberg(5)),
    "heis7": LazardGroup(heisenberg(7)),
    "heis5e2": LazardGroup(heisenberg(5, 2)),
    "free23": LazardGroup(free_nilpotent(2, 3, 5)),
    "ab12": LazardGroup(abelian(5, (1, 2))),
}


def vec(G):
    return st.lists(st.integers(0, 10**6), min_size=G.rank, max_size=G.rank).map(
        lambda v: np.array(v, np.int64) % G.lie.orders
    )


def test_heisenberg_product_matches_unitriangular_matrices():
    G = GROUPS["heis5"]
    els = G.lie.elements()
    mats = np.array([heisenberg_matrix(v, 5) for v in els])
    table = G.table()
    prod = np.einsum("aij,bjk->abik", mats, mats) % 5
    assert np.array_equal(prod, mats[table])


def test_heisenberg_associativity_exhaustive():
    t = GROUPS["heis5"].table()
    left = t[t[:, :, None], np.arange(125)[None, None, :]]
    right = t[np.arange(125)[:, None, None], t[None, :, :]]
    assert np.array_equal(left, right)


@pytest.mark.parametrize("name", sorted(GROUPS))
@given(data=st.data())
def test_group_laws_random(name, data):
    G = GROUPS[name]
    a, b, c = (data.draw(vec(G)) for _ in range(3))
    assert np.array_equal(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)))
    assert np.array_equal(G.mul(a, G.inv(a)), G.lie.zero())
    assert np.array_equal(G.mul(G.lie.zero(), a), a)


@pytest.mark.parametrize("name", sorted(GROUPS))
@given(data=st.data(), n=st.integers(-30, 30))
def test_powers_are_scalar_multiples(name, data, n):
    G = GROUPS[name]
    a = data.draw(vec(G))
    out = G.lie.zero()
    for _ in range(abs(n)):
        out = G.mul(out, a if n > 0 else G.inv(a))
    assert np.array_equal(out, G.pow(a, n))


@pytest.mark.parametrize("name", sorted(GROUPS))
@given(data=st.data())
def test_inverse_bch_words_recover_sum_and_bracket(name, data):
    G = GROUPS[name]
    a, b = data.draw(vec(G)), data.draw(vec(G))
    assert np.array_equal(lie_sum_via_group(G, a, b), G.lie.add(a, b))
    assert np.array_equal(lie_bracket_via_group(G, a, b), G.lie.bracket(a, b))


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_recover_lie_round_trip(name):
    G = GROUPS[name]
    assert recover_lie(G) == G.lie


def test_class_bound_refused():
    L = load_object(read(DATA / "filiform6_5.toml")[0])
    assert L.nilpotency_class() == 5
    with pytest.raises(LazardBoundViolated, match=r"needs c < p \(c=5, p=5\)"):
        LazardGroup(L)


def test_class_and_center_agree_with_ring():
    for G in GROUPS.values():
        assert G.nilpotency_class() == G.lie.nilpotency_class()
        Z = G.center()
        assert np.array_equal(np.sort(Z), G.subset_from_submodule(G.lie.center()))


def test_quotient_by_center():
    G = GROUPS["heis5"]
    Q = G.quotient(G.center())
    assert Q.size == 25 and Q.nilpotency_class() == 1


def test_size_bound_env(monkeypatch):
    assert size_bound(5) == 125
    monkeypatch.setenv("LAZARD_MAX_ELEMENTS", "40")
    assert size_bound(5) == 40
