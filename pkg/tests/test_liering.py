import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lazard.liering import (
    InvalidLieRing,
    NilLieRing,
    abelian,
    direct_sum,
    free_nilpotent,
    heisenberg,
    quotient_map,
    subring_ring,
)

from oracles import closure

RINGS = {
    "heis5": heisenberg(5),
    "heis5e2": heisenberg(5, 2),
    "free23": free_nilpotent(2, 3, 5),
    "ab12": abelian(5, (1, 2)),
}


def elements(L):
    return st.lists(st.integers(0, 10**6), min_size=L.rank, max_size=L.rank).map(
        lambda v: np.array(v, np.int64) % L.orders
    )


@pytest.mark.parametrize("name", sorted(RINGS))
@given(data=st.data())
def test_lie_axioms_on_random_elements(name, data):
    L = RINGS[name]
    a, b, c = (data.draw(elements(L)) for _ in range(3))
    assert np.array_equal(L.bracket(a, b), (-L.bracket(b, a)) % L.orders)
    assert not L.bracket(a, a).any()
    jac = L.bracket(a, L.bracket(b, c)) + L.bracket(b, L.bracket(c, a)) + L.bracket(c, L.bracket(a, b))
    assert not (jac % L.orders).any()
    assert np.array_equal(L.bracket(L.add(a, b), c), L.add(L.bracket(a, c), L.bracket(b, c)))


def test_heisenberg_structure():
    L = heisenberg(5)
    assert L.size == 125 and L.nilpotency_class() == 2
    assert L.center().generators.tolist() == [[0, 0, 1]]
    assert [s.order() for s in L.lower_central_series()] == [125, 5, 1]


def test_free_nilpotent_rank_is_witt():
    # 2 + 1 + 2 Lyndon words up to weight 3
    L = free_nilpotent(2, 3, 5)
    assert L.rank == 5 and L.nilpotency_class() == 3


def test_invalid_constants_rejected():
    C = np.zeros((2, 2, 2), np.int64)
    C[0, 1, 1] = 1  # [x,y] = y without the antisymmetric partner
    with pytest.raises(InvalidLieRing, match="antisymmetry"):
        NilLieRing(5, (1, 1), C)


def test_non_nilpotent_rejected():
    C = np.zeros((2, 2, 2), np.int64)
    C[0, 1, 1], C[1, 0, 1] = 1, 4  # [x,y] = y
    with pytest.raises(InvalidLieRing, match="not nilpotent"):
        NilLieRing(5, (1, 1), C)


def test_jacobi_failure_named():
    C = np.zeros((3, 3, 3), np.int64)
    C[0, 1, 2], C[1, 0, 2] = 1, 4
    C[1, 2, 0], C[2, 1, 0] = 1, 4
    with pytest.raises(InvalidLieRing):
        NilLieRing(5, (1, 1, 1), C)


def test_order_compatibility():
    C = np.zeros((2, 2, 2), np.int64)
    C[0, 1, 1], C[1, 0, 1] = 1, 24
    with pytest.raises(InvalidLieRing):
        NilLieRing(5, (1, 2), C)


def test_quotient_by_center_is_abelian():
    L = heisenberg(5)
    q = quotient_map(L, L.center())
    assert q.target.exps == (1, 1) and not q.target.C.any()
    for v in L.elements()[::7]:
        assert np.array_equal(q(q.lift(q(v))), q(v))


def test_subring_and_ideal_closures_match_enumeration():
    L = free_nilpotent(2, 3, 5)
    x = L.basis_vector(0)
    y = L.basis_vector(1)
    S = L.subring_closure([x, y])
    assert S.order() == L.size
    I = L.ideal_closure([L.bracket(x, y)])
    assert L.is_ideal(I)
    # the derived ideal of free23 is spanned by the three bracket words
    assert I.order() == 125
    brute = closure(np.vstack([I.generators]).tolist(), L.orders)
    assert len(brute) == 125


def test_subring_ring_inclusion_is_hom():
    L = heisenberg(5)
    S = L.span([[1, 0, 0], [0, 0, 1]])
    R, basis = subring_ring(L, S)
    assert R.rank == 2 and not R.C.any()
    with pytest.raises(ValueError):
        subring_ring(L, L.span([[1, 0, 0], [0, 1, 0]]))


def test_direct_sum_class():
    L = direct_sum(heisenberg(5), abelian(5, (2,)))
    assert L.rank == 4 and L.nilpotency_class() == 2 and L.size == 5**5


def test_index_round_trip():
    L = abelian(5, (1, 2))
    idx = np.arange(L.size)
    assert np.array_equal(L.index(L.element(idx)), idx)
    assert L.element(1).tolist() == [0, 1]
