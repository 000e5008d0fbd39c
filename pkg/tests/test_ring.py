from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lazard import kernels
from lazard.ring import (
    InvariantFactors,
    LinearSolver,
    MixedModuli,
    PAdicPole,
    PMatrix,
    PModInt,
    Submodule,
    Subquotient,
    howell_form,
    kernel,
    quotient_invariants,
    reduce_local,
    solve_linear,
    subgroup_invariants,
    valuation,
)

from oracles import closure, invariants_of

P = 5


@st.composite
def mixed_module(draw, max_rank=3, max_exp=2):
    exps = draw(st.lists(st.integers(1, max_exp), min_size=1, max_size=max_rank))
    k = draw(st.integers(0, 3))
    mods = [P**e for e in exps]
    gens = [[draw(st.integers(0, m - 1)) for m in mods] for _ in range(k)]
    return exps, np.array(gens, np.int64).reshape(k, len(exps))


def test_pmodint_arithmetic():
    a = PModInt(7, 5, 2)
    assert int(a + 20) == 2
    assert int(a * a.inverse()) == 1
    with pytest.raises(ZeroDivisionError):
        PModInt(10, 5, 2).inverse()
    with pytest.raises(MixedModuli):
        a + PModInt(1, 5, 1)


def test_reduce_local_and_pole():
    assert reduce_local(Fraction(1, 2), 5).value == 3
    with pytest.raises(PAdicPole):
        reduce_local(Fraction(1, 5), 5)
    assert valuation(250, 5) == 3


def test_invariant_factors_normalize():
    f = InvariantFactors((5, 1, 25))
    assert f.factors == (25, 5) and f.order == 125 and f == [5, 25]


@given(mixed_module())
def test_subgroup_invariants_match_enumeration(data):
    exps, gens = data
    mods = [P**e for e in exps]
    els = closure(gens.tolist(), mods)
    assert list(subgroup_invariants(gens, exps, P)) == sorted(invariants_of(els, mods, P), reverse=True)
    assert Submodule(gens, exps, P).order() == len(els)


@given(mixed_module())
def test_quotient_invariants_order(data):
    exps, gens = data
    mods = [P**e for e in exps]
    n = len(closure(gens.tolist(), mods))
    total = int(np.prod(mods))
    assert quotient_invariants(gens, exps, P).order == total // n


@given(mixed_module())
def test_submodule_membership_is_exact(data):
    exps, gens = data
    mods = [P**e for e in exps]
    S = Submodule(gens, exps, P)
    els = closure(gens.tolist(), mods)
    for v in np.ndindex(*mods):
        assert S.contains(np.array(v)) == (tuple(v) in els)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 2), st.data())
def test_kernel_and_solver(n, m, e, data):
    mod = P**e
    A = np.array(data.draw(st.lists(st.integers(0, mod - 1), min_size=n * m, max_size=n * m))).reshape(m, n)
    K = kernel(A, [e] * n, [e] * m, P)
    assert not ((A @ K.T) % mod).any() if K.size else True
    # the kernel has the right size: |ker| * |im| = |domain|
    img = closure(A.T.tolist(), [mod] * m)
    ker = closure(K.tolist(), [mod] * n) if K.size else {tuple([0] * n)}
    assert len(ker) * len(img) == mod**n
    x = np.array(data.draw(st.lists(st.integers(0, mod - 1), min_size=n, max_size=n)))
    b = (A @ x) % mod
    sol = LinearSolver(A, [e] * n, [e] * m, P).solve(b)
    assert sol is not None and np.array_equal((A @ sol) % mod, b)


def test_solve_linear_no_solution():
    A = PMatrix([[5]], 5, 2)
    assert solve_linear(A, [1]) is None
    s = solve_linear(A, [10])
    assert (5 * int(s.particular[0])) % 25 == 10


def test_howell_form_transform():
    A = PMatrix(np.array([[5, 10, 3], [10, 20, 6], [0, 5, 1]]), 5, 2)
    H, U = howell_form(A)
    assert H == U @ A


@given(mixed_module())
def test_subquotient_order(a):
    exps, z = a
    B = (z[:1] * P) if len(z) else np.zeros((0, len(exps)), np.int64)
    sq = Subquotient(z, B, exps, P)
    mods = [P**e for e in exps]
    nz = len(closure(z.tolist(), mods))
    nb = len(closure(B.tolist(), mods))
    assert sq.order == nz // nb
    for r in sq.representatives:
        c = sq.coords(r)
        assert sq.is_zero((r - sq.element(c)) % np.array(mods))


@pytest.mark.parametrize("use_numba", [False, True])
def test_kernel_paths_agree(use_numba):
    rng = np.random.default_rng(1)
    A = rng.integers(0, 25, size=(12, 9))
    W0, r0 = kernels.howell(A, 5, 2, use_numba=False)
    W1, r1 = kernels.howell(A, 5, 2, use_numba=use_numba)
    assert r0 == r1 and np.array_equal(W0, W1)
    v0 = kernels.smith(A, 5, 2, use_numba=False)
    v1 = kernels.smith(A, 5, 2, use_numba=use_numba)
    assert all(np.array_equal(x, y) for x, y in zip(v0, v1))
