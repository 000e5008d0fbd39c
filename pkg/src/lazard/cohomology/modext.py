"""Degree-1 classes as module extensions 0 -> M -> X -> Z/p^N -> 0.

A derivation (or crossed hom) f gives X_f = M (+) Z/p^N with the acting
element a sending (m, z) to (psi(a) m + z f(a), 0) on the Lie side, and g
sending (m, z) to (phi(g) m + z f(g), z) on the group side.  N is the
exponent of M, so the finite cyclic quotient stands in for Z_p.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ring import LinearSolver, Subquotient, kernel
from ..triples import GroupTriple, LieTriple, PModule


@dataclass
class ModuleExtension:
    """X with acting matrices, iota: M -> X (columns), proj: X -> Z/p^N (a row).

    ``actions`` holds psi(b_i) for Lie basis elements, or phi(g) for every
    group element index, as endomorphisms of X.
    """

    X: PModule
    actions: np.ndarray
    iota: np.ndarray
    proj: np.ndarray
    N: int
    side: str

    def lift_of_one(self):
        sol = LinearSolver(self.proj.reshape(1, -1), self.X.exps, (self.N,), self.X.p).solve(np.array([1]))
        if sol is None:
            raise ValueError("projection is not surjective")
        return self.X.reduce(sol)


def _N(M: PModule) -> int:
    return M.F if M.rank else 1


def _block(A, col, M: PModule, N, group: bool):
    """[[A, col], [0, 1 or 0]] as an endomorphism of M (+) Z/p^N."""
    m = M.rank
    out = np.zeros((m + 1, m + 1), np.int64)
    out[:m, :m] = A
    out[:m, m] = col
    out[m, m] = 1 if group else 0
    return out


def extended_module(M: PModule) -> PModule:
    return PModule(M.p, tuple(M.exps) + (_N(M),))


def module_extension_lie(T: LieTriple, u) -> ModuleExtension:
    """X_f for a derivation given by its values on the basis (r x m)."""
    M = T.M
    u = np.asarray(u, np.int64).reshape(T.L.rank, M.rank) % M.orders
    N = _N(M)
    X = extended_module(M)
    acts = np.array([_block(T.psi[i], u[i], M, N, False) for i in range(T.L.rank)], np.int64)
    iota = np.vstack([np.eye(M.rank, dtype=np.int64), np.zeros((1, M.rank), np.int64)])
    proj = np.zeros(M.rank + 1, np.int64)
    proj[-1] = 1
    return ModuleExtension(X, acts.reshape(T.L.rank, M.rank + 1, M.rank + 1), iota, proj, N, "lie")


def module_extension_group(T: GroupTriple, F) -> ModuleExtension:
    """X_f for a crossed hom given as a full table G -> M."""
    M = T.M
    F = np.asarray(F, np.int64).reshape(T.G.size, M.rank) % M.orders
    N = _N(M)
    X = extended_module(M)
    acts = np.zeros((T.G.size, M.rank + 1, M.rank + 1), np.int64)
    acts[:, :M.rank, :M.rank] = T.phi
    acts[:, :M.rank, M.rank] = F
    acts[:, M.rank, M.rank] = 1
    iota = np.vstack([np.eye(M.rank, dtype=np.int64), np.zeros((1, M.rank), np.int64)])
    proj = np.zeros(M.rank + 1, np.int64)
    proj[-1] = 1
    return ModuleExtension(X, acts, iota, proj, N, "group")


def lie_triple_of(T: LieTriple, ext: ModuleExtension) -> LieTriple:
    return LieTriple(T.L, ext.X, ext.actions, T.name)


def group_triple_of(T: GroupTriple, ext: ModuleExtension) -> GroupTriple:
    return GroupTriple(T.G, ext.X, ext.actions, T.name)


def _inv_iota(ext: ModuleExtension, M: PModule):
    solver = LinearSolver(ext.iota, M.exps, ext.X.exps, M.p)

    def inv(v):
        x = solver.solve(ext.X.reduce(v))
        if x is None:
            raise ValueError("vector is not in the image of M")
        return M.reduce(x)

    return inv


def _check_kernel_action(T, ext, mats, M):
    inv = _inv_iota(ext, M)
    for A, B in zip(mats, (T.psi if ext.side == "lie" else T.phi)):
        for q in range(M.rank):
            img = inv(A @ ext.iota[:, q])
            if not np.array_equal(img, B[:, q] % M.orders):
                raise ValueError("extension induces a different action on M")
    return inv


def derivation_from_extension(T: LieTriple, ext: ModuleExtension) -> np.ndarray:
    """f(b_i) = psi~(b_i) x for a lift x of 1, as a flat vector."""
    M = T.M
    inv = _check_kernel_action(T, ext, ext.actions, M)
    x = ext.lift_of_one()
    rows = [inv(ext.actions[i] @ x) for i in range(T.L.rank)]
    return np.array(rows, np.int64).reshape(-1)


def crossed_hom_from_extension(T: GroupTriple, ext: ModuleExtension) -> np.ndarray:
    """Full table f(g) = g.x - x for a lift x of 1."""
    M = T.M
    inv = _check_kernel_action(T, ext, ext.actions, M)
    x = ext.lift_of_one()
    d = (np.einsum("gij,j->gi", ext.actions, x) - x) % ext.X.orders
    return np.array([inv(v) for v in d], np.int64).reshape(T.G.size, M.rank)


def baer_sum_module(x: ModuleExtension, y: ModuleExtension, M: PModule) -> ModuleExtension:
    """Pull back over Z/p^N, then divide by the anti-diagonal {(iota1 m, -iota2 m)}."""
    if x.N != y.N or x.side != y.side or x.actions.shape[0] != y.actions.shape[0]:
        raise ValueError("boundary data differ")
    p = M.p
    D = PModule(p, x.X.exps + y.X.exps)
    n1 = x.X.rank
    K = np.concatenate([x.proj, -y.proj]).reshape(1, -1)
    pull = kernel(K, D.exps, (x.N,), p)
    anti = np.hstack([x.iota.T, -y.iota.T]) % D.orders
    sq = Subquotient(pull, anti, D.exps, p)
    reps = sq.representatives
    Q = PModule(p, sq.exponents)

    def act(A1, A2):
        cols = []
        for v in reps:
            w = np.concatenate([A1 @ v[:n1], A2 @ v[n1:]]) % D.orders
            cols.append(sq.coords(w))
        return np.array(cols, np.int64).T.reshape(Q.rank, Q.rank)

    acts = np.array([act(a, b) for a, b in zip(x.actions, y.actions)], np.int64)
    iota = np.array(
        [sq.coords(np.concatenate([x.iota[:, q], np.zeros(y.X.rank, np.int64)])) for q in range(M.rank)],
        np.int64,
    ).T.reshape(Q.rank, M.rank)
    proj = (reps[:, :n1] @ x.proj) % (p**x.N)
    return ModuleExtension(Q, acts.reshape(-1, Q.rank, Q.rank), iota, proj.reshape(-1), x.N, x.side)
