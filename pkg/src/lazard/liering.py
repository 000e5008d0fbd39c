"""Finite nilpotent Lie rings over the chain Z/p^e, given by structure constants."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import freelie
from .ring import Subquotient, Submodule, is_prime, reduce_mod


class NotNilpotent(ValueError):
    pass


class InvalidLieRing(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations[:5]))


class NilLieRing:
    """Lie ring on (+) Z/p^{e_i} with [b_i, b_j] = sum_k C[i, j, k] b_k.

    Elements are int64 coordinate vectors.  Element indices use mixed radix
    with the last coordinate least significant, so index order is
    lexicographic order.
    """

    def __init__(self, p, exps, constants=None, labels=None, check=True):
        self.p = int(p)
        self.exps = tuple(int(e) for e in exps)
        r = len(self.exps)
        self.labels = tuple(labels) if labels is not None else tuple(f"b{i + 1}" for i in range(r))
        if len(self.labels) != r:
            raise ValueError("label count does not match rank")
        C = np.zeros((r, r, r), np.int64) if constants is None else np.array(constants, np.int64)
        if C.shape != (r, r, r):
            raise ValueError(f"structure constants must have shape {(r, r, r)}")
        self.orders = np.array([self.p**e for e in self.exps], dtype=np.int64)
        self._raw = C.copy()
        C = C % self.orders if r else C
        C.setflags(write=False)
        self.C = C
        self.orders.setflags(write=False)
        if check:
            bad = self.violations()
            if bad:
                raise InvalidLieRing(bad)

    # -------------------------------------------------------------- basics
    @property
    def rank(self) -> int:
        return len(self.exps)

    @property
    def size(self) -> int:
        return self.p ** sum(self.exps)

    @property
    def E(self) -> int:
        return max(self.exps, default=1)

    def __repr__(self):
        return f"NilLieRing(p={self.p}, exps={self.exps}, labels={self.labels})"

    def __eq__(self, other):
        return (
            isinstance(other, NilLieRing)
            and self.p == other.p
            and self.exps == other.exps
            and np.array_equal(self.C, other.C)
        )

    def __hash__(self):
        return hash((self.p, self.exps, self.C.tobytes()))

    def reduce(self, v) -> np.ndarray:
        return np.asarray(v, dtype=np.int64) % self.orders

    def zero(self) -> np.ndarray:
        return np.zeros(self.rank, np.int64)

    def basis_vector(self, i) -> np.ndarray:
        v = self.zero()
        v[i] = 1
        return v

    def add(self, u, v):
        return (np.asarray(u) + np.asarray(v)) % self.orders

    def neg(self, u):
        return (-np.asarray(u)) % self.orders

    def scale(self, q, u):
        """Multiply by an integer or a p-local rational."""
        if isinstance(q, Fraction):
            from .ring import local_int

            q = local_int(q, self.p, self.E)
        return (int(q) % self.p**self.E * np.asarray(u, np.int64)) % self.orders

    def bracket(self, u, v) -> np.ndarray:
        u = np.asarray(u, np.int64)
        v = np.asarray(v, np.int64)
        if u.ndim == 2 or v.ndim == 2:
            return self.bracket_batch(np.atleast_2d(u), np.atleast_2d(v))
        uv = np.outer(u, v) % self.p**self.E
        return np.einsum("ij,ijk->k", uv, self.C) % self.orders

    def bracket_batch(self, U, V) -> np.ndarray:
        U = np.asarray(U, np.int64)
        V = np.asarray(V, np.int64)
        uv = (U[:, :, None] * V[:, None, :]) % self.p**self.E
        return np.einsum("nij,ijk->nk", uv, self.C) % self.orders

    def evaluate_tree(self, tree, gens):
        if isinstance(tree, int):
            return gens[tree]
        return self.bracket(self.evaluate_tree(tree[0], gens), self.evaluate_tree(tree[1], gens))

    # ------------------------------------------------------------ indexing
    @cached_property
    def _radix(self) -> np.ndarray:
        w = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.orders[i + 1]
        return w

    def index(self, v):
        v = np.asarray(v, np.int64) % self.orders
        return v @ self._radix if v.ndim > 1 else int(v @ self._radix)

    def element(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._radix) % self.orders

    def elements(self) -> np.ndarray:
        return self.element(np.arange(self.size, dtype=np.int64))

    # ---------------------------------------------------------- validation
    def violations(self) -> list[str]:
        out = []
        p, r, L = self.p, self.rank, self.labels
        if not is_prime(p):
            out.append(f"p={p} is not prime")
            return out
        if any(e < 1 for e in self.exps):
            out.append("exponents must be >= 1")
            return out
        if np.any(self._raw != self.C):
            i, j, k = map(int, np.argwhere(self._raw != self.C)[0])
            out.append(f"constant c[{L[i]},{L[j]}]^{L[k]} not reduced mod {self.orders[k]}")
        C = self.C
        for i in range(r):
            if np.any(C[i, i]):
                out.append(f"alternation violated at ({L[i]},{L[i]})")
            for j in range(r):
                if i != j and np.any((C[i, j] + C[j, i]) % self.orders):
                    out.append(f"antisymmetry violated at ({L[j]},{L[i]})")
                m = p ** min(self.exps[i], self.exps[j])
                for k in range(r):
                    if (m * int(C[i, j, k])) % int(self.orders[k]):
                        out.append(f"order compatibility violated at ({L[i]},{L[j]}) -> {L[k]}")
        if out:
            return out
        jac = self._jacobi_tensor()
        for i, j, k in np.argwhere(np.any(jac, axis=3)):
            out.append(f"Jacobi violated on ({L[i]},{L[j]},{L[k]})")
            break
        if not out:
            try:
                self.nilpotency_class()
            except NotNilpotent:
                out.append("not nilpotent")
        return out

    def validate(self) -> list[str]:
        return self.violations()

    def _jacobi_tensor(self):
        # J[i,j,k] = [b_i,[b_j,b_k]] + [b_j,[b_k,b_i]] + [b_k,[b_i,b_j]]
        C = self.C
        T = np.einsum("jkm,imn->ijkn", C, C)
        J = T + np.transpose(T, (1, 2, 0, 3)) + np.transpose(T, (2, 0, 1, 3))
        return J % self.orders

    # -------------------------------------------------------- substructures
    def span(self, gens) -> Submodule:
        g = np.asarray(gens, np.int64)
        g = g.reshape(-1, self.rank) if self.rank else np.zeros((0, 0), np.int64)
        return Submodule(g, self.exps, self.p)

    def full(self) -> Submodule:
        return self.span(np.eye(self.rank, dtype=np.int64))

    def _bracket_span(self, A: Submodule, B: Submodule) -> Submodule:
        ga, gb = A.generators, B.generators
        if len(ga) == 0 or len(gb) == 0:
            return self.span(np.zeros((0, self.rank), np.int64))
        U = np.repeat(ga, len(gb), axis=0)
        V = np.tile(gb, (len(ga), 1))
        return self.span(self.bracket_batch(U, V))

    def bracket_span(self, A, B) -> Submodule:
        """Additive span of [A, B]."""
        A = A if isinstance(A, Submodule) else self.span(A)
        B = B if isinstance(B, Submodule) else self.span(B)
        return self._bracket_span(A, B)

    def ideal_closure(self, S) -> Submodule:
        cur = S if isinstance(S, Submodule) else self.span(S)
        full = self.full()
        while True:
            nxt = cur + self._bracket_span(cur, full)
            if nxt == cur:
                return cur
            cur = nxt

    def subring_closure(self, S) -> Submodule:
        cur = S if isinstance(S, Submodule) else self.span(S)
        while True:
            nxt = cur + self._bracket_span(cur, cur)
            if nxt == cur:
                return cur
            cur = nxt

    def is_subring(self, S: Submodule) -> bool:
        return S.contains_all(self._bracket_span(S, S))

    def is_ideal(self, S: Submodule) -> bool:
        return S.contains_all(self._bracket_span(S, self.full()))

    def lower_central_series(self) -> list[Submodule]:
        series = [self.full()]
        for _ in range(sum(self.exps) + 2):
            if series[-1].is_zero():
                return series
            series.append(self._bracket_span(series[-1], self.full()))
        raise NotNilpotent("lower central series did not reach 0")

    def nilpotency_class(self) -> int:
        if self.rank == 0:
            return 0
        return len(self.lower_central_series()) - 1 if self.size > 1 else 0

    def center(self) -> Submodule:
        from .ring import kernel

        # z is central iff [z, b_j] = 0 for all j: linear map z -> ([z,b_j])_j
        r = self.rank
        A = np.zeros((r * r, r), np.int64)
        for j in range(r):
            A[j * r:(j + 1) * r, :] = self.C[:, j, :].T
        return self.span(kernel(A, self.exps, list(self.exps) * r, self.p))


@dataclass(frozen=True)
class QuotientMap:
    """L -> L/I with projection matrix and a section of representatives."""

    source: NilLieRing
    target: NilLieRing
    matrix: np.ndarray  # source.rank x target.rank
    section: np.ndarray  # target.rank x source.rank
    ideal: Submodule

    def __call__(self, v):
        v = np.asarray(v, np.int64)
        return (v @ self.matrix) % self.target.orders

    def lift(self, w):
        w = np.asarray(w, np.int64)
        return (w @ self.section) % self.source.orders


def quotient_map(L: NilLieRing, ideal) -> QuotientMap:
    I = ideal if isinstance(ideal, Submodule) else L.span(ideal)
    if not L.is_ideal(I):
        raise ValueError("quotient by a non-ideal")
    eye = np.eye(L.rank, dtype=np.int64)
    sq = Subquotient(eye, I.generators, L.exps, L.p)
    reps = sq.representatives
    exps = sq.exponents
    r = len(exps)
    P = np.array([sq.coords(eye[i]) for i in range(L.rank)], dtype=np.int64).reshape(L.rank, r)
    mod = np.array([L.p**e for e in exps], np.int64)
    C = np.zeros((r, r, r), np.int64)
    for s in range(r):
        for t in range(r):
            C[s, t] = (L.bracket(reps[s], reps[t]) @ P) % mod if r else 0
    labels = [f"q{i + 1}" for i in range(r)]
    Q = NilLieRing(L.p, exps, C, labels)
    return QuotientMap(L, Q, P, reps.reshape(r, L.rank), I)


def quotient_ring(L: NilLieRing, ideal) -> NilLieRing:
    return quotient_map(L, ideal).target


def direct_sum(L1: NilLieRing, L2: NilLieRing) -> NilLieRing:
    if L1.p != L2.p:
        raise ValueError("direct sum needs a common prime")
    r1, r2 = L1.rank, L2.rank
    C = np.zeros((r1 + r2,) * 3, np.int64)
    C[:r1, :r1, :r1] = L1.C
    C[r1:, r1:, r1:] = L2.C
    labels = [f"{a}'" if a in L2.labels else a for a in L1.labels] + list(L2.labels)
    if len(set(labels)) != len(labels):
        labels = [f"a{i + 1}" for i in range(r1)] + [f"b{i + 1}" for i in range(r2)]
    return NilLieRing(L1.p, L1.exps + L2.exps, C, labels)


def subring_ring(L: NilLieRing, S: Submodule) -> tuple[NilLieRing, np.ndarray]:
    """A subring as a NilLieRing together with its inclusion matrix."""
    if not L.is_subring(S):
        raise ValueError("not a subring")
    sq = Subquotient(S.generators, np.zeros((0, L.rank), np.int64), L.exps, L.p)
    basis = sq.representatives
    r = len(sq.exponents)
    C = np.zeros((r, r, r), np.int64)
    mod = np.array(sq.moduli, np.int64)
    for s in range(r):
        for t in range(r):
            C[s, t] = sq.coords(L.bracket(basis[s], basis[t])) % mod
    return NilLieRing(L.p, sq.exponents, C, [f"s{i + 1}" for i in range(r)]), basis


# --------------------------------------------------------------- builders

def abelian(p, orders) -> NilLieRing:
    return NilLieRing(p, orders)


def heisenberg(p, e=1) -> NilLieRing:
    C = np.zeros((3, 3, 3), np.int64)
    C[0, 1, 2] = 1
    C[1, 0, 2] = p**e - 1
    return NilLieRing(p, (e, e, e), C, ("x", "y", "z"))


def free_nilpotent(n_gens, c, p, e=1) -> NilLieRing:
    words = freelie.lyndon_words(n_gens, c)
    pos = {w: i for i, w in enumerate(words)}
    r = len(words)
    C = np.zeros((r, r, r), np.int64)
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            if i == j or len(u) + len(v) > c:
                continue
            cut = len(u) + len(v)
            prod = freelie.lie_bracket(
                freelie.expand_bracket(freelie.bracketing(u), cut),
                freelie.expand_bracket(freelie.bracketing(v), cut),
            )
            for w, q in freelie.project_to_lie(prod, cut).items():
                assert q.denominator == 1
                C[i, j, pos[w]] = int(q) % p**e
    letters = freelie.LETTERS if n_gens <= len(freelie.LETTERS) else None
    labels = [
        (freelie.word_str(w, letters) if letters else "_".join(map(str, w))) for w in words
    ]
    return NilLieRing(p, (e,) * r, C, labels)
