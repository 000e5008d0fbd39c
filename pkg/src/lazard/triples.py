"""Triples (L, M, psi) and (G, M, phi), their morphisms, and Exp / Log.

Module elements are column vectors in (+) Z/p^{f_i}; action matrices act on
the left.  Ring maps (the alpha of a morphism) act on row vectors: v -> v @ A.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .bchgroup import CayleyGroup, FiniteGroup, LazardGroup
from .liering import NilLieRing, abelian, free_nilpotent, heisenberg
from .ring import Submodule, local_int


class OutsideLazardRange(ValueError):
    """Raised when c >= p or d >= p."""


class NotUnipotent(ValueError):
    pass


class InvalidTriple(ValueError):
    pass


class PModule:
    """The finite abelian p-group (+) Z/p^{f_i}."""

    def __init__(self, p, exps):
        self.p = int(p)
        self.exps = tuple(int(f) for f in exps)
        self.orders = np.array([self.p**f for f in self.exps], np.int64)
        self.orders.setflags(write=False)

    @property
    def rank(self):
        return len(self.exps)

    @property
    def size(self):
        return self.p ** sum(self.exps)

    @property
    def F(self):
        return max(self.exps, default=1)

    def __eq__(self, other):
        return isinstance(other, PModule) and (self.p, self.exps) == (other.p, other.exps)

    def __hash__(self):
        return hash((self.p, self.exps))

    def __repr__(self):
        return f"PModule(p={self.p}, exps={self.exps})"

    def reduce(self, v):
        return np.asarray(v, np.int64) % self.orders

    def reduce_matrix(self, A, cod: "PModule | None" = None):
        cod = cod or self
        return np.asarray(A, np.int64) % cod.orders[:, None]

    def identity(self):
        return np.eye(self.rank, dtype=np.int64)

    def is_hom(self, A, cod: "PModule | None" = None) -> bool:
        """A (cod x dom) is well defined on (+) Z/p^{f_j}."""
        cod = cod or self
        A = np.asarray(A, np.int64)
        if A.shape != (cod.rank, self.rank):
            return False
        for i in range(cod.rank):
            for j in range(self.rank):
                if (int(A[i, j]) * int(self.orders[j])) % int(cod.orders[i]):
                    return False
        return True

    def matmul(self, A, B):
        """Product of endomorphism matrices, reduced row-wise."""
        return np.matmul(A, B) % self.orders[:, None]

    def apply(self, A, m):
        return (np.asarray(A) @ np.asarray(m, np.int64)) % self.orders

    def elements(self):
        n = self.size
        idx = np.arange(n, dtype=np.int64)
        out = np.zeros((n, self.rank), np.int64)
        for i in range(self.rank - 1, -1, -1):
            out[:, i] = idx % self.orders[i]
            idx //= self.orders[i]
        return out

    def index(self, v):
        v = np.asarray(v, np.int64) % self.orders
        w = 1
        out = np.zeros(v.shape[:-1], np.int64)
        for i in range(self.rank - 1, -1, -1):
            out = out + v[..., i] * w
            w *= int(self.orders[i])
        return out

    def span(self, gens) -> Submodule:
        g = np.asarray(gens, np.int64)
        g = g.reshape(-1, self.rank) if self.rank else np.zeros((0, 0), np.int64)
        return Submodule(g, self.exps, self.p)

    def full(self) -> Submodule:
        return self.span(np.eye(self.rank, dtype=np.int64))


def _series(A, mod: PModule, coefs):
    """sum_k coefs[k] A^k for a batch of matrices A (..., r, r)."""
    r = mod.rank
    PF = mod.p ** mod.F
    out = np.broadcast_to(np.eye(r, dtype=np.int64), A.shape).copy() * 0
    power = np.broadcast_to(np.eye(r, dtype=np.int64), A.shape).copy()
    for k, q in enumerate(coefs):
        if k:
            power = np.matmul(power, A) % mod.orders[:, None]
        if q:
            out = (out + (q % PF) * power) % mod.orders[:, None]
    return out


def mat_exp(A, mod: PModule):
    p = mod.p
    coefs = [local_int(Fraction(1, factorial(k)), p, mod.F) for k in range(p)]
    return _series(np.asarray(A, np.int64), mod, coefs)


def mat_log(Phi, mod: PModule):
    p = mod.p
    A = (np.asarray(Phi, np.int64) - np.eye(mod.rank, dtype=np.int64)) % mod.orders[:, None]
    coefs = [0] + [local_int(Fraction((-1) ** (k + 1), k), p, mod.F) for k in range(1, p)]
    return _series(A, mod, coefs)


def _chain(M: PModule, step) -> list[Submodule]:
    chain = [M.full()]
    while not chain[-1].is_zero():
        nxt = step(chain[-1])
        if nxt == chain[-1]:
            raise NotUnipotent("action is not unipotent")
        chain.append(nxt)
    return chain


# ------------------------------------------------------------ Lie triples

@dataclass(frozen=True, eq=False)
class LieTriple:
    L: NilLieRing
    M: PModule
    psi: np.ndarray  # (rank L, rank M, rank M)
    name: str = ""

    def __post_init__(self):
        psi = np.asarray(self.psi, np.int64).reshape(self.L.rank, self.M.rank, self.M.rank)
        psi = psi % self.M.orders[:, None] if self.M.rank else psi
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        bad = self.violations()
        if bad:
            raise InvalidTriple("; ".join(bad))

    def violations(self) -> list[str]:
        L, M, psi = self.L, self.M, self.psi
        out = []
        if L.p != M.p:
            return ["ring and module primes differ"]
        for i in range(L.rank):
            if not M.is_hom(psi[i]):
                out.append(f"psi({L.labels[i]}) is not a module endomorphism")
            elif np.any((int(L.orders[i]) * psi[i]) % M.orders[:, None]):
                out.append(f"p^e * psi({L.labels[i]}) != 0")
        if out:
            return out
        for i in range(L.rank):
            for j in range(i + 1, L.rank):
                lhs = self.psi_of(L.C[i, j])
                rhs = (M.matmul(psi[i], psi[j]) - M.matmul(psi[j], psi[i])) % M.orders[:, None]
                if not np.array_equal(lhs, rhs):
                    out.append(f"psi not bracket compatible on ({L.labels[i]},{L.labels[j]})")
        if not out:
            try:
                self.action_length()
            except NotUnipotent:
                out.append("action is not unipotent")
        return out

    def psi_of(self, a):
        """psi(a) for one element or a batch (n, rank L)."""
        a = np.asarray(a, np.int64)
        PF = self.M.p ** self.M.F
        # reduce the coordinates mod p^F first; sums stay below 2^63
        return np.einsum("...i,ijk->...jk", a % PF, self.psi) % self.M.orders[:, None]

    def chain(self) -> list[Submodule]:
        M, psi = self.M, self.psi

        def step(S: Submodule):
            g = S.generators
            imgs = [M.reduce((psi[i] @ g.T).T) for i in range(self.L.rank)]
            return M.span(np.concatenate(imgs) if imgs else np.zeros((0, M.rank), np.int64))

        return _chain(M, step)

    def action_length(self) -> int:
        return len(self.chain()) - 1

    def __eq__(self, other):
        return (
            isinstance(other, LieTriple)
            and self.L == other.L
            and self.M == other.M
            and np.array_equal(self.psi, other.psi)
        )

    def __hash__(self):
        return hash((self.L, self.M, self.psi.tobytes()))


# ---------------------------------------------------------- group triples

@dataclass(frozen=True, eq=False)
class GroupTriple:
    G: FiniteGroup
    M: PModule
    phi: np.ndarray  # (|G|, rank M, rank M)
    name: str = ""

    def __post_init__(self):
        phi = np.asarray(self.phi, np.int64).reshape(self.G.size, self.M.rank, self.M.rank)
        phi = phi % self.M.orders[:, None] if self.M.rank else phi
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        bad = self.violations()
        if bad:
            raise InvalidTriple("; ".join(bad))

    @classmethod
    def from_generators(cls, G: FiniteGroup, M: PModule, images: dict, name=""):
        """Extend generator images {index: matrix} along a BFS over G."""
        gens = np.array(sorted(images), np.int64)
        phi = np.zeros((G.size, M.rank, M.rank), np.int64)
        seen = np.zeros(G.size, bool)
        phi[G.identity] = M.identity()
        seen[G.identity] = True
        frontier = np.array([G.identity], np.int64)
        while frontier.size:
            nxt = []
            for s in gens:
                prod = G.mul_idx(frontier, s)
                for g, h in zip(frontier, prod):
                    if not seen[h]:
                        seen[h] = True
                        phi[h] = M.matmul(phi[g], images[int(s)])
                        nxt.append(h)
            frontier = np.array(nxt, np.int64)
        if not seen.all():
            raise InvalidTriple("generator images do not reach every group element")
        return cls(G, M, phi, name)

    def violations(self) -> list[str]:
        G, M, phi = self.G, self.M, self.phi
        if M.rank == 0:
            return []
        if not np.array_equal(phi[G.identity], M.identity() % M.orders[:, None]):
            return ["phi(1) != id"]
        for g in range(G.size):
            if not M.is_hom(phi[g]):
                return [f"phi({g}) is not a module endomorphism"]
        idx = np.arange(G.size, dtype=np.int64)
        for s in G.generator_indices():
            lhs = phi[G.mul_idx(idx, s)]
            rhs = np.matmul(phi, phi[s]) % M.orders[:, None]
            bad = np.flatnonzero(np.any(lhs != rhs, axis=(1, 2)))
            if bad.size:
                return [f"phi(gh) != phi(g)phi(h) at g={int(bad[0])}, h={int(s)}"]
        try:
            self.action_length()
        except NotUnipotent:
            return ["action is not unipotent"]
        return []

    def chain(self) -> list[Submodule]:
        M = self.M
        D = (self.phi - M.identity()) % M.orders[:, None]

        def step(S: Submodule):
            g = S.generators
            imgs = np.einsum("nij,kj->nki", D, g).reshape(-1, M.rank)
            return M.span(M.reduce(imgs))

        return _chain(M, step)

    def action_length(self) -> int:
        return len(self.chain()) - 1

    def __eq__(self, other):
        return (
            isinstance(other, GroupTriple)
            and self.G.size == other.G.size
            and self.M == other.M
            and np.array_equal(self.phi, other.phi)
            and _same_carrier(self.G, other.G)
        )

    __hash__ = None


def _same_carrier(a: FiniteGroup, b: FiniteGroup) -> bool:
    # equal rings give equal BCH laws, which avoids building |G|^2 tables
    if isinstance(a, LazardGroup) and isinstance(b, LazardGroup):
        return a.lie == b.lie
    return np.array_equal(a.table(), b.table())


# ---------------------------------------------------------- Exp and Log

def _guard(c, d, p):
    if c >= p or d >= p:
        raise OutsideLazardRange(f"hypothesis violated: needs c < p and d < p (c={c}, d={d}, p={p})")


def exp_triple(T: LieTriple, G: LazardGroup | None = None) -> GroupTriple:
    _guard(T.L.nilpotency_class(), T.action_length(), T.L.p)
    G = G or LazardGroup(T.L)
    els = T.L.elements()
    phi = mat_exp(T.psi_of(els), T.M)
    return GroupTriple(G, T.M, phi, T.name)


def log_triple(T: GroupTriple) -> LieTriple:
    if not isinstance(T.G, LazardGroup):
        raise TypeError("log_triple needs a LazardGroup carrier")
    L = T.G.lie
    _guard(L.nilpotency_class(), T.action_length(), L.p)
    gens = T.G.generator_indices()
    psi = mat_log(T.phi[gens], T.M)
    return LieTriple(L, T.M, psi, T.name)


# -------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class TripleMorphism:
    """alpha: second ring/group -> first; beta: first module -> second.

    On the Lie side alpha is a matrix acting on row vectors; on the group
    side it is an index array of length |G_2| into G_1.  beta is a matrix
    acting on column vectors of M_1.
    """

    alpha: np.ndarray
    beta: np.ndarray


@dataclass
class MorphismReport:
    ok: bool
    witness: tuple | None = None
    reason: str = ""


def _lie_hom_violation(A, L2: NilLieRing, L1: NilLieRing):
    for i in range(L2.rank):
        for k in range(L1.rank):
            if (int(L2.orders[i]) * int(A[i, k])) % int(L1.orders[k]):
                return f"alpha not well defined on {L2.labels[i]}"
    for i in range(L2.rank):
        for j in range(L2.rank):
            lhs = (L2.C[i, j] @ A) % L1.orders
            rhs = L1.bracket(A[i], A[j])
            if not np.array_equal(lhs, rhs):
                return f"alpha does not preserve [{L2.labels[i]},{L2.labels[j]}]"
    return None


def morphism_check(m: TripleMorphism, T1, T2) -> MorphismReport:
    beta = np.asarray(m.beta, np.int64)
    if not T1.M.is_hom(beta, T2.M):
        return MorphismReport(False, None, "beta is not a module homomorphism")
    M2 = T2.M
    if isinstance(T1, LieTriple):
        A = np.asarray(m.alpha, np.int64).reshape(T2.L.rank, T1.L.rank)
        why = _lie_hom_violation(A, T2.L, T1.L)
        if why:
            return MorphismReport(False, None, why)
        for i in range(T2.L.rank):
            lhs = (beta @ T1.psi_of(A[i])) % M2.orders[:, None]
            rhs = (T2.psi[i] @ beta) % M2.orders[:, None]
            cols = np.flatnonzero(np.any(lhs != rhs, axis=0))
            if cols.size:
                m1 = np.zeros(T1.M.rank, np.int64)
                m1[cols[0]] = 1
                return MorphismReport(False, (T2.L.basis_vector(i), m1), "beta not equivariant")
        return MorphismReport(True)
    alpha = np.asarray(m.alpha, np.int64)
    G1, G2 = T1.G, T2.G
    idx = np.arange(G2.size, dtype=np.int64)
    for s in G2.generator_indices():
        if not np.array_equal(alpha[G2.mul_idx(idx, s)], G1.mul_idx(alpha[idx], alpha[s])):
            return MorphismReport(False, None, "alpha is not a homomorphism")
    lhs = np.matmul(beta, T1.phi[alpha]) % M2.orders[:, None]
    rhs = np.matmul(T2.phi, beta) % M2.orders[:, None]
    diff = np.any(lhs != rhs, axis=1)
    bad = np.argwhere(diff)
    if bad.size:
        g2, j = map(int, bad[0])
        m1 = np.zeros(T1.M.rank, np.int64)
        m1[j] = 1
        return MorphismReport(False, (g2, m1), "beta not equivariant")
    return MorphismReport(True)


def identity_morphism(T) -> TripleMorphism:
    if isinstance(T, LieTriple):
        return TripleMorphism(np.eye(T.L.rank, dtype=np.int64), T.M.identity())
    return TripleMorphism(np.arange(T.G.size, dtype=np.int64), T.M.identity())


def compose(m: TripleMorphism, m2: TripleMorphism, T3_side: str = "lie") -> TripleMorphism:
    """m: T1 -> T2, m2: T2 -> T3; returns T1 -> T3."""
    beta = np.asarray(m2.beta) @ np.asarray(m.beta)
    if T3_side == "lie":
        return TripleMorphism(np.asarray(m2.alpha) @ np.asarray(m.alpha), beta)
    return TripleMorphism(np.asarray(m.alpha)[np.asarray(m2.alpha)], beta)


def exp_morphism(m: TripleMorphism, L2: NilLieRing, L1: NilLieRing) -> TripleMorphism:
    A = np.asarray(m.alpha, np.int64)
    els = L2.elements()
    return TripleMorphism(L1.index((els @ A) % L1.orders), np.asarray(m.beta))


def log_morphism(m: TripleMorphism, G2: LazardGroup, G1: LazardGroup) -> TripleMorphism:
    alpha = np.asarray(m.alpha, np.int64)
    A = np.array([G1.to_element(alpha[g]) for g in G2.generator_indices()], np.int64)
    return TripleMorphism(A.reshape(G2.rank, G1.rank), np.asarray(m.beta))


# ---------------------------------------------------- standard examples

def trivial_triple(L: NilLieRing, mexps, name="") -> LieTriple:
    M = PModule(L.p, mexps)
    return LieTriple(L, M, np.zeros((L.rank, M.rank, M.rank), np.int64), name)


def adjoint_triple(L: NilLieRing, name="") -> LieTriple:
    M = PModule(L.p, L.exps)
    psi = np.transpose(L.C, (0, 2, 1))  # ad(b_i)[k, j] = c_{ij}^k
    return LieTriple(L, M, psi, name)


def jordan_triple(L: NilLieRing, f=1, name="") -> LieTriple:
    """psi(b_1) = E_12 on (Z/p^f)^2, other basis elements act by 0."""
    M = PModule(L.p, (f, f))
    psi = np.zeros((L.rank, 2, 2), np.int64)
    psi[0, 0, 1] = 1
    return LieTriple(L, M, psi, name)


def heisenberg_standard_triple(p, name="") -> LieTriple:
    """x -> E12, y -> E23, z -> E13 on (Z/p)^3."""
    L = heisenberg(p, 1)
    psi = np.zeros((3, 3, 3), np.int64)
    psi[0, 0, 1] = 1
    psi[1, 1, 2] = 1
    psi[2, 0, 2] = 1
    return LieTriple(L, PModule(p, (1, 1, 1)), psi, name)


def conjugation_triple(G: LazardGroup, N, name="") -> GroupTriple:
    """G acting on an abelian normal subgroup N by g . n = g n g^-1."""
    from .liering import subring_ring

    L = G.lie
    S = L.span(G.to_element(np.asarray(N, np.int64)))
    R, basis = subring_ring(L, S)
    if R.C.any():
        raise InvalidTriple("N is not abelian")
    M = PModule(L.p, R.exps)
    from .ring import Subquotient

    sq = Subquotient(basis, np.zeros((0, L.rank), np.int64), L.exps, L.p)
    gens = G.generator_indices()
    images = {}
    for g in gens:
        ge = G.to_element(g)
        cols = [sq.coords(G.mul(G.mul(ge, b), G.inv(ge))) for b in basis]
        images[int(g)] = np.array(cols, np.int64).T.reshape(M.rank, M.rank)
    return GroupTriple.from_generators(G, M, images, name)


def triple_zoo(primes=(5, 7)) -> list[LieTriple]:
    """A deterministic family of small valid triples with c, d < p."""
    out = []
    for p in primes:
        rings = [
            ("ab1", abelian(p, [1])),
            ("ab11", abelian(p, [1, 1])),
            ("ab2", abelian(p, [2])),
            ("ab12", abelian(p, [1, 2])),
            ("heis", heisenberg(p, 1)),
            ("free23", free_nilpotent(2, 3, p, 1)),
        ]
        for rname, L in rings:
            out.append(trivial_triple(L, (1,), f"{rname}/triv1/p{p}"))
            out.append(trivial_triple(L, (1, 1), f"{rname}/triv11/p{p}"))
            out.append(trivial_triple(L, (2,), f"{rname}/triv2/p{p}"))
            out.append(jordan_triple(L, 1, f"{rname}/jordan/p{p}"))
            out.append(adjoint_triple(L, f"{rname}/adjoint/p{p}"))
        out.append(heisenberg_standard_triple(p, f"heis/std/p{p}"))
    return out
