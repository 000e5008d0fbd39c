"""Inflation, restriction and transgression with trivial F_p coefficients.

    0 -> H^1(G/N) -> H^1(G) -> H^1(N)^{G/N} -> H^2(G/N) -> H^2(G)

on both sides, exactness from ranks over F_p, and the squares against the
Exp transport.  The transgression of f uses the extension
1 -> N/M -> G/M -> G/N -> 1 with M = ker f, so that N/M = F_p via f.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .bchgroup import CayleyGroup, FiniteGroup, LazardGroup
from .cohomology.base import HypothesisViolated
from .cohomology.group import GroupExtensionData, cocycle_from_extension, h2_group
from .cohomology.lie import LieExtension, h2_lie, tails_from_extension
from .cohomology.transport import (
    derivation_to_crossed_hom,
    pullpush_lie_cochain,
    transport_class,
)
from .liering import NilLieRing, quotient_map, subring_ring
from .ring import LinearSolver, as_rows, kernel, quotient_invariants, subgroup_invariants
from .triples import GroupTriple, PModule, TripleMorphism, exp_triple, trivial_triple

DEVIATION_NOTE = "kernel term of the transgression taken as N/M (N/M = F_p via f)"


def _rank(rows, p) -> int:
    rows = np.asarray(rows, np.int64)
    if rows.size == 0:
        return 0
    return len(subgroup_invariants(rows % p, [1] * rows.shape[1], p))


def _trivial_group_triple(G: FiniteGroup, p) -> GroupTriple:
    return GroupTriple(G, PModule(p, (1,)), np.ones((G.size, 1, 1), np.int64))


def subgroup_group(G: FiniteGroup, N) -> CayleyGroup:
    """N as a group on positions 0..|N|-1 (in the order of ``N``)."""
    N = np.asarray(N, np.int64)
    pos = np.full(G.size, -1, np.int64)
    pos[N] = np.arange(len(N))
    table = pos[G.mul_idx(N[:, None], N[None, :])]
    if (table < 0).any():
        raise ValueError("not a subgroup")
    return CayleyGroup(table, int(pos[G.identity]), check=False)


# ------------------------------------------------------------ fixed homs

@dataclass
class GroupHoms:
    """Hom(N / N^p[G,N], F_p) as tables over N (positions in ``N``)."""

    G: FiniteGroup
    N: np.ndarray
    basis: np.ndarray  # k x |N|
    points: np.ndarray  # G indices n_j with basis_i(n_j) = delta_ij
    invariants: list

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, table) -> np.ndarray:
        t = np.asarray(table, np.int64)
        pos = np.searchsorted(self.N, self.points)
        c = t[pos] % self.G.prime
        if not np.array_equal((c @ self.basis) % self.G.prime, t % self.G.prime):
            raise ValueError("table is not in the span of the fixed homs")
        return c


def h1_fixed(G: FiniteGroup, N) -> GroupHoms:
    """G-invariant homs N -> F_p, via the quotient N / N^p[G,N]."""
    N = np.unique(np.asarray(N, np.int64))
    if not G.is_normal(N):
        raise ValueError("N is not normal in G")
    p = G.prime
    K = G.agemo_mixed(N, p)
    NG = subgroup_group(G, N)
    Q = NG.quotient(np.searchsorted(N, K))
    gens = Q.minimal_generators()
    k = len(gens)
    coord = np.full((Q.size, k), -1, np.int64)
    for a in product(range(p), repeat=k):
        q = Q.identity
        for g, e in zip(gens, a):
            q = int(Q.mul_idx(q, Q.pow_idx(int(g), e)))
        coord[q] = a
    if (coord < 0).any():
        raise RuntimeError("quotient is not elementary abelian")
    basis = coord[Q.projection].T.copy()
    points = N[Q.representatives[gens]]
    if Q.size != p**k:
        raise RuntimeError("quotient is not elementary abelian")
    return GroupHoms(G, N, basis.reshape(k, len(N)), points, [p] * k)


def h1_hom(G: FiniteGroup) -> GroupHoms:
    return h1_fixed(G, np.arange(G.size, dtype=np.int64))


@dataclass
class LieHoms:
    """Hom(I / (pI + [L,I]), F_p) as value vectors on a basis of I."""

    L: NilLieRing
    ideal_basis: np.ndarray  # rows in L coordinates
    ring: NilLieRing
    basis: np.ndarray  # k x rank(I)
    invariants: list

    @property
    def dim(self):
        return len(self.basis)

    def _solver(self):
        return LinearSolver(self.ideal_basis.T, self.ring.exps, self.L.exps, self.L.p)

    def evaluate(self, h, x) -> int:
        c = self._solver().solve(self.L.reduce(x))
        if c is None:
            raise ValueError("element outside the ideal")
        return int(np.dot(c, h) % self.L.p)

    def coords(self, h) -> np.ndarray:
        p = self.L.p
        k = self.dim
        if k == 0:
            return np.zeros(0, np.int64)
        c = LinearSolver(self.basis.T, [1] * k, [1] * self.ring.rank, p).solve(np.asarray(h) % p)
        if c is None:
            raise ValueError("vector is not in the span of the fixed homs")
        return c % p


def h1_fixed_lie(L: NilLieRing, I) -> LieHoms:
    I = I if not isinstance(I, np.ndarray) else L.span(I)
    if not L.is_ideal(I):
        raise ValueError("I is not an ideal")
    R, basis = subring_ring(L, I)
    p = L.p
    rel = as_rows(np.concatenate([
        as_rows((p * I.generators) % L.orders, L.rank).ravel(),
        as_rows(L.bracket_span(L.full(), I).generators, L.rank).ravel(),
    ]), L.rank)
    solver = LinearSolver(basis.T, R.exps, L.exps, p)
    W = as_rows([solver.solve(w) for w in rel], R.rank)
    inv = [int(x) for x in quotient_invariants(W, R.exps, p)]
    if R.rank == 0:
        B = np.zeros((0, 0), np.int64)
    elif len(W) == 0:
        B = np.eye(R.rank, dtype=np.int64)
    else:
        B = kernel(W % p, [1] * R.rank, [1] * len(W), p)
        B = B[np.any(B % p, axis=1)] % p
    return LieHoms(L, basis.reshape(R.rank, L.rank), R, as_rows(B, R.rank), inv)


def h1_hom_lie(L: NilLieRing) -> LieHoms:
    return h1_fixed_lie(L, L.full())


# ---------------------------------------------------------- transgression

def transgression(G: FiniteGroup, N, f, Qg: CayleyGroup | None = None):
    """Full cocycle table on G/N for a fixed hom f (table over sorted N)."""
    N = np.unique(np.asarray(N, np.int64))
    p = G.prime
    Qg = Qg if Qg is not None else G.quotient(N)
    T = _trivial_group_triple(Qg, p)
    f = np.asarray(f, np.int64) % p
    if not f.any():
        return np.zeros((Qg.size, Qg.size, 1), np.int64)
    Mk = N[f == 0]
    EQ = G.quotient(Mk)
    n1 = N[int(np.flatnonzero(f == 1)[0])]
    iota = np.array([EQ.projection[G.pow_idx(int(n1), m)] for m in range(p)], np.int64)
    proj = Qg.projection[EQ.representatives]
    return cocycle_from_extension(T, GroupExtensionData(EQ, iota, proj))


def transgression_lie(L: NilLieRing, hom: LieHoms, h, qm=None):
    """Tails on L/I (trivial Z/p) for a fixed hom h (values on the ideal basis)."""
    p = L.p
    qm = qm or quotient_map(L, L.span(hom.ideal_basis))
    LI = qm.target
    T = trivial_triple(LI, (1,))
    h = np.asarray(h, np.int64) % p
    R = hom.ring
    if not h.any():
        from .cohomology.lie import LieCochains

        return np.zeros(len(LieCochains(T).orders2()), np.int64)
    # ker h inside I, in L coordinates, plus pI + [L, I] (already killed by h)
    K = kernel(h.reshape(1, -1), R.exps, (1,), p)
    Mgens = (K @ hom.ideal_basis) % L.orders
    q1 = quotient_map(L, L.span(Mgens))
    E = q1.target
    j = int(np.flatnonzero(h % p)[0])
    # an element of I with h = 1
    scale = pow(int(h[j]), -1, p)
    n1 = (scale * hom.ideal_basis[j]) % L.orders
    iota = q1(n1).reshape(1, E.rank)
    proj = np.array([qm(q1.lift(np.eye(E.rank, dtype=np.int64)[k])) for k in range(E.rank)], np.int64)
    ext = LieExtension(E, iota, proj.reshape(E.rank, LI.rank))
    return tails_from_extension(T, ext)


# ------------------------------------------------------------------ report

@dataclass
class FiveTermReport:
    groups: dict
    maps: dict
    exact: dict
    squares: dict
    tau_iso: dict
    notes: list = field(default_factory=lambda: [DEVIATION_NOTE])

    @property
    def is_exact(self) -> bool:
        return all(self.exact.values())

    @property
    def commutes(self) -> bool:
        return all(self.squares.values()) and all(self.tau_iso.values())

    def to_json(self) -> dict:
        return {
            "groups": self.groups,
            "maps": {k: np.asarray(v).tolist() for k, v in self.maps.items()},
            "exact": self.exact,
            "squares": self.squares,
            "tau_isomorphisms": self.tau_iso,
            "verdict": "exact and commuting" if self.is_exact and self.commutes else "failed",
            "notes": self.notes,
        }


def _exactness(A, B, mid, p):
    """im A = ker B at a node of dimension ``mid`` (rows are images)."""
    if mid == 0:
        return True
    A = np.asarray(A, np.int64).reshape(-1, mid)
    B = np.asarray(B, np.int64).reshape(mid, -1)
    zero = not ((A @ B) % p).any() if A.size and B.size else True
    return bool(zero and _rank(A, p) + _rank(B, p) == mid)


def _classes(H, vecs):
    return np.array([H.coords(v) for v in vecs], np.int64).reshape(len(vecs), len(H.moduli))


def require_class(L: NilLieRing):
    """Refuse unless class(L) < p - 1."""
    c, p = L.nilpotency_class(), L.p
    if c >= p - 1:
        raise HypothesisViolated(f"hypothesis violated: needs c < p-1 (c={c}, p={p})")


def five_term_verify(G: LazardGroup, N) -> FiveTermReport:
    """Both rows, exactness at the interior nodes, and the squares."""
    if not isinstance(G, LazardGroup):
        raise TypeError("five_term_verify needs a LazardGroup (the Lie row is log G)")
    L = G.lie
    p = G.p
    require_class(L)
    N = np.unique(np.asarray(N, np.int64))
    if not G.is_normal(N):
        raise ValueError("N is not normal in G")

    # ---- group row
    Qg = G.quotient(N)
    HQ1, HG1, HN1 = h1_hom(Qg), h1_hom(G), h1_fixed(G, N)
    TQ, TGt = _trivial_group_triple(Qg, p), _trivial_group_triple(G, p)
    HQ2, HG2 = h2_group(TQ), h2_group(TGt)
    CQ, CG = HQ2.context, HG2.context
    inf1 = np.array([HG1.coords(b[Qg.projection]) for b in HQ1.basis], np.int64).reshape(HQ1.dim, HG1.dim)
    res = np.array([HN1.coords(b[N]) for b in HG1.basis], np.int64).reshape(HG1.dim, HN1.dim)
    tr_tabs = [transgression(G, N, b, Qg) for b in HN1.basis]
    tr = _classes(HQ2, [CQ.restrict2(t) for t in tr_tabs]).reshape(HN1.dim, len(HQ2.moduli))

    def inf2_group(u):
        f = CQ.expand2(u)
        return CG.restrict2(f[np.ix_(Qg.projection, Qg.projection)])

    inf2 = _classes(HG2, [inf2_group(u) for u in HQ2.representatives]).reshape(len(HQ2.moduli), len(HG2.moduli))

    # ---- Lie row
    I = L.span(G.to_element(N))
    if I.order() != len(N):
        raise ValueError("log N is not an additive subgroup")
    qm = quotient_map(L, I)
    LI = qm.target
    lQ1, lG1, lN1 = h1_hom_lie(LI), h1_hom_lie(L), h1_fixed_lie(L, I)
    TLI, TL = trivial_triple(LI, (1,)), trivial_triple(L, (1,))
    lQ2, lG2 = h2_lie(TLI), h2_lie(TL)

    def lie_inf1(h):
        return np.array([lQ1.evaluate(h, qm(x)) for x in lG1.ideal_basis], np.int64)

    def lie_res(h):
        return np.array([lG1.evaluate(h, x) for x in lN1.ideal_basis], np.int64)

    mor = TripleMorphism(qm.matrix, np.eye(1, dtype=np.int64))
    l_inf1 = np.array([lG1.coords(lie_inf1(b)) for b in lQ1.basis], np.int64).reshape(lQ1.dim, lG1.dim)
    l_res = np.array([lN1.coords(lie_res(b)) for b in lG1.basis], np.int64).reshape(lG1.dim, lN1.dim)
    l_tr_vecs = [transgression_lie(L, lN1, b, qm) for b in lN1.basis]
    l_tr = _classes(lQ2, l_tr_vecs).reshape(lN1.dim, len(lQ2.moduli))
    l_inf2_vecs = [pullpush_lie_cochain(TLI, TL, mor, u, 2) for u in lQ2.representatives]
    l_inf2 = _classes(lG2, l_inf2_vecs).reshape(len(lQ2.moduli), len(lG2.moduli))

    # ---- vertical maps tau (Lie -> group), as class-coordinate matrices
    GLI = LazardGroup(LI)
    theta = GLI.to_index(qm(G.to_element(Qg.representatives)))  # G/N -> exp(L/I)
    TGLI = exp_triple(TLI, GLI)
    TGL = exp_triple(TL, G)
    R, Rbasis = lN1.ring, lN1.ideal_basis
    GR = LazardGroup(R)
    TR = trivial_triple(R, (1,))
    TGR = exp_triple(TR, GR)
    r_to_g = G.to_index((GR.to_element(np.arange(GR.size)) @ Rbasis) % L.orders)
    n_pos = np.searchsorted(N, r_to_g)

    def std_values(hom: "LieHoms", h):
        return np.array([hom.evaluate(h, e) for e in np.eye(hom.L.rank, dtype=np.int64)], np.int64)

    def tau1_Q(h):
        F = derivation_to_crossed_hom(TLI, std_values(lQ1, h), TGLI)[:, 0]
        return HQ1.coords(F[theta])

    def tau1_G(h):
        F = derivation_to_crossed_hom(TL, std_values(lG1, h), TGL)[:, 0]
        return HG1.coords(F)

    def tau1_N(h):
        F = derivation_to_crossed_hom(TR, h, TGR)[:, 0]
        tab = np.zeros(len(N), np.int64)
        tab[n_pos] = F
        return HN1.coords(tab)

    def tau2_Q(u):
        v = transport_class(TLI, u, 2, TG=TGLI)
        from .cohomology.group import GroupCochains

        f = GroupCochains(TGLI).expand2(v)
        return HQ2.coords(CQ.restrict2(f[np.ix_(theta, theta)]))

    def tau2_G(u):
        return HG2.coords(transport_class(TL, u, 2, TG=TGL))

    def mat(fn, basis, dim):
        return np.array([fn(b) for b in basis], np.int64).reshape(len(basis), dim)

    tQ1 = mat(tau1_Q, lQ1.basis, HQ1.dim)
    tG1 = mat(tau1_G, lG1.basis, HG1.dim)
    tN1 = mat(tau1_N, lN1.basis, HN1.dim)
    tQ2 = mat(tau2_Q, lQ2.representatives, len(HQ2.moduli))
    tG2 = mat(tau2_G, lG2.representatives, len(HG2.moduli))

    def same(A, B):
        return bool(np.array_equal(np.asarray(A) % p, np.asarray(B) % p))

    squares = {
        "inflation H1": same(l_inf1 @ tG1, tQ1 @ inf1),
        "restriction": same(l_res @ tN1, tG1 @ res),
        "transgression": same(l_tr @ tQ2, tN1 @ tr),
        "inflation H2": same(l_inf2 @ tG2, tQ2 @ inf2),
    }

    def iso(A, n, m):
        return bool(n == m and _rank(A, p) == n)

    tau_iso = {
        "H1(G/N)": iso(tQ1, lQ1.dim, HQ1.dim),
        "H1(G)": iso(tG1, lG1.dim, HG1.dim),
        "H1(N)^(G/N)": iso(tN1, lN1.dim, HN1.dim),
        "H2(G/N)": iso(tQ2, len(lQ2.moduli), len(HQ2.moduli)),
        "H2(G)": iso(tG2, len(lG2.moduli), len(HG2.moduli)),
    }
    exact = {
        "H1(G/N) injective": _rank(inf1, p) == HQ1.dim,
        "H1(G)": _exactness(inf1, res, HG1.dim, p),
        "H1(N)^(G/N)": _exactness(res, tr, HN1.dim, p),
        "H2(G/N)": _exactness(tr, inf2, len(HQ2.moduli), p),
        "lie H1(L/I) injective": _rank(l_inf1, p) == lQ1.dim,
        "lie H1(L)": _exactness(l_inf1, l_res, lG1.dim, p),
        "lie H1(I)^(L/I)": _exactness(l_res, l_tr, lN1.dim, p),
        "lie H2(L/I)": _exactness(l_tr, l_inf2, len(lQ2.moduli), p),
    }
    groups = {
        "group": {
            "H1(G/N)": [p] * HQ1.dim,
            "H1(G)": [p] * HG1.dim,
            "H1(N)^(G/N)": [p] * HN1.dim,
            "H2(G/N)": [int(x) for x in HQ2.invariants],
            "H2(G)": [int(x) for x in HG2.invariants],
        },
        "lie": {
            "H1(L/I)": [p] * lQ1.dim,
            "H1(L)": [p] * lG1.dim,
            "H1(I)^(L/I)": [p] * lN1.dim,
            "H2(L/I)": [int(x) for x in lQ2.invariants],
            "H2(L)": [int(x) for x in lG2.invariants],
        },
    }
    maps = {"inflation1": inf1, "restriction": res, "transgression": tr, "inflation2": inf2,
            "lie_inflation1": l_inf1, "lie_restriction": l_res, "lie_transgression": l_tr,
            "lie_inflation2": l_inf2}
    return FiveTermReport(groups, maps, exact, squares, tau_iso)
