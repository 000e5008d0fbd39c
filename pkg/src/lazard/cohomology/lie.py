"""Lie ring cohomology H^1, H^2 of a LieTriple, factor systems and extensions.

An extension 0 -> M -> E -> L -> 0 is described by "tails": lifts beta_i of
the basis b_i with

    p^{e_i} beta_i = t_i in M,     [beta_i, beta_j] = sum_k c_ij^k beta_k + s_ij,

where c_ij^k are the stored representatives in [0, p^{e_k}).  Any tails
define the abelian group E; the bracket is well defined and satisfies Jacobi
exactly when the linear "defects" below vanish.  Changing lifts by h_i gives
the coboundaries.  The full factor system (g, f) against the section
sigma(a) = sum a_i beta_i (0 <= a_i < p^{e_i}) is available both ways.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..liering import NilLieRing, direct_sum, quotient_map, subring_ring
from ..ring import LinearSolver, RowSpan, Subquotient, _E, kernel
from ..triples import LieTriple
from .base import CohomologyGroup, SizeBoundExceeded


class LieCochains:
    def __init__(self, T: LieTriple):
        self.T = T
        self.L = T.L
        self.M = T.M
        self.r = T.L.rank
        self.m = T.M.rank
        self.pairs = list(combinations(range(self.r), 2))
        self.pe = [int(o) for o in T.L.orders]

    # ---------------------------------------------------------- degree 1
    def orders1(self):
        return list(self.M.exps) * self.r

    def expand1(self, u):
        u = np.asarray(u, np.int64).reshape(self.r, self.m)
        els = self.L.elements()
        return (els @ u) % self.M.orders if self.m else np.zeros((len(els), 0), np.int64)

    def restrict1(self, F):
        F = np.asarray(F, np.int64)
        idx = [self.L.index(self.L.basis_vector(i)) for i in range(self.r)]
        return (F[idx] % self.M.orders).reshape(-1)

    # ---------------------------------------------------------- degree 2
    def orders2(self):
        return list(self.M.exps) * (self.r + len(self.pairs))

    def unpack(self, u):
        """Tails vector -> (t (r, m), s (r, r, m) antisymmetric)."""
        r, m = self.r, self.m
        u = np.asarray(u, np.int64).reshape(-1)
        t = u[: r * m].reshape(r, m).copy()
        s = np.zeros((r, r, m), np.int64)
        C = self.L.C
        for q, (i, j) in enumerate(self.pairs):
            v = u[(r + q) * m:(r + q + 1) * m]
            s[i, j] = v
            # C_ji stores p^e - c_ij, so the reversed tail absorbs a carry
            carry = (C[i, j] + C[j, i]) // self.L.orders
            s[j, i] = -v - carry @ t
        return t % self.M.orders, s % self.M.orders

    def pack(self, t, s):
        t = np.asarray(t, np.int64).reshape(self.r, self.m)
        parts = [t.reshape(-1)] + [np.asarray(s[i, j], np.int64) for i, j in self.pairs]
        return np.concatenate(parts) % np.tile(self.M.orders, self.r + len(self.pairs))

    def defects(self, u) -> np.ndarray:
        """Well-definedness on every ordered pair, Jacobi on i<j<k."""
        t, s = self.unpack(u)
        L, M, psi = self.L, self.M, self.T.psi
        C = L.C
        out = []
        for i in range(self.r):
            for j in range(self.r):
                v = self.pe[i] * s[i, j] + psi[j] @ t[i]
                for k in range(self.r):
                    v = v + (self.pe[i] * int(C[i, j, k]) // self.pe[k]) * t[k]
                out.append(v % M.orders)
        for i, j, k in combinations(range(self.r), 3):
            acc = np.zeros(self.m, np.int64)
            N = np.zeros(self.r, np.int64)
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                # [beta_a, [beta_b, beta_c]]
                acc = acc + psi[a] @ s[b, c]
                for l in range(self.r):
                    cl = int(C[b, c, l])
                    if cl:
                        acc = acc + cl * s[a, l]
                        N = N + cl * C[a, l].astype(np.int64)
            for q in range(self.r):
                acc = acc + (int(N[q]) // self.pe[q]) * t[q]
            out.append(acc % M.orders)
        return np.concatenate(out) if out else np.zeros(0, np.int64)

    def n_defect_blocks(self):
        return self.r * self.r + len(list(combinations(range(self.r), 3)))

    def constraint_matrix(self):
        n = len(self.orders2())
        cols = [self.defects(np.eye(n, dtype=np.int64)[c]) for c in range(n)]
        return np.array(cols, np.int64).T.reshape(-1, n)

    def coboundary(self, h):
        """Tails change when every lift beta_i moves by h_i."""
        h = np.asarray(h, np.int64).reshape(self.r, self.m)
        psi, C = self.T.psi, self.L.C
        t = np.array([self.pe[i] * h[i] for i in range(self.r)], np.int64).reshape(self.r, self.m)
        s = np.zeros((self.r, self.r, self.m), np.int64)
        for i, j in self.pairs:
            s[i, j] = psi[i] @ h[j] - psi[j] @ h[i] - C[i, j] @ h
        return self.pack(t, s)

    def coboundaries2(self):
        n = self.r * self.m
        return np.array([self.coboundary(np.eye(n, dtype=np.int64)[c]) for c in range(n)], np.int64).reshape(
            -1, len(self.orders2())
        )

    # -------------------------------------------- tails <-> factor systems
    def factor_system(self, u):
        """(g, f) tables indexed by L element indices."""
        t, s = self.unpack(u)
        L, M = self.L, self.M
        els = L.elements()
        orders = L.orders
        carry = (els[:, None, :] + els[None, :, :]) >= orders
        g = np.einsum("abi,im->abm", carry.astype(np.int64), t) % M.orders
        n = np.einsum("ai,bj,ijk->abk", els, els, L.C)
        q = n // orders
        f = (np.einsum("ai,bj,ijm->abm", els, els, s) + np.einsum("abk,km->abm", q, t)) % M.orders
        return g, f

    def tails_from_factor_system(self, g, f):
        L, M = self.L, self.M
        g = np.asarray(g, np.int64)
        f = np.asarray(f, np.int64)
        basis = [L.index(L.basis_vector(i)) for i in range(self.r)]
        t = np.zeros((self.r, self.m), np.int64)
        for i in range(self.r):
            acc = np.zeros(self.m, np.int64)
            for k in range(1, self.pe[i]):
                acc = acc + g[L.index(k * L.basis_vector(i)), basis[i]]
            t[i] = acc % M.orders
        s = np.zeros((self.r, self.r, self.m), np.int64)
        for i, j in self.pairs:
            # sum_k c_ij^k sigma(b_k) in the twisted group, then subtract
            cur_m, cur_a = np.zeros(self.m, np.int64), L.zero()
            for k in range(self.r):
                for _ in range(int(self.L.C[i, j, k])):
                    cur_m = cur_m + g[L.index(cur_a), basis[k]]
                    cur_a = L.add(cur_a, L.basis_vector(k))
            v = (f[basis[i], basis[j]] - cur_m) % M.orders
            s[i, j] = v
            s[j, i] = -v % M.orders
        return self.pack(t, s)


# ----------------------------------------------------------------- H^1

def h1_lie(T: LieTriple) -> CohomologyGroup:
    """Derivations modulo inner derivations."""
    C = LieCochains(T)
    L, M = T.L, T.M
    r, m = C.r, C.m
    dom = C.orders1()
    if not dom:
        return CohomologyGroup(np.zeros((0, 0)), np.zeros((0, 0)), [], M.p, side="lie", degree=1, context=C)
    rs = RowSpan(len(dom), M.p, _E(dom))
    I = np.eye(m, dtype=np.int64)
    for i in range(r):
        A = np.zeros((m, r * m), np.int64)
        A[:, i * m:(i + 1) * m] = C.pe[i] * I
        rs.add(A, M.exps)
    for i, j in C.pairs:
        A = np.zeros((m, r * m), np.int64)
        for k in range(r):
            A[:, k * m:(k + 1) * m] += int(L.C[i, j, k]) * I
        A[:, j * m:(j + 1) * m] -= T.psi[i]
        A[:, i * m:(i + 1) * m] += T.psi[j]
        rs.add(A, M.exps)
    Z = rs.kernel(dom)
    B = np.array([np.concatenate([T.psi[i][:, q] for i in range(r)]) for q in range(m)], np.int64)
    return CohomologyGroup(Z, B.reshape(-1, len(dom)), dom, M.p, side="lie", degree=1, context=C)


def is_derivation(T: LieTriple, F) -> bool:
    L, M = T.L, T.M
    F = np.asarray(F, np.int64) % M.orders
    els = L.elements()
    n = len(els)
    for a in range(n):
        sums = L.index((els[a] + els) % L.orders)
        if not np.array_equal(F[sums], (F[a] + F) % M.orders):
            return False
        br = L.index(L.bracket_batch(np.repeat(els[a:a + 1], n, 0), els))
        rhs = (T.psi_of(els[a]) @ F.T).T - np.einsum("bij,j->bi", T.psi_of(els), F[a])
        if not np.array_equal(F[br], rhs % M.orders):
            return False
    return True


# ----------------------------------------------------------------- H^2

def h2_lie(T: LieTriple, max_size=None) -> CohomologyGroup:
    from ..bchgroup import size_bound

    bound = max_size if max_size is not None else size_bound(T.L.p)
    if T.L.size > bound:
        raise SizeBoundExceeded(f"|L| = {T.L.size} exceeds the bound {bound}")
    C = LieCochains(T)
    dom = C.orders2()
    if not dom:
        return CohomologyGroup(np.zeros((0, 0)), np.zeros((0, 0)), [], T.M.p, side="lie", degree=2, context=C)
    A = C.constraint_matrix()
    rs = RowSpan(len(dom), T.M.p, _E(dom))
    rs.add(A, np.tile(T.M.exps, C.n_defect_blocks()))
    Z = rs.kernel(dom)
    return CohomologyGroup(Z, C.coboundaries2(), dom, T.M.p, side="lie", degree=2, context=C)


# ------------------------------------------------- factor system checks

IDENTITY_FAMILIES = (
    "normalized",
    "g symmetric",
    "g cocycle",
    "f alternating",
    "f antisymmetric",
    "twisted biadditivity",
    "twisted Jacobi",
)


def check_factor_system(T: LieTriple, g, f, samples=None, rng=None):
    """First failing identity as (family, (a, b, c)) or None.

    Exhaustive over all triples when |L| <= p^2 (or ``samples`` is 0),
    otherwise ``samples`` random triples (default 10^5).
    """
    L, M = T.L, T.M
    g = np.asarray(g, np.int64) % M.orders
    f = np.asarray(f, np.int64) % M.orders
    els = L.elements()
    n = len(els)
    add = L.index((els[:, None, :] + els[None, :, :]) % L.orders)
    brk = L.index(L.bracket_batch(np.repeat(els, n, 0), np.tile(els, (n, 1)))).reshape(n, n)
    psi = T.psi_of(els)
    mo = M.orders

    def mv(A, v):
        return np.einsum("...ij,...j->...i", A, v) % mo

    z = L.index(L.zero())
    if g[z].any() or g[:, z].any() or f[z].any() or f[:, z].any():
        return ("normalized", None)
    ab = np.argwhere(np.any((g - g.transpose(1, 0, 2)) % mo, axis=2))
    if len(ab):
        return ("g symmetric", tuple(map(int, ab[0])))
    d = np.arange(n)
    if f[d, d].any():
        return ("f alternating", (int(np.flatnonzero(f[d, d].any(axis=1))[0]),))
    anti = (f + f.transpose(1, 0, 2) + g[brk, brk.T]) % mo
    ab = np.argwhere(anti.any(axis=2))
    if len(ab):
        return ("f antisymmetric", tuple(map(int, ab[0])))

    exhaustive = samples == 0 or (samples is None and n <= L.p**2)
    if exhaustive:
        batches = []
        all_t = np.indices((n, n, n)).reshape(3, -1).T
        for s in range(0, len(all_t), 1 << 18):
            batches.append(all_t[s:s + (1 << 18)])
    else:
        rng = rng or np.random.default_rng(0)
        batches = [rng.integers(0, n, size=(samples or 100000, 3))]
    for tr in batches:
        a, b, c = tr.T
        ab_, bc_ = add[a, b], add[b, c]
        lhs = (g[a, b] + g[ab_, c] - g[b, c] - g[a, bc_]) % mo
        bad = np.flatnonzero(lhs.any(axis=1))
        if bad.size:
            return ("g cocycle", tuple(map(int, tr[bad[0]])))
        lhs = f[ab_, c] - mv(psi[c], g[a, b])
        rhs = f[a, c] + f[b, c] + g[brk[a, c], brk[b, c]]
        bad = np.flatnonzero(((lhs - rhs) % mo).any(axis=1))
        if bad.size:
            return ("twisted biadditivity", tuple(map(int, tr[bad[0]])))
        u = brk[brk[a, b], c]
        v = brk[brk[b, c], a]
        w = brk[brk[c, a], b]
        tot = (
            f[brk[a, b], c] - mv(psi[c], f[a, b])
            + f[brk[b, c], a] - mv(psi[a], f[b, c])
            + f[brk[c, a], b] - mv(psi[b], f[c, a])
            + g[u, v] + g[add[u, v], w]
        )
        bad = np.flatnonzero((tot % mo).any(axis=1))
        if bad.size:
            return ("twisted Jacobi", tuple(map(int, tr[bad[0]])))
    return None


def lie_coboundary_pair(T: LieTriple, h):
    """(delta h, delta_psi h) for a normalized h: L -> M (table by index)."""
    L, M = T.L, T.M
    h = np.asarray(h, np.int64) % M.orders
    els = L.elements()
    n = len(els)
    add = L.index((els[:, None, :] + els[None, :, :]) % L.orders)
    brk = L.index(L.bracket_batch(np.repeat(els, n, 0), np.tile(els, (n, 1)))).reshape(n, n)
    psi = T.psi_of(els)
    g = (h[:, None, :] + h[None, :, :] - h[add]) % M.orders
    f = (np.einsum("aij,bj->abi", psi, h) - np.einsum("bij,aj->abi", psi, h) - h[brk]) % M.orders
    return g, f


def h2_lie_bruteforce(T: LieTriple) -> CohomologyGroup:
    """Oracle: all normalized (g, f) satisfying the identity families."""
    L, M = T.L, T.M
    els = L.elements()
    n, m = len(els), M.rank
    z = L.index(L.zero())
    non = [a for a in range(n) if a != z]
    k = len(non)
    pos = np.full(n, -1, np.int64)
    pos[non] = np.arange(k)
    nU = 2 * k * k * m
    add = L.index((els[:, None, :] + els[None, :, :]) % L.orders)
    brk = L.index(L.bracket_batch(np.repeat(els, n, 0), np.tile(els, (n, 1)))).reshape(n, n)
    psi = T.psi_of(els)
    I = np.eye(m, dtype=np.int64)
    dom = list(M.exps) * (2 * k * k)
    rs = RowSpan(nU, M.p, _E(dom))

    def G_(R, a, b, coef):
        if pos[a] >= 0 and pos[b] >= 0:
            c0 = (pos[a] * k + pos[b]) * m
            R[:, c0:c0 + m] += coef

    def F_(R, a, b, coef):
        if pos[a] >= 0 and pos[b] >= 0:
            c0 = k * k * m + (pos[a] * k + pos[b]) * m
            R[:, c0:c0 + m] += coef

    rows = []

    def emit(R):
        rows.append(R)
        if len(rows) >= 512:
            rs.add(np.concatenate(rows), np.tile(M.exps, len(rows)))
            rows.clear()

    for a in range(n):
        for b in range(n):
            R = np.zeros((m, nU), np.int64)
            G_(R, a, b, I)
            G_(R, b, a, -I)
            emit(R)
            R = np.zeros((m, nU), np.int64)
            F_(R, a, b, I)
            F_(R, b, a, I)
            G_(R, brk[a, b], brk[b, a], I)
            emit(R)
        R = np.zeros((m, nU), np.int64)
        F_(R, a, a, I)
        emit(R)
        for b in range(n):
            for c in range(n):
                R = np.zeros((m, nU), np.int64)
                G_(R, a, b, I)
                G_(R, add[a, b], c, I)
                G_(R, b, c, -I)
                G_(R, a, add[b, c], -I)
                emit(R)
                R = np.zeros((m, nU), np.int64)
                F_(R, add[a, b], c, I)
                G_(R, a, b, -psi[c])
                F_(R, a, c, -I)
                F_(R, b, c, -I)
                G_(R, brk[a, c], brk[b, c], -I)
                emit(R)
                R = np.zeros((m, nU), np.int64)
                for x, y, w in ((a, b, c), (b, c, a), (c, a, b)):
                    F_(R, brk[x, y], w, I)
                    F_(R, x, y, -psi[w])
                u, v, w = brk[brk[a, b], c], brk[brk[b, c], a], brk[brk[c, a], b]
                G_(R, u, v, I)
                G_(R, add[u, v], w, I)
                emit(R)
    if rows:
        rs.add(np.concatenate(rows), np.tile(M.exps, len(rows)))
    Z = rs.kernel(dom)
    B = []
    for a in non:
        for q in range(m):
            h = np.zeros((n, m), np.int64)
            h[a, q] = 1
            g, f = lie_coboundary_pair(T, h)
            B.append(np.concatenate([g[np.ix_(non, non)].reshape(-1), f[np.ix_(non, non)].reshape(-1)]))
    ctx = {"non": non}
    return CohomologyGroup(Z, np.array(B, np.int64).reshape(-1, nU), dom, M.p, side="lie", degree=2, context=ctx)


def bruteforce_lie_vector(T: LieTriple, g, f):
    z = T.L.index(T.L.zero())
    non = [a for a in range(T.L.size) if a != z]
    g = np.asarray(g)[np.ix_(non, non)] % T.M.orders
    f = np.asarray(f)[np.ix_(non, non)] % T.M.orders
    return np.concatenate([g.reshape(-1), f.reshape(-1)])


# ------------------------------------------------------------ extensions

@dataclass
class LieExtension:
    """0 -> M -> E -> L -> 0 with iota (m x rank E rows) and proj (rank E x rank L)."""

    E: NilLieRing
    iota: np.ndarray
    proj: np.ndarray
    section: np.ndarray | None = None  # rows: E-coordinates of the lifts beta_i


def lie_ring_from_factor_system(T: LieTriple, u=None, g=None, f=None) -> LieExtension:
    """The extension ring for tails ``u`` (or for a full pair ``g, f``)."""
    C = LieCochains(T)
    if u is None:
        u = C.tails_from_factor_system(g, f)
    bad = np.flatnonzero(C.defects(u))
    if bad.size:
        raise ValueError("tails violate the extension identities")
    t, s = C.unpack(u)
    L, M = T.L, T.M
    r, m = C.r, C.m
    F = M.F if m else 0
    amb = [e + F for e in L.exps] + list(M.exps)
    n = r + m
    rel = np.zeros((r, n), np.int64)
    for i in range(r):
        rel[i, i] = C.pe[i]
        rel[i, r:] = -t[i]
    sq = Subquotient(np.eye(n, dtype=np.int64), rel, amb, L.p)
    reps = sq.representatives
    rE = len(sq.exponents)
    PA = np.array([L.p**e for e in amb], np.int64)

    def amb_bracket(x, y):
        xb, xm = x[:r], x[r:]
        yb, ym = y[:r], y[r:]
        beta = np.einsum("i,j,ijk->k", xb, yb, L.C)
        mm = np.einsum("i,j,ijq->q", xb, yb, s) + T.psi_of(xb) @ ym - T.psi_of(yb) @ xm
        return np.concatenate([beta, mm]) % PA

    CE = np.zeros((rE, rE, rE), np.int64)
    for a in range(rE):
        for b in range(rE):
            CE[a, b] = sq.coords(amb_bracket(reps[a], reps[b]))
    E = NilLieRing(L.p, sq.exponents, CE, [f"e{i + 1}" for i in range(rE)])
    iota = np.array([sq.coords(np.eye(n, dtype=np.int64)[r + q]) for q in range(m)], np.int64).reshape(m, rE)
    proj = (reps[:, :r] % L.orders).reshape(rE, r)
    section = np.array([sq.coords(np.eye(n, dtype=np.int64)[i]) for i in range(r)], np.int64).reshape(r, rE)
    return LieExtension(E, iota, proj, section)


def tails_from_extension(T: LieTriple, ext: LieExtension) -> np.ndarray:
    """Tails of an arbitrary extension, for least lifts of the basis."""
    C = LieCochains(T)
    L, M, E = T.L, T.M, ext.E
    r, m = C.r, C.m
    psolve = LinearSolver(np.asarray(ext.proj).T, E.exps, L.exps, L.p)
    isolve = LinearSolver(np.asarray(ext.iota).T, M.exps, E.exps, L.p) if m else None

    def inv_iota(v):
        if m == 0:
            if np.any(E.reduce(v)):
                raise ValueError("element outside the kernel")
            return np.zeros(0, np.int64)
        x = isolve.solve(E.reduce(v))
        if x is None:
            raise ValueError("element outside the kernel")
        return x

    beta = []
    for i in range(r):
        x = psolve.solve(L.basis_vector(i))
        if x is None:
            raise ValueError("projection is not surjective")
        beta.append(E.reduce(x))
    for i in range(r):
        for q in range(m):
            mq = E.reduce(np.asarray(ext.iota)[q])
            lhs = inv_iota(E.bracket(beta[i], mq))
            if not np.array_equal(lhs, T.psi[i][:, q] % M.orders):
                raise ValueError("extension induces a different action")
    t = np.array([inv_iota(E.scale(C.pe[i], beta[i])) for i in range(r)], np.int64).reshape(r, m)
    s = np.zeros((r, r, m), np.int64)
    for i, j in C.pairs:
        v = E.bracket(beta[i], beta[j])
        for k in range(r):
            v = v - int(L.C[i, j, k]) * beta[k]
        w = inv_iota(v)
        s[i, j] = w
        s[j, i] = -w
    return C.pack(t, s)


def baer_sum_lie(T: LieTriple, x: LieExtension, y: LieExtension) -> LieExtension:
    """Pull back over L, then divide by {(iota1(m), -iota2(m))}."""
    L, M = T.L, T.M
    D = direct_sum(x.E, y.E)
    r1 = x.E.rank
    K = np.vstack([np.asarray(x.proj), -np.asarray(y.proj)]) % L.orders
    S = D.span(kernel(K.T, D.exps, L.exps, L.p))
    R, basis = subring_ring(D, S)
    rsolve = LinearSolver(basis.T, R.exps, D.exps, L.p)

    def in_R(v):
        c = rsolve.solve(D.reduce(v))
        if c is None:
            raise ValueError("element outside the pull-back")
        return c

    m = M.rank
    iota1 = [np.concatenate([np.asarray(x.iota)[q], np.zeros(y.E.rank, np.int64)]) for q in range(m)]
    anti = [
        in_R(np.concatenate([np.asarray(x.iota)[q], -np.asarray(y.iota)[q]])) for q in range(m)
    ]
    qm = quotient_map(R, np.array(anti, np.int64).reshape(-1, R.rank))
    Q = qm.target
    iota = np.array([qm(in_R(v)) for v in iota1], np.int64).reshape(m, Q.rank)
    lifts = (qm.section @ basis) % D.orders if Q.rank else np.zeros((0, D.rank), np.int64)
    proj = (lifts[:, :r1] @ np.asarray(x.proj)) % L.orders if Q.rank else np.zeros((0, L.rank), np.int64)
    return LieExtension(Q, iota, proj.reshape(Q.rank, L.rank))
