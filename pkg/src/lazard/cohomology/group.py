"""Group cohomology H^1, H^2 of a GroupTriple, and group extensions.

Cochains are stored restricted to generators: a crossed hom by its values on
a minimal generating set S, a normalized 2-cocycle by u(x, s) = f(x, s) for
x != 1, s in S.  The full function is recovered along a BFS tree of the
Cayley graph, using f(x, ys) = f(x, y) + f(xy, s) - phi(x) f(y, s); the
constraints are the same identity on every non-tree edge, for every x.
That already forces the full cocycle identity, because the defect
D(x,y,z) = phi(x)f(y,z) - f(xy,z) + f(x,yz) - f(x,y) obeys
D(x,y,zs) = phi(x)D(y,z,s) - D(xy,z,s) + D(x,yz,s) + D(x,y,z).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .. import kernels
from ..bchgroup import CayleyGroup, FiniteGroup, size_bound
from ..ring import RowSpan, _E
from ..triples import GroupTriple, PModule
from .base import CohomologyGroup, SizeBoundExceeded


class GroupCochains:
    """BFS data and cochain layouts for a GroupTriple."""

    def __init__(self, T: GroupTriple, gens=None):
        self.T = T
        G = self.G = T.G
        self.M = T.M
        self.S = np.asarray(G.minimal_generators() if gens is None else gens, np.int64)
        self.nS = len(self.S)
        n = G.size
        e = G.identity
        seen = np.zeros(n, bool)
        seen[e] = True
        tree, other = [], []
        frontier = [e]
        while frontier:
            nxt = []
            for y in frontier:
                prods = G.mul_idx(np.full(self.nS, y, np.int64), self.S)
                for k, z in enumerate(np.atleast_1d(prods)):
                    z = int(z)
                    if not seen[z]:
                        seen[z] = True
                        tree.append((y, k, z))
                        nxt.append(z)
                    else:
                        other.append((y, k, z))
            frontier = nxt
        if not seen.all():
            raise ValueError("generators do not generate the group")
        self.tree = np.array(tree, np.int64).reshape(-1, 3)
        self.other = np.array(other, np.int64).reshape(-1, 3)
        self.nonid = np.array([g for g in range(n) if g != e], np.int64)
        pos = np.full(n, -1, np.int64)
        pos[self.nonid] = np.arange(n - 1)
        self.pos = pos

    @property
    def m(self):
        return self.M.rank

    # ---------------------------------------------------------- degree 1
    @cached_property
    def _F1(self):
        """F1[y] (m x nS*m): the linear map u -> f(y)."""
        m, nS = self.m, self.nS
        F = np.zeros((self.G.size, m, nS * m), np.int64)
        phi = self.T.phi
        for y, k, z in self.tree:
            F[z] = F[y]
            F[z][:, k * m:(k + 1) * m] += phi[y]
        return F % self.M.orders[None, :, None]

    def orders1(self):
        return list(self.M.exps) * self.nS

    def expand1(self, u) -> np.ndarray:
        u = np.asarray(u, np.int64).reshape(-1)
        return np.einsum("yij,j->yi", self._F1, u) % self.M.orders

    def restrict1(self, F) -> np.ndarray:
        return (np.asarray(F, np.int64)[self.S] % self.M.orders).reshape(-1)

    # ---------------------------------------------------------- degree 2
    def orders2(self):
        return list(self.M.exps) * (len(self.nonid) * self.nS)

    def col(self, x, k):
        return (self.pos[x] * self.nS + k) * self.m

    def restrict2(self, f) -> np.ndarray:
        f = np.asarray(f, np.int64)
        return (f[self.nonid][:, self.S] % self.M.orders).reshape(-1)

    def u_table(self, u) -> np.ndarray:
        U = np.zeros((self.G.size, self.nS, self.m), np.int64)
        U[self.nonid] = np.asarray(u, np.int64).reshape(len(self.nonid), self.nS, self.m)
        return U

    def expand2(self, u) -> np.ndarray:
        """Full normalized cocycle table f[x, y] from restricted data."""
        G, M = self.G, self.M
        U = self.u_table(u)
        n = G.size
        xs = np.arange(n, dtype=np.int64)
        f = np.zeros((n, n, self.m), np.int64)
        phi = self.T.phi
        for y, k, z in self.tree:
            xy = G.mul_idx(xs, y)
            f[:, z] = (f[:, y] + U[xy, k] - np.einsum("xij,j->xi", phi, U[y, k])) % M.orders
        return f

    def _edge_rows(self, xs):
        """Constraint rows for x in xs over all non-tree edges."""
        G, M = self.G, self.M
        m, nS = self.m, self.nS
        nU = len(self.nonid) * nS * m
        nx = len(xs)
        phi = self.T.phi[xs]
        F = np.zeros((nx, G.size, m, nU), np.int64)
        ar = np.arange(nx)
        eye = np.arange(m)

        def add_unit(block, g, k, sign):
            # block[x, i, col(g_x, k) + i] += sign, where defined
            ok = self.pos[g] >= 0
            if not ok.any():
                return
            c = self.col(g[ok], k)
            rows = ar[ok]
            for i in eye:
                np.add.at(block, (rows, i, c + i), sign)

        for y, k, z in self.tree:
            F[:, z] = F[:, y]
            add_unit(F[:, z], G.mul_idx(xs, y), k, 1)
            if self.pos[y] >= 0:
                c = self.col(y, k)
                F[:, z, :, c:c + m] -= phi
            F[:, z] %= M.orders[None, :, None]
        out = []
        for y, k, z in self.other:
            R = F[:, y] - F[:, z]
            add_unit(R, G.mul_idx(xs, y), k, 1)
            if self.pos[y] >= 0:
                c = self.col(y, k)
                R[:, :, c:c + m] -= phi
            out.append(R.reshape(nx * m, nU))
        return np.concatenate(out) if out else np.zeros((0, nU), np.int64)

    def coboundaries2(self) -> np.ndarray:
        G, M = self.G, self.M
        m, nS = self.m, self.nS
        nx = len(self.nonid)
        rows = []
        xs = self.nonid
        phi = self.T.phi[xs]
        xsS = G.mul_idx(xs[:, None], self.S[None, :])
        for g in self.nonid:
            for q in range(m):
                v = np.zeros((nx, nS, m), np.int64)
                for k in range(nS):
                    if self.S[k] == g:
                        v[:, k, :] += phi[:, :, q]
                    v[xsS[:, k] == g, k, q] -= 1
                v[self.pos[g], :, q] += 1
                rows.append(v.reshape(-1) % np.tile(M.orders, nx * nS))
        return np.array(rows, np.int64).reshape(-1, nx * nS * m)


# ----------------------------------------------------------------- H^1

def h1_group(T: GroupTriple, gens=None) -> CohomologyGroup:
    """Crossed homomorphisms modulo principal ones."""
    C = GroupCochains(T, gens)
    M = T.M
    m, nS = M.rank, C.nS
    dom = C.orders1()
    E = _E(dom)
    rs = RowSpan(len(dom), M.p, E)
    if len(C.other) and m:
        ys, ks, zs = C.other.T
        A = C._F1[ys] - C._F1[zs]
        for t, (y, k) in enumerate(zip(ys, ks)):
            A[t][:, k * m:(k + 1) * m] += T.phi[y]
        rs.add(A.reshape(-1, len(dom)), np.tile(M.exps, len(ys)))
    Z = rs.kernel(dom) if dom else np.zeros((0, 0), np.int64)
    B = []
    for q in range(m):
        e = np.zeros(m, np.int64)
        e[q] = 1
        B.append(np.concatenate([(T.phi[s] @ e - e) % M.orders for s in C.S]))
    B = np.array(B, np.int64).reshape(-1, len(dom))
    return CohomologyGroup(Z, B, dom, M.p, side="group", degree=1, context=C)


def is_crossed_hom(T: GroupTriple, F) -> bool:
    G, M = T.G, T.M
    F = np.asarray(F, np.int64) % M.orders
    idx = np.arange(G.size, dtype=np.int64)
    prod = G.mul_idx(idx[:, None], idx[None, :])
    lhs = F[prod]
    rhs = (F[:, None, :] + np.einsum("gij,hj->ghi", T.phi, F)) % M.orders
    return bool(np.array_equal(lhs, rhs))


# ----------------------------------------------------------------- H^2

def h2_group(T: GroupTriple, gens=None, max_size=None, chunk=None) -> CohomologyGroup:
    """Normalized 2-cocycles modulo coboundaries, via restricted cochains."""
    G, M = T.G, T.M
    bound = max_size if max_size is not None else size_bound(M.p)
    if G.size > bound:
        raise SizeBoundExceeded(f"|G| = {G.size} exceeds the bound {bound}")
    C = GroupCochains(T, gens)
    dom = C.orders2()
    if not dom:
        return CohomologyGroup(np.zeros((0, 0)), np.zeros((0, 0)), [], M.p, side="group", degree=2, context=C)
    E = _E(dom)
    rs = RowSpan(len(dom), M.p, E)
    per_x = G.size * M.rank * len(dom) * 8
    step = chunk or max(1, min(64, (64 << 20) // max(per_x, 1)))
    for s in range(0, len(C.nonid), step):
        xs = C.nonid[s:s + step]
        rows = C._edge_rows(xs)
        nper = len(rows) // (len(xs) * M.rank) if len(rows) else 0
        rs.add(rows, np.tile(M.exps, len(xs) * nper))
    Z = rs.kernel(dom)
    B = C.coboundaries2()
    return CohomologyGroup(Z, B, dom, M.p, side="group", degree=2, context=C)


def first_cocycle_violation(T: GroupTriple, f):
    f = np.ascontiguousarray(np.asarray(f, np.int64) % T.M.orders)
    return kernels.first_cocycle_violation(T.G.table(), T.phi, f, T.M.orders)


def is_normalized(T: GroupTriple, f) -> bool:
    e = T.G.identity
    f = np.asarray(f) % T.M.orders
    return not f[e].any() and not f[:, e].any()


def h2_group_bruteforce(T: GroupTriple) -> CohomologyGroup:
    """Oracle: the full normalized bar complex (tiny groups only)."""
    G, M = T.G, T.M
    n, m = G.size, M.rank
    e = G.identity
    non = [g for g in range(n) if g != e]
    pos = {g: i for i, g in enumerate(non)}
    k = len(non)
    nU = k * k * m
    table = G.table()

    def col(x, y):
        return (pos[x] * k + pos[y]) * m

    dom = list(M.exps) * (k * k)
    rs = RowSpan(nU, M.p, _E(dom))
    for x in non:
        rows = []
        for y in non:
            for z in non:
                R = np.zeros((m, nU), np.int64)
                R[:, col(y, z):col(y, z) + m] += T.phi[x]
                xy, yz = table[x, y], table[y, z]
                if xy != e:
                    R[:, col(xy, z):col(xy, z) + m] -= np.eye(m, dtype=np.int64)
                if yz != e:
                    R[:, col(x, yz):col(x, yz) + m] += np.eye(m, dtype=np.int64)
                R[:, col(x, y):col(x, y) + m] -= np.eye(m, dtype=np.int64)
                rows.append(R)
        rs.add(np.concatenate(rows), np.tile(M.exps, len(rows)))
    Z = rs.kernel(dom)
    B = []
    for g in non:
        for q in range(m):
            v = np.zeros((k, k, m), np.int64)
            for x in non:
                for y in non:
                    if y == g:
                        v[pos[x], pos[y]] += T.phi[x][:, q]
                    if table[x, y] == g:
                        v[pos[x], pos[y], q] -= 1
                    if x == g:
                        v[pos[x], pos[y], q] += 1
            B.append(v.reshape(-1) % np.tile(M.orders, k * k))
    ctx = {"non": non, "pos": pos}
    return CohomologyGroup(Z, np.array(B).reshape(-1, nU), dom, M.p, side="group", degree=2, context=ctx)


def bruteforce_vector(T: GroupTriple, f) -> np.ndarray:
    e = T.G.identity
    non = [g for g in range(T.G.size) if g != e]
    return (np.asarray(f)[np.ix_(non, non)] % T.M.orders).reshape(-1)


# ------------------------------------------------------------ extensions

class ExtensionGroup(FiniteGroup):
    """M x G with (m, x)(n, y) = (m + phi(x) n + f(x, y), xy).

    Element index = x * |M| + index(m).
    """

    def __init__(self, T: GroupTriple, f):
        self.T = T
        self.M = T.M
        self.G = T.G
        self.f = np.asarray(f, np.int64) % T.M.orders
        self.nM = T.M.size
        self.size = self.nM * T.G.size
        self.identity = T.G.identity * self.nM
        self._els = T.M.elements()
        self._tab = None
        if self.size <= 1024:
            idx = np.arange(self.size, dtype=np.int64)
            self._tab = self._mul(idx[:, None], idx[None, :])

    def split(self, idx):
        idx = np.asarray(idx, np.int64)
        return self._els[idx % self.nM], idx // self.nM

    def join(self, mvec, x):
        return np.asarray(x, np.int64) * self.nM + self.M.index(mvec)

    def _mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, np.int64), np.asarray(b, np.int64))
        ma, xa = self.split(a)
        mb, xb = self.split(b)
        xy = self.G.mul_idx(xa, xb)
        mm = ma + np.einsum("...ij,...j->...i", self.T.phi[xa], mb) + self.f[xa, xb]
        return self.join(mm % self.M.orders, xy)

    def mul_idx(self, a, b):
        if self._tab is not None:
            return self._tab[a, b]
        return self._mul(a, b)

    def inv_idx(self, a):
        m, x = self.split(a)
        xi = self.G.inv_idx(x)
        phi_inv = self.T.phi[xi]
        n = -np.einsum("...ij,...j->...i", phi_inv, m + self.f[x, xi])
        return self.join(n % self.M.orders, xi)

    def generator_indices(self):
        iota = self.iota()
        gens = [iota[self.M.index(np.eye(self.M.rank, dtype=np.int64)[q])] for q in range(self.M.rank)]
        gens += [int(self.join(np.zeros(self.M.rank, np.int64), s)) for s in self.G.generator_indices()]
        return np.array(gens, np.int64)

    def iota(self) -> np.ndarray:
        return self.G.identity * self.nM + np.arange(self.nM, dtype=np.int64)

    def proj(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64) // self.nM

    def data(self) -> "GroupExtensionData":
        return GroupExtensionData(self, self.iota(), self.proj())


@dataclass
class GroupExtensionData:
    """An extension 1 -> M -> E -> G -> 1 given by index maps."""

    E: FiniteGroup
    iota: np.ndarray  # M element index -> E index
    proj: np.ndarray  # E index -> G index


def extension_from_cocycle(T: GroupTriple, f) -> ExtensionGroup:
    bad = first_cocycle_violation(T, f)
    if bad is not None:
        raise ValueError(f"cocycle identity fails at (x, y, z) = {bad}")
    if not is_normalized(T, f):
        raise ValueError("cocycle is not normalized")
    return ExtensionGroup(T, f)


def cocycle_from_extension(T: GroupTriple, ext: GroupExtensionData) -> np.ndarray:
    """f(x, y) = s(x) s(y) s(xy)^-1 for the least-index section s."""
    E, G, M = ext.E, T.G, T.M
    inv_iota = np.full(E.size, -1, np.int64)
    inv_iota[ext.iota] = np.arange(M.size)
    sec = np.full(G.size, -1, np.int64)
    for e in range(E.size - 1, -1, -1):
        sec[ext.proj[e]] = e
    sec[G.identity] = E.identity
    els = M.elements()
    # the conjugation action must be the triple's action
    for s in G.generator_indices():
        for q in range(M.rank):
            mq = ext.iota[M.index(np.eye(M.rank, dtype=np.int64)[q])]
            c = E.mul_idx(E.mul_idx(sec[s], mq), E.inv_idx(sec[s]))
            if inv_iota[c] < 0 or not np.array_equal(els[inv_iota[c]], T.phi[s][:, q] % M.orders):
                raise ValueError("extension induces a different action")
    idx = np.arange(G.size, dtype=np.int64)
    xy = G.mul_idx(idx[:, None], idx[None, :])
    w = E.mul_idx(E.mul_idx(sec[:, None], sec[None, :]), E.inv_idx(sec[xy]))
    mi = inv_iota[w]
    if (mi < 0).any():
        raise ValueError("section products leave the kernel; not an extension of G by M")
    return els[mi]


def coset_quotient(keys, mul, D):
    """Quotient of the group on integer ``keys`` by the normal subgroup D.

    ``mul`` multiplies key arrays elementwise.  Each coset is labelled by
    its least key, so only the quotient's own table is ever built.
    """
    keys = np.asarray(keys, np.int64)
    D = np.asarray(D, np.int64)

    def canon(k):
        k = np.asarray(k, np.int64)
        return mul(k[..., None], D).min(axis=-1)

    reps = np.unique(canon(keys))

    def label(k):
        c = canon(k)
        pos = np.searchsorted(reps, c)
        if np.any(pos >= len(reps)) or np.any(reps[np.minimum(pos, len(reps) - 1)] != c):
            raise ValueError("product left the group")
        return pos

    table = np.empty((len(reps), len(reps)), np.int64)
    step = max(1, (1 << 22) // max(len(reps) * len(D), 1))
    for s in range(0, len(reps), step):
        table[s:s + step] = label(mul(reps[s:s + step, None], reps[None, :]))
    return table, reps, label


def _kernel_coords(T: GroupTriple, ext: GroupExtensionData):
    """Write every e as iota(m) s(g) for the least-index section s; return m indices."""
    E = ext.E
    inv_iota = np.full(E.size, -1, np.int64)
    inv_iota[ext.iota] = np.arange(T.M.size)
    sec = np.full(T.G.size, -1, np.int64)
    for e in range(E.size - 1, -1, -1):
        sec[ext.proj[e]] = e
    sec[T.G.identity] = E.identity
    idx = np.arange(E.size, dtype=np.int64)
    m = inv_iota[E.mul_idx(idx, E.inv_idx(sec[ext.proj]))]
    if (m < 0).any():
        raise ValueError("fibres of the projection are not M-cosets")
    return m, sec


def baer_sum_group(T: GroupTriple, x: GroupExtensionData, y: GroupExtensionData) -> GroupExtensionData:
    """Pull back over G, then divide by {(iota1(m), iota2(-m))}.

    With e = iota(m) s(g) in each factor, the coset of (a, b) is determined
    by (g, m_a + m_b), which labels the quotient directly.
    """
    M, G = T.M, T.G
    nM = M.size
    els = M.elements()
    ma, s1 = _kernel_coords(T, x)
    mb, s2 = _kernel_coords(T, y)
    g = np.repeat(np.arange(G.size, dtype=np.int64), nM)
    mm = np.tile(np.arange(nM, dtype=np.int64), G.size)
    # representative of label g*|M| + m: (iota1(m) s1(g), s2(g))
    ra = x.E.mul_idx(x.iota[mm], s1[g])
    rb = s2[g]
    n = len(g)
    table = np.empty((n, n), np.int64)
    step = max(1, (1 << 21) // n)
    for s in range(0, n, step):
        pa = x.E.mul_idx(ra[s:s + step, None], ra[None, :])
        pb = y.E.mul_idx(rb[s:s + step, None], rb[None, :])
        gg = x.proj[pa]
        if not np.array_equal(gg, y.proj[pb]):
            raise ValueError("projections disagree on the pull-back")
        table[s:s + step] = gg * nM + M.index((els[ma[pa]] + els[mb[pb]]) % M.orders)
    Q = CayleyGroup(table, int(G.identity) * nM, check=False)
    return GroupExtensionData(Q, G.identity * nM + np.arange(nM, dtype=np.int64), g)


def group_cocycle_sum(T: GroupTriple, f1, f2):
    return (np.asarray(f1) + np.asarray(f2)) % T.M.orders


def split_cocycle(T: GroupTriple) -> np.ndarray:
    return np.zeros((T.G.size, T.G.size, T.M.rank), np.int64)
