"""Brute-force reference computations used to derive the frozen test values.

Nothing here imports the package's linear algebra.  Everything is done by
enumeration or by plain Gaussian elimination over F_p, so agreement with
the library is evidence rather than an echo.
"""
from collections import deque
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np


# ------------------------------------------------------ finite abelian groups

def closure(gens, orders):
    """All sums of the generators inside (+) Z/orders, by BFS."""
    orders = tuple(int(o) for o in orders)
    zero = tuple(0 for _ in orders)
    gens = [tuple(int(x) % o for x, o in zip(g, orders)) for g in gens]
    seen = {zero}
    todo = deque([zero])
    while todo:
        v = todo.popleft()
        for g in gens:
            w = tuple((a + b) % o for a, b, o in zip(v, g, orders))
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def invariants_of(elements, orders, p):
    """Invariant factors of a finite abelian p-group given as a set of vectors.

    Uses n_k = #{x : p^k x = 0}; the number of cyclic factors of order at
    least p^k is log_p(n_k / n_{k-1}).
    """
    orders = [int(o) for o in orders]
    counts = [1]
    k = 0
    while counts[-1] < len(elements):
        k += 1
        q = p**k
        counts.append(sum(1 for x in elements if all((q * a) % o == 0 for a, o in zip(x, orders))))
    at_least = [round(np.log(counts[i] / counts[i - 1]) / np.log(p)) for i in range(1, len(counts))]
    out = []
    for i, n in enumerate(at_least):
        nxt = at_least[i + 1] if i + 1 < len(at_least) else 0
        out += [p ** (i + 1)] * (n - nxt)
    return sorted(out)


def abelian_h2_trivial(n_cyclic):
    """H^2(A, Z/p) for an abelian p-group with n cyclic factors, p odd."""
    return n_cyclic + comb(n_cyclic, 2)


# ---------------------------------------------------------- F_p linear algebra

def rank_mod_p(A, p):
    A = np.unique(np.array(A, dtype=np.int64) % p, axis=0)
    if A.shape[0] > A.shape[1]:
        A = A.T.copy()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        nz = np.flatnonzero(A[:, c])
        nz = nz[nz != r]
        A[nz] = (A[nz] - np.outer(A[nz, c], A[r])) % p
        r += 1
        if r == rows:
            break
    return r


def group_h2_dim(table, phi, p):
    """dim H^2(G, M) for M = F_p^m by the inhomogeneous bar complex.

    ``table`` is the Cayley table (identity 0), ``phi[g]`` the action matrix
    on column vectors.  Returns dim Z^2 - dim B^2.
    """
    n = table.shape[0]
    m = phi.shape[1]
    n2 = n * n * m

    def var(g, h, i):
        return (g * n + h) * m + i

    # cocycle condition: g.f(h,k) - f(gh,k) + f(g,hk) - f(g,h) = 0
    g, h, k = (x.reshape(-1) for x in np.indices((n, n, n)))
    t = g.size
    D2 = np.zeros((t * m, n2), np.int64)
    for i in range(m):
        rows = np.arange(t) * m + i
        for j in range(m):
            np.add.at(D2, (rows, var(h, k, j)), phi[g, i, j])
        np.add.at(D2, (rows, var(table[g, h], k, i)), -1)
        np.add.at(D2, (rows, var(g, table[h, k], i)), 1)
        np.add.at(D2, (rows, var(g, h, i)), -1)
    dim_z2 = n2 - rank_mod_p(D2 % p, p)
    # coboundaries of 1-cochains: (dc)(g,h) = g.c(h) - c(gh) + c(g)
    g, h = (x.reshape(-1) for x in np.indices((n, n)))
    D1 = np.zeros((n * m, n2), np.int64)
    for i in range(m):
        for j in range(m):
            np.add.at(D1, (h * m + j, var(g, h, i)), phi[g, i, j])
        np.add.at(D1, (table[g, h] * m + i, var(g, h, i)), -1)
        np.add.at(D1, (g * m + i, var(g, h, i)), 1)
    return dim_z2 - rank_mod_p(D1 % p, p)


# ------------------------------------------------------------ degree one

def group_h1(table, gens, phi, orders, p):
    """Invariants of H^1(G, M) by enumerating crossed homs on generators."""
    n = table.shape[0]
    m = len(orders)
    orders = np.array(orders, np.int64)
    Mels = [np.array(v, np.int64) for v in product(*[range(int(o)) for o in orders])]
    Z = []
    for imgs in product(range(len(Mels)), repeat=len(gens)):
        F = {0: np.zeros(m, np.int64)}
        todo = deque([0])
        ok = True
        while todo and ok:
            g = todo.popleft()
            for s, im in zip(gens, imgs):
                # F(g s) = F(g) + g . F(s)
                val = (F[g] + phi[g] @ Mels[im]) % orders
                h = int(table[g, s])
                if h in F:
                    ok = np.array_equal(F[h], val)
                    if not ok:
                        break
                else:
                    F[h] = val
                    todo.append(h)
        if not ok or len(F) != n:
            continue
        full = np.array([F[g] for g in range(n)])
        # full check of the crossed hom rule
        lhs = full[table]
        rhs = (full[:, None, :] + np.einsum("gij,hj->ghi", phi, full)) % orders
        if np.array_equal(lhs % orders, rhs):
            Z.append(tuple(full.reshape(-1).tolist()))
    B = {tuple(np.concatenate([(phi[g] @ mv - mv) % orders for g in range(n)]).tolist()) for mv in Mels}
    return _sub_quotient(Z, B, orders, n, p)


def _sub_quotient(Z, B, orders, blocks, p):
    tile = np.tile(np.array(orders, np.int64), blocks)

    def red(v):
        return tuple((np.array(v, np.int64) % tile).tolist())

    Bset = {red(b) for b in B}
    Zset = {red(z) for z in Z}
    total = len(Zset) // len(Bset)
    counts = [1]
    k = 0
    while counts[-1] < total:
        k += 1
        q = p**k
        counts.append(sum(1 for z in Zset if red([q * a for a in z]) in Bset) // len(Bset))
    at_least = [round(np.log(counts[i] / counts[i - 1]) / np.log(p)) for i in range(1, len(counts))]
    out = []
    for i, c in enumerate(at_least):
        nxt = at_least[i + 1] if i + 1 < len(at_least) else 0
        out += [p ** (i + 1)] * (c - nxt)
    return sorted(out)


def lie_h1(C, ring_orders, psi, orders, p):
    """Invariants of H^1(L, M): derivations modulo inner ones, by enumeration.

    D([a, b]) = a.D(b) - b.D(a); inner derivations are a -> a.m.
    """
    r = len(ring_orders)
    orders = np.array(orders, np.int64)
    m = len(orders)
    Mels = np.array(list(product(*[range(int(o)) for o in orders])), np.int64).reshape(-1, m)
    Z = []
    combos = list(product(range(len(Mels)), repeat=r - 1))
    rest = np.array(combos, np.int64).reshape(len(combos), r - 1)
    for first in range(len(Mels)):
        # all candidates with D(b_1) = Mels[first], vectorized over the rest
        D = np.concatenate([np.broadcast_to(Mels[first], (len(rest), 1, m)), Mels[rest]], axis=1)
        ok = np.ones(len(D), bool)
        for i in range(r):
            ok &= ~((int(ring_orders[i]) * D[:, i]) % orders).any(axis=1)
        for i in range(r):
            for j in range(i + 1, r):
                lhs = np.einsum("k,nkm->nm", np.asarray(C[i, j], np.int64), D) % orders
                rhs = (D[:, j] @ psi[i].T - D[:, i] @ psi[j].T) % orders
                ok &= (lhs == rhs).all(axis=1)
        Z += [tuple(x) for x in D[ok].reshape(-1, r * m).tolist()]
    Mels = list(Mels)
    B = {tuple(np.concatenate([(psi[i] @ mv) % orders for i in range(r)]).tolist()) for mv in Mels}
    return _sub_quotient(Z, B, orders, r, p)


# -------------------------------------------------------------------- BCH

class NC:
    """Truncated noncommutative polynomials in x=0, y=1 over Q."""

    def __init__(self, terms, cut):
        self.t = {w: c for w, c in terms.items() if c}
        self.cut = cut

    def __add__(self, o):
        t = dict(self.t)
        for w, c in o.t.items():
            t[w] = t.get(w, 0) + c
        return NC(t, self.cut)

    def scale(self, q):
        return NC({w: c * q for w, c in self.t.items()}, self.cut)

    def __sub__(self, o):
        return self + o.scale(-1)

    def __mul__(self, o):
        t = {}
        for a, ca in self.t.items():
            for b, cb in o.t.items():
                if len(a) + len(b) <= self.cut:
                    t[a + b] = t.get(a + b, 0) + ca * cb
        return NC(t, self.cut)


def nc_exp(a):
    one = NC({(): Fraction(1)}, a.cut)
    out, term = one, one
    for k in range(1, a.cut + 1):
        term = (term * a).scale(Fraction(1, k))
        out = out + term
    return out


def nc_log(u):
    x = u - NC({(): Fraction(1)}, u.cut)
    out = NC({}, u.cut)
    power = NC({(): Fraction(1)}, u.cut)
    for k in range(1, u.cut + 1):
        power = power * x
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def nc_tree(tree, cut):
    if isinstance(tree, int):
        return NC({(tree,): Fraction(1)}, cut)
    a, b = nc_tree(tree[0], cut), nc_tree(tree[1], cut)
    return a * b - b * a


def bch_reference(c):
    """log(exp(x) exp(y)) truncated at weight c."""
    x = NC({(0,): Fraction(1)}, c)
    y = NC({(1,): Fraction(1)}, c)
    return nc_log(nc_exp(x) * nc_exp(y))


# ------------------------------------------------------ Heisenberg matrices

def heisenberg_matrix(v, p):
    """exp(a E12 + b E23 + c E13) in the unitriangular group over F_p."""
    a, b, c = (int(t) for t in v)
    half = pow(2, -1, p)
    return np.array([[1, a, (c + half * a * b) % p], [0, 1, b], [0, 0, 1]], np.int64) % p
