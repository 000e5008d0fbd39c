"""Groups exp(L) with BCH multiplication, finite-group utilities, and log.

Every group exposes an index interface (elements are 0..size-1, identity at
``identity``) so subgroup and quotient algorithms work uniformly on
``LazardGroup`` and ``CayleyGroup``.  Subgroups are sorted index arrays.
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import freelie, kernels
from .liering import NilLieRing
from .ring import PAdicPole, local_int


class LazardBoundViolated(ValueError):
    pass


TABLE_LIMIT = 1024  # Cayley tables are cached for groups up to this order


def _table_limit() -> int:
    return TABLE_LIMIT


def size_bound(p: int, exponent: int = 3) -> int:
    """Enumeration cap: LAZARD_MAX_ELEMENTS if set, else p**exponent."""
    env = os.environ.get("LAZARD_MAX_ELEMENTS")
    return int(env) if env else p**exponent


class FiniteGroup:
    """Index-level algorithms shared by all finite groups here."""

    size: int
    identity: int = 0

    # subclasses provide mul_idx / inv_idx
    def mul_idx(self, a, b):
        raise NotImplementedError

    def inv_idx(self, a):
        raise NotImplementedError

    def generator_indices(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def pow_idx(self, a, n: int):
        a = np.asarray(a, np.int64)
        if n < 0:
            a, n = self.inv_idx(a), -n
        out = np.full(a.shape, self.identity, np.int64)
        while n:
            if n & 1:
                out = self.mul_idx(out, a)
            a = self.mul_idx(a, a)
            n >>= 1
        return out

    def comm_idx(self, a, b):
        """(a, b) = a^-1 b^-1 a b."""
        return self.mul_idx(self.mul_idx(self.inv_idx(a), self.inv_idx(b)), self.mul_idx(a, b))

    def conj_idx(self, a, g):
        """a^g = g^-1 a g."""
        return self.mul_idx(self.mul_idx(self.inv_idx(g), a), g)

    def element_order(self, a: int) -> int:
        k, x = 1, int(a)
        while x != self.identity:
            x = int(self.mul_idx(x, a))
            k += 1
        return k

    # -------------------------------------------------------------- closures
    def closure(self, gens) -> np.ndarray:
        gens = np.unique(np.asarray(gens, np.int64).reshape(-1))
        mask = np.zeros(self.size, dtype=bool)
        mask[self.identity] = True
        frontier = np.array([self.identity], np.int64)
        if gens.size == 0:
            return frontier
        while frontier.size:
            prod = self.mul_idx(frontier[:, None], gens[None, :]).reshape(-1)
            new = np.unique(prod[~mask[prod]])
            mask[new] = True
            frontier = new
        return np.flatnonzero(mask)

    subgroup_closure = closure

    def is_subgroup(self, S) -> bool:
        S = np.asarray(S, np.int64)
        mask = np.zeros(self.size, bool)
        mask[S] = True
        if not mask[self.identity]:
            return False
        return bool(mask[self.mul_idx(S[:, None], S[None, :])].all())

    def is_normal(self, N) -> bool:
        N = np.asarray(N, np.int64)
        mask = np.zeros(self.size, bool)
        mask[N] = True
        g = self.generator_indices()
        return bool(mask[self.conj_idx(N[:, None], g[None, :])].all())

    def generating_set(self, H) -> np.ndarray:
        """Greedy small generating set of the subgroup H (least new element first)."""
        H = np.asarray(H, np.int64)
        if H.size == self.size:
            return np.asarray(self.generator_indices(), np.int64)
        gens = []
        mask = np.zeros(self.size, bool)
        mask[self.identity] = True
        for h in H:
            if not mask[h]:
                gens.append(int(h))
                mask[:] = False
                mask[self.closure(gens)] = True
        return np.array(gens, np.int64)

    def normal_closure(self, S) -> np.ndarray:
        gens = [int(s) for s in np.unique(np.asarray(S, np.int64).reshape(-1))]
        H = self.closure(gens)
        g = self.generator_indices()
        while True:
            mask = np.zeros(self.size, bool)
            mask[H] = True
            conj = self.conj_idx(np.asarray(gens, np.int64)[:, None], g[None, :]).reshape(-1)
            out = conj[~mask[conj]]
            if out.size == 0:
                return H
            gens.append(int(out[0]))
            H = self.closure(gens)

    def commutator(self, A, B) -> np.ndarray:
        """[A, B] = normal closure of commutators of generators (A, B normal)."""
        a = self.generating_set(A)
        b = self.generating_set(B)
        c = np.unique(self.comm_idx(a[:, None], b[None, :]).reshape(-1))
        return self.normal_closure(c)

    def gamma_series(self) -> list[np.ndarray]:
        G = np.arange(self.size, dtype=np.int64)
        series = [G]
        while series[-1].size > 1:
            nxt = self.commutator(series[-1], G)
            if nxt.size == series[-1].size:
                raise ValueError("group is not nilpotent")
            series.append(nxt)
        return series

    def nilpotency_class(self) -> int:
        return len(self.gamma_series()) - 1

    def power_subgroup(self, N, p: int) -> np.ndarray:
        N = np.asarray(N, np.int64)
        return self.closure(np.unique(self.pow_idx(N, p)))

    def agemo_mixed(self, N, p: int) -> np.ndarray:
        """N^p [G, N]."""
        N = np.asarray(N, np.int64)
        g = self.generator_indices()
        n = self.generating_set(N)
        gens = np.concatenate([self.pow_idx(N, p).reshape(-1), self.comm_idx(g[:, None], n[None, :]).reshape(-1)])
        return self.normal_closure(np.unique(gens))

    def center(self) -> np.ndarray:
        G = np.arange(self.size, dtype=np.int64)
        g = self.generator_indices()
        comm = self.comm_idx(G[:, None], g[None, :])
        return G[(comm == self.identity).all(axis=1)]

    @property
    def prime(self) -> int:
        n, k = self.size, 2
        while n > 1 and n % k:
            k += 1
        return k if n > 1 else 1

    def frattini(self) -> np.ndarray:
        G = np.arange(self.size, dtype=np.int64)
        return self.agemo_mixed(G, self.prime)

    def minimal_generators(self) -> np.ndarray:
        """A generating set mapping onto a basis of G / Phi(G)."""
        cached = self.__dict__.get("_mingens")
        if cached is not None:
            return cached
        if self.size == 1:
            out = np.zeros(0, np.int64)
        else:
            phi = self.generating_set(self.frattini())
            chosen = []
            mask = np.zeros(self.size, bool)
            mask[self.closure(phi)] = True
            cands = np.concatenate([self.generator_indices(), np.arange(self.size, dtype=np.int64)])
            for g in cands:
                if mask.all():
                    break
                if not mask[g]:
                    chosen.append(int(g))
                    mask[:] = False
                    mask[self.closure(np.concatenate([phi, chosen]).astype(np.int64))] = True
            out = np.array(chosen, np.int64)
        self.__dict__["_mingens"] = out
        return out

    # ------------------------------------------------------------ quotients
    def coset_labels(self, N) -> tuple[np.ndarray, np.ndarray]:
        """Label each element by its left coset gN; representatives are minimal."""
        N = np.asarray(N, np.int64)
        label = np.full(self.size, -1, np.int64)
        reps = []
        for g in range(self.size):
            if label[g] < 0:
                label[self.mul_idx(g, N)] = len(reps)
                reps.append(g)
        return label, np.array(reps, np.int64)

    def quotient(self, N, check=None) -> "CayleyGroup":
        if not self.is_normal(N):
            raise ValueError("quotient by a non-normal subgroup")
        label, reps = self.coset_labels(N)
        table = label[self.mul_idx(reps[:, None], reps[None, :])]
        n = len(reps)
        Q = CayleyGroup(table, identity=int(label[self.identity]), check=(n <= 343) if check is None else check)
        Q.projection = label
        Q.representatives = reps
        return Q

    def table(self) -> np.ndarray:
        idx = np.arange(self.size, dtype=np.int64)
        return self.mul_idx(idx[:, None], idx[None, :])


class CayleyGroup(FiniteGroup):
    """A finite group given by its multiplication table."""

    def __init__(self, table, identity: int = 0, check: bool = True):
        t = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
        n = t.shape[0]
        if t.shape != (n, n):
            raise ValueError("table must be square")
        self._table = t
        self._table.setflags(write=False)
        self.size = n
        self.identity = int(identity)
        self.projection = None
        self.representatives = None
        if check:
            self.check()
        inv = np.argmax(t == self.identity, axis=1)
        self._inv = inv.astype(np.int64)

    def check(self):
        t, e, n = self._table, self.identity, self.size
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entries out of range")
        if not (np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))):
            raise ValueError("identity axiom fails")
        if not (t == e).any(axis=1).all():
            raise ValueError("inverse axiom fails")
        bad = kernels.first_nonassociative(t)
        if bad is not None:
            raise ValueError(f"associativity fails at {bad}")

    def mul_idx(self, a, b):
        return self._table[a, b]

    def inv_idx(self, a):
        return self._inv[a]

    def table(self):
        return self._table

    @cached_property
    def _gens(self) -> np.ndarray:
        # greedy generating set: add the least element outside the current span
        gens, H = [], np.array([self.identity])
        mask = np.zeros(self.size, bool)
        mask[H] = True
        while not mask.all():
            g = int(np.flatnonzero(~mask)[0])
            gens.append(g)
            H = self.closure(gens)
            mask[:] = False
            mask[H] = True
        return np.array(gens, np.int64)

    def generator_indices(self) -> np.ndarray:
        return self._gens


class LazardGroup(FiniteGroup):
    """exp(L): the coordinates of L with multiplication H(a, b)."""

    def __init__(self, L: NilLieRing, check_class: bool = True):
        self.lie = L
        self.p = L.p
        self.size = L.size
        self.identity = 0
        c = L.nilpotency_class()
        self.c = c
        if check_class and c >= L.p:
            raise LazardBoundViolated(f"Lazard bound violated: needs c < p (c={c}, p={L.p})")
        self.bch = freelie.bch_table(max(c, 1))
        try:
            self._coefs = [
                (tree, local_int(q, L.p, L.E)) for w, tree, q in self.bch.entries if len(w) > 1
            ]
        except PAdicPole as exc:
            raise LazardBoundViolated(f"Lazard bound violated: {exc}") from exc
        self._table_cache = None

    def __repr__(self):
        return f"LazardGroup({self.lie!r})"

    @property
    def rank(self):
        return self.lie.rank

    # ----------------------------------------------------- element level
    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, np.int64)
        b = np.asarray(b, np.int64)
        one = a.ndim == 1 and b.ndim == 1
        A, B = np.broadcast_arrays(np.atleast_2d(a), np.atleast_2d(b))
        out = self._mul_batch(np.ascontiguousarray(A), np.ascontiguousarray(B))
        return out[0] if one else out

    g_mul = mul

    def _mul_batch(self, A, B):
        L = self.lie
        out = (A + B) % L.orders
        if not self._coefs:
            return out
        memo = {0: A, 1: B}

        def ev(t):
            key = t
            if key not in memo:
                memo[key] = L.bracket_batch(ev(t[0]), ev(t[1]))
            return memo[key]

        PE = self.p**L.E
        for tree, q in self._coefs:
            out = (out + (q % PE) * ev(tree)) % L.orders
        return out

    def inv(self, a) -> np.ndarray:
        return (-np.asarray(a, np.int64)) % self.lie.orders

    g_inv = inv

    def pow(self, a, n) -> np.ndarray:
        if isinstance(n, Fraction):
            n = local_int(n, self.p, self.lie.E)
        return self.lie.scale(int(n), a)

    def comm(self, a, b):
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    # ------------------------------------------------------- index level
    def to_index(self, v):
        return self.lie.index(v)

    def to_element(self, i):
        return self.lie.element(i)

    def _ensure_table(self):
        if self._table_cache is None and self.size <= _table_limit():
            idx = np.arange(self.size, dtype=np.int64)
            els = self.lie.element(idx)
            t = np.empty((self.size, self.size), np.int64)
            for i in range(self.size):
                t[i] = self.lie.index(self._mul_batch(np.repeat(els[i:i + 1], self.size, 0), els))
            t.setflags(write=False)
            self._table_cache = t
        return self._table_cache

    def mul_idx(self, a, b):
        t = self._ensure_table()
        if t is not None:
            return t[a, b]
        a = np.asarray(a, np.int64)
        b = np.asarray(b, np.int64)
        A, B = np.broadcast_arrays(a, b)
        shape = A.shape
        flatA, flatB = A.reshape(-1), B.reshape(-1)
        out = np.empty(flatA.size, np.int64)
        step = 1 << 16
        for s in range(0, flatA.size, step):
            ea = self.lie.element(flatA[s:s + step])
            eb = self.lie.element(flatB[s:s + step])
            out[s:s + step] = self.lie.index(self._mul_batch(ea, eb))
        return out.reshape(shape) if shape else int(out[0])

    def inv_idx(self, a):
        return self.lie.index(self.inv(self.lie.element(a)))

    def pow_idx(self, a, n):
        return self.lie.index(self.pow(self.lie.element(a), n))

    def generator_indices(self) -> np.ndarray:
        return np.array([self.lie.index(self.lie.basis_vector(i)) for i in range(self.rank)], np.int64)

    def table(self):
        t = self._ensure_table()
        return t if t is not None else super().table()

    def cayley(self) -> CayleyGroup:
        return CayleyGroup(self.table(), 0, check=False)

    def subset_from_submodule(self, S) -> np.ndarray:
        return np.sort(self.lie.index(S.element_array().reshape(-1, self.rank)))


def exp_ring(L: NilLieRing) -> LazardGroup:
    return LazardGroup(L)


def quotient_group(G: FiniteGroup, N) -> CayleyGroup:
    return G.quotient(N)


# ------------------------------------------------------------------- log

def _pow_rational(mul, inv, one, a, q: Fraction, p: int, E: int):
    n = local_int(Fraction(q), p, E)
    out, base = one, a
    while n:
        if n & 1:
            out = mul(out, base)
        base = mul(base, base)
        n >>= 1
    return out


def eval_word(word, a, b, mul, inv, one, p, E):
    """Ordered product of rational powers of commutator trees in a, b."""
    out = one
    for tree, q in word:
        cw = freelie.commutator_word(tree, (a, b), mul, inv)
        out = mul(out, _pow_rational(mul, inv, one, cw, q, p, E))
    return out


def lie_sum_via_group(G, a, b, c=None):
    """h1(a, b): the Lie sum computed with group operations only."""
    c = c if c is not None else max(G.c, 1)
    h1, _ = freelie.inverse_bch_words(c)
    one = np.zeros_like(np.asarray(a))
    return eval_word(h1, a, b, G.mul, G.inv, one, G.p, G.lie.E)


def lie_bracket_via_group(G, a, b, c=None):
    """h2(a, b): the Lie bracket computed with group operations only."""
    c = c if c is not None else max(G.c, 1)
    one = np.zeros_like(np.asarray(a))
    if c < 2:
        return one
    _, h2 = freelie.inverse_bch_words(c)
    return eval_word(h2, a, b, G.mul, G.inv, one, G.p, G.lie.E)


def recover_lie(G: LazardGroup, c: int | None = None) -> NilLieRing:
    """log(G): rebuild structure constants from group multiplication.

    Sum and bracket are group words (commutator powers) built weight by
    weight; the element coordinates are only used to name the output, and
    each reading is cross-checked by reassembling it with group operations.
    """
    c = c if c is not None else max(G.c, 1)
    if c >= G.p:
        raise LazardBoundViolated(f"Lazard bound violated: needs c < p (c={c}, p={G.p})")
    L = G.lie
    r = L.rank
    basis = [L.basis_vector(i) for i in range(r)]
    one = L.zero()
    E = L.E
    exps = []
    for v in basis:
        k, x = 0, one
        while True:
            x = G.mul(x, v)
            k += 1
            if not x.any():
                break
        e = 0
        while k % G.p == 0:
            k //= G.p
            e += 1
        if k != 1:
            raise ValueError("basis element order is not a power of p")
        exps.append(e)

    def assemble(coords):
        out = one
        for i in range(r):
            out = lie_sum_via_group(G, out, _pow_rational(G.mul, G.inv, one, basis[i], int(coords[i]), G.p, E), c)
        return out

    C = np.zeros((r, r, r), np.int64)
    for i in range(r):
        for j in range(r):
            v = lie_bracket_via_group(G, basis[i], basis[j], c)
            coords = L.reduce(v)
            if not np.array_equal(assemble(coords), v):
                raise RuntimeError("recovered bracket does not reassemble; class misdeclared?")
            C[i, j] = coords
    return NilLieRing(G.p, exps, C, L.labels)
