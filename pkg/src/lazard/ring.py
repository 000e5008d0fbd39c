"""Exact arithmetic over Z/p^e and linear algebra over finite abelian p-groups.

A finite abelian p-group is described by an exponent vector ``orders``:
coordinate ``j`` lives in Z/p^orders[j].  Such a group embeds in (Z/p^E)^n,
E = max(orders), by multiplying coordinate j by p^(E - orders[j]); all
echelon work happens in that embedding, where Howell form is canonical.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels


class PAdicPole(ArithmeticError):
    """A rational coefficient has a denominator divisible by p."""


class MixedModuli(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_power_exponent(n: int, p: int) -> int:
    e = valuation(n, p)
    if p**e != n:
        raise ValueError(f"{n} is not a power of {p}")
    return e


@dataclass(frozen=True)
class PModInt:
    """A residue modulo p^e."""

    value: int
    p: int
    e: int = 1

    def __post_init__(self):
        if not is_prime(self.p) or self.e < 1:
            raise ValueError("modulus must be p^e with p prime and e >= 1")
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p**self.e

    def _other(self, other):
        if isinstance(other, PModInt):
            if (other.p, other.e) != (self.p, self.e):
                raise MixedModuli(f"{self.modulus} vs {other.modulus}")
            return other.value
        return int(other)

    def __add__(self, other):
        return PModInt(self.value + self._other(other), self.p, self.e)

    __radd__ = __add__

    def __sub__(self, other):
        return PModInt(self.value - self._other(other), self.p, self.e)

    def __rsub__(self, other):
        return PModInt(self._other(other) - self.value, self.p, self.e)

    def __mul__(self, other):
        return PModInt(self.value * self._other(other), self.p, self.e)

    __rmul__ = __mul__

    def __neg__(self):
        return PModInt(-self.value, self.p, self.e)

    def inverse(self) -> "PModInt":
        if self.value % self.p == 0:
            raise ZeroDivisionError(f"{self.value} is not a unit mod {self.modulus}")
        return PModInt(pow(self.value, -1, self.modulus), self.p, self.e)

    def __int__(self):
        return self.value


def plocal(numerator: int, denominator: int = 1) -> Fraction:
    """A rational number; p-locality is checked when it is reduced."""
    if denominator <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(numerator, denominator)


def reduce_local(q: Fraction, p: int, e: int = 1) -> PModInt:
    """numerator * denominator^-1 mod p^e."""
    q = Fraction(q)
    if q.denominator % p == 0:
        raise PAdicPole(f"p-adic pole: {p} divides the denominator of {q}")
    mod = p**e
    return PModInt(q.numerator * pow(q.denominator, -1, mod), p, e)


def local_int(q: Fraction, p: int, e: int) -> int:
    return reduce_local(q, p, e).value


@dataclass(frozen=True)
class PMatrix:
    """Dense matrix over Z/p^e."""

    entries: np.ndarray
    p: int
    e: int = 1

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        a = a % self.p**self.e
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def modulus(self) -> int:
        return self.p**self.e

    @property
    def shape(self):
        return self.entries.shape

    def __getitem__(self, idx) -> PModInt:
        return PModInt(int(self.entries[idx]), self.p, self.e)

    def __matmul__(self, other: "PMatrix") -> "PMatrix":
        if (self.p, self.e) != (other.p, other.e):
            raise MixedModuli(f"{self.modulus} vs {other.modulus}")
        return PMatrix(self.entries @ other.entries, self.p, self.e)

    def __eq__(self, other):
        return (
            isinstance(other, PMatrix)
            and (self.p, self.e) == (other.p, other.e)
            and self.entries.shape == other.entries.shape
            and bool(np.all(self.entries == other.entries))
        )

    def __hash__(self):
        return hash((self.p, self.e, self.entries.shape, self.entries.tobytes()))


@dataclass(frozen=True)
class InvariantFactors:
    """Prime powers p^f1 >= p^f2 >= ...; empty means the trivial group."""

    factors: tuple = ()

    def __post_init__(self):
        fs = tuple(sorted((int(f) for f in self.factors if int(f) != 1), reverse=True))
        object.__setattr__(self, "factors", fs)

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out

    @property
    def rank(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __eq__(self, other):
        if isinstance(other, InvariantFactors):
            return self.factors == other.factors
        if isinstance(other, (list, tuple)):
            return self.factors == InvariantFactors(tuple(other)).factors
        return NotImplemented

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"InvariantFactors({list(self.factors)})"


# ------------------------------------------------------------ Howell / solve

def howell_form(A: PMatrix) -> tuple[PMatrix, PMatrix]:
    """Howell form ``H`` of ``A`` and the row transform ``U`` with H = U A.

    Zero rows are dropped; rows are ordered by pivot column.  ``U`` has one
    row per row of ``H``, so it is square only when no annihilator rows are
    needed.
    """
    A = A if isinstance(A, PMatrix) else PMatrix(np.asarray(A), 2)
    n, m = A.shape
    aug = np.hstack([A.entries, np.eye(n, dtype=np.int64)])
    W, r = kernels.howell(aug, A.p, A.e, npiv=m)
    return PMatrix(W[:r, :m], A.p, A.e), PMatrix(W[:r, m:], A.p, A.e)


class Solution(NamedTuple):
    particular: np.ndarray
    kernel: np.ndarray


def solve_linear(A: PMatrix, b: Sequence) -> Solution | None:
    """Solve A x = b over Z/p^e; ``None`` when no solution exists."""
    b = np.array([int(v) for v in b], dtype=np.int64)
    if A.shape[0] != b.size:
        raise ValueError("shape mismatch")
    cols = A.shape[1]
    orders = [A.e] * cols
    sol = solve_mixed(A.entries, b, orders, [A.e] * A.shape[0], A.p)
    if sol is None:
        return None
    return Solution(sol, kernel(A.entries, orders, [A.e] * A.shape[0], A.p))


# ------------------------------------------------------------ mixed orders

def _E(*order_lists) -> int:
    return max([1] + [int(o) for ol in order_lists for o in ol])


def embed(vectors, orders, p, E) -> np.ndarray:
    v = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    scale = np.array([p ** (E - int(o)) for o in orders], dtype=np.int64)
    return (v % np.array([p**int(o) for o in orders], dtype=np.int64)) * scale % p**E


def unembed(vectors, orders, p, E) -> np.ndarray:
    scale = np.array([p ** (E - int(o)) for o in orders], dtype=np.int64)
    return np.atleast_2d(np.asarray(vectors, dtype=np.int64)) // scale


def reduce_mod(v, orders, p) -> np.ndarray:
    return np.asarray(v, dtype=np.int64) % np.array([p**int(o) for o in orders], dtype=np.int64)


def check_hom(A, dom, cod, p):
    """Raise unless A (cod x dom integer matrix) defines a homomorphism."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape != (len(cod), len(dom)):
        raise ValueError(f"matrix shape {A.shape} does not match {len(cod)}x{len(dom)}")
    for i, ci in enumerate(cod):
        for j, dj in enumerate(dom):
            if (int(A[i, j]) * p ** int(dj)) % p ** int(ci):
                raise ValueError(f"entry ({i},{j}) is not compatible with the orders")


def _kernel_howell(A, dom, cod, p, E):
    A = np.asarray(A, dtype=np.int64).reshape(len(cod), len(dom))
    Ap = embed(A.T, cod, p, E).T if len(cod) else np.zeros((0, len(dom)), np.int64)
    aug = np.hstack([Ap.T, np.eye(len(dom), dtype=np.int64)])
    return kernels.howell(aug, p, E, npiv=len(cod))


def kernel(A, dom, cod, p) -> np.ndarray:
    """Generators (rows) of the kernel of A: (+) Z/p^dom -> (+) Z/p^cod."""
    E = _E(dom, cod)
    if len(dom) == 0:
        return np.zeros((0, 0), np.int64)
    W, r = _kernel_howell(A, dom, cod, p, E)
    gens = reduce_mod(W[r:, len(cod):], dom, p)
    return Submodule(gens, dom, p).generators


def solve_mixed(A, b, dom, cod, p) -> np.ndarray | None:
    """One x with A x = b in (+) Z/p^cod, or None."""
    E = _E(dom, cod)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if len(dom) == 0:
        return np.zeros(0, np.int64) if not np.any(reduce_mod(b, cod, p)) else None
    W, r = _kernel_howell(A, dom, cod, p, E)
    return _solve_with(W, r, b, dom, cod, p, E)


def _solve_with(W, r, b, dom, cod, p, E):
    mod = p**E
    nc = len(cod)
    vec = np.zeros(W.shape[1], np.int64)
    vec[:nc] = embed(b, cod, p, E)[0] if nc else 0
    for i in range(r):
        nz = np.nonzero(W[i, :nc])[0]
        c = nz[0]
        piv = int(W[i, c])
        x = int(vec[c])
        if x % piv:
            return None
        if x:
            vec = (vec - (x // piv) * W[i]) % mod
    if np.any(vec[:nc]):
        return None
    return reduce_mod(-vec[nc:], dom, p)


class LinearSolver:
    """Repeated solves of A x = b against one factorisation."""

    def __init__(self, A, dom, cod, p):
        self.dom, self.cod, self.p = list(dom), list(cod), p
        self.E = _E(dom, cod)
        self.W, self.r = _kernel_howell(A, dom, cod, p, self.E)

    def solve(self, b):
        return _solve_with(self.W, self.r, b, self.dom, self.cod, self.p, self.E)

    def kernel(self):
        gens = reduce_mod(self.W[self.r:, len(self.cod):], self.dom, self.p)
        return Submodule(gens, self.dom, self.p).generators


class Submodule:
    """Subgroup of (+) Z/p^orders spanned by ``gens``, in canonical form."""

    def __init__(self, gens, orders, p):
        self.orders = tuple(int(o) for o in orders)
        self.p = p
        self.E = _E(self.orders)
        n = len(self.orders)
        g = np.asarray(gens, dtype=np.int64).reshape(-1, n) if n else np.zeros((0, 0), np.int64)
        if n == 0 or g.shape[0] == 0:
            self._H = np.zeros((0, n), np.int64)
        else:
            W, r = kernels.howell(embed(g, self.orders, p, self.E), p, self.E)
            self._H = W[:r]

    @property
    def generators(self) -> np.ndarray:
        return unembed(self._H, self.orders, self.p, self.E) if self._H.size else np.zeros((0, len(self.orders)), np.int64)

    @property
    def canonical(self) -> tuple:
        return tuple(map(tuple, self._H.tolist()))

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.orders == other.orders and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.orders, self.canonical))

    def order(self) -> int:
        mod = self.p**self.E
        out = 1
        for row in self._H:
            piv = int(row[np.nonzero(row)[0][0]])
            out *= mod // piv
        return out

    def is_zero(self) -> bool:
        return self._H.shape[0] == 0

    def contains(self, v) -> bool:
        mod = self.p**self.E
        vec = embed(v, self.orders, self.p, self.E)[0]
        for row in self._H:
            c = np.nonzero(row)[0][0]
            piv = int(row[c])
            x = int(vec[c])
            if x % piv:
                return False
            if x:
                vec = (vec - (x // piv) * row) % mod
        return not np.any(vec)

    def contains_all(self, other: "Submodule") -> bool:
        return all(self.contains(g) for g in other.generators)

    def element_array(self) -> np.ndarray:
        """All elements as rows, sorted lexicographically."""
        mods = np.array([self.p**o for o in self.orders], dtype=np.int64)
        radix = np.cumprod(np.concatenate([[1], mods[::-1][:-1]]))[::-1] if mods.size else mods
        gens = self.generators.reshape(-1, mods.size)
        seen = np.zeros(1, np.int64)
        frontier = np.zeros((1, mods.size), np.int64)
        while frontier.shape[0] and gens.shape[0]:
            cand = ((frontier[:, None, :] + gens[None, :, :]) % mods).reshape(-1, mods.size)
            keys, first = np.unique(cand @ radix, return_index=True)
            fresh = ~np.isin(keys, seen)
            frontier = cand[first[fresh]]
            seen = np.concatenate([seen, keys[fresh]])
        seen = np.sort(seen)
        out = np.zeros((seen.size, mods.size), np.int64)
        rest = seen.copy()
        for j, r in enumerate(radix):
            out[:, j], rest = rest // r, rest % r
        return out

    def elements(self) -> set:
        """All elements as tuples (intended for small spans)."""
        return set(map(tuple, self.element_array().tolist()))

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule(np.vstack([self.generators, other.generators]), self.orders, self.p)

    def __repr__(self):
        return f"Submodule(order={self.order()}, gens={self.generators.tolist()})"


def quotient_invariants(generators, ambient_orders, p=None) -> InvariantFactors:
    """Invariant factors of (+) Z/p^ambient_orders modulo the span of ``generators``."""
    orders = [int(o) for o in ambient_orders]
    gens = np.asarray(generators, dtype=np.int64).reshape(-1, len(orders)) if orders else np.zeros((0, 0))
    if p is None:
        raise ValueError("the prime p is required")
    mods = np.array([p**o for o in orders], dtype=np.int64)
    if gens.size and (np.any(gens < 0) or np.any(gens >= mods)):
        raise ValueError("generator out of range of the ambient module")
    if not orders:
        return InvariantFactors(())
    E = _E(orders)
    rel = np.vstack([gens, np.diag(mods)]) if gens.size else np.diag(mods)
    vals, _, _ = kernels.smith(rel, p, E)
    return InvariantFactors(tuple(p**int(v) for v in vals if v > 0))


def subgroup_invariants(gens, orders, p) -> InvariantFactors:
    """Invariant factors of the span of ``gens`` inside (+) Z/p^orders."""
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, len(orders))
    k = gens.shape[0]
    if k == 0:
        return InvariantFactors(())
    E = _E(orders)
    rel = kernel(gens.T, [E] * k, orders, p)
    rel = np.vstack([rel, p**E * np.eye(k, dtype=np.int64)]) if rel.size else p**E * np.eye(k, dtype=np.int64)
    vals, _, _ = kernels.smith(rel % p**E, p, E)
    return InvariantFactors(tuple(p**int(v) for v in vals if v > 0))


class Subquotient:
    """The group Z/B for submodules B <= Z of (+) Z/p^orders.

    Exposes invariant factors, representatives of a generating set (one per
    invariant factor) and ``coords`` that reduces an element of Z to its
    coordinate vector in those generators.
    """

    def __init__(self, z_gens, b_gens, orders, p):
        self.orders = tuple(int(o) for o in orders)
        self.p = p
        n = len(self.orders)
        E = self.E = _E(self.orders)
        Z = Submodule(z_gens, self.orders, p).generators
        self.z_gens = Z
        k = Z.shape[0]
        self._solver = LinearSolver(Z.T, [E] * k, self.orders, p) if k else None
        rows = []
        if k:
            rel = self._solver.kernel()
            rows.extend(rel)
            for b in np.asarray(b_gens, dtype=np.int64).reshape(-1, n):
                x = self._solver.solve(b)
                if x is None:
                    raise ValueError("coboundary generator not inside the cocycle span")
                rows.append(x)
            rows.append(np.zeros(k, np.int64))
            vals, Q, Qi = kernels.smith(np.array(rows, dtype=np.int64), p, E)
        else:
            vals, Q, Qi = np.zeros(0, np.int64), np.zeros((0, 0), np.int64), np.zeros((0, 0), np.int64)
        keep = [t for t in range(k) if vals[t] > 0]
        self._keep = keep
        self._Q = Q
        self.exponents = tuple(int(vals[t]) for t in keep)
        self.moduli = tuple(p**e for e in self.exponents)
        self.representatives = (
            reduce_mod((Qi[keep] @ Z) % p**E, self.orders, p) if keep else np.zeros((0, n), np.int64)
        )

    @property
    def invariants(self) -> InvariantFactors:
        return InvariantFactors(self.moduli)

    @property
    def order(self) -> int:
        return self.invariants.order

    def coords(self, z) -> np.ndarray:
        """Coordinates of the class of ``z``; raises if z is not in Z."""
        if not self._keep:
            if self._solver is not None and self._solver.solve(z) is None:
                raise ValueError("element is not in the cocycle span")
            if self._solver is None and np.any(reduce_mod(z, self.orders, self.p)):
                raise ValueError("element is not in the cocycle span")
            return np.zeros(0, np.int64)
        x = self._solver.solve(z)
        if x is None:
            raise ValueError("element is not in the cocycle span")
        y = (x @ self._Q) % self.p**self.E
        return np.array([int(y[t]) % m for t, m in zip(self._keep, self.moduli)], dtype=np.int64)

    def element(self, coords) -> np.ndarray:
        """A representative of the class with the given coordinates."""
        c = np.asarray(coords, dtype=np.int64).reshape(-1)
        if c.size == 0:
            return np.zeros(len(self.orders), np.int64)
        return reduce_mod(c @ self.representatives, self.orders, self.p)

    def is_zero(self, z) -> bool:
        return not np.any(self.coords(z))


class RowSpan:
    """Howell basis of a growing set of rows over Z/p^E, reduced in chunks.

    Rows are given with the order exponent of the coordinate they constrain
    and are embedded by p^(E - order) so all equations live in Z/p^E.
    """

    def __init__(self, ncols, p, E, chunk=None):
        self.ncols, self.p, self.E = ncols, p, E
        self.basis = np.zeros((0, ncols), np.int64)
        self._pending = []
        self._npending = 0
        self.chunk = chunk or max(4 * ncols, 256)

    def add(self, rows, row_orders):
        rows = np.asarray(rows, np.int64).reshape(-1, self.ncols)
        if rows.size == 0:
            return
        scale = np.array([self.p ** (self.E - int(o)) for o in np.broadcast_to(row_orders, (len(rows),))], np.int64)
        rows = (rows % self.p**self.E) * scale[:, None] % self.p**self.E
        rows = rows[np.any(rows, axis=1)]
        if rows.size == 0:
            return
        self._pending.append(rows)
        self._npending += len(rows)
        if self._npending >= self.chunk:
            self._flush()

    def _flush(self):
        if not self._pending:
            return
        stack = np.unique(np.vstack([self.basis] + self._pending), axis=0)
        self._pending, self._npending = [], 0
        W, r = kernels.howell(stack, self.p, self.E)
        self.basis = W[:r]

    def rows(self) -> np.ndarray:
        self._flush()
        return self.basis

    def kernel(self, dom) -> np.ndarray:
        """Generators of {x in (+) Z/p^dom : every row annihilates x}."""
        R = self.rows()
        if len(dom) == 0:
            return np.zeros((0, 0), np.int64)
        if len(R) == 0:
            return Submodule(np.eye(len(dom), dtype=np.int64), dom, self.p).generators
        return kernel(R, dom, [self.E] * len(R), self.p)


def as_rows(a, n: int) -> np.ndarray:
    """``a`` as an int64 array of shape (-1, n); zero-width input gives (0, 0)."""
    a = np.asarray(a, np.int64)
    return a.reshape(-1, n) if n else np.zeros((0, 0), np.int64)
